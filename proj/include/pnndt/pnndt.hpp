#pragma once

#include <pnndt/common.hpp>
#include <pnndt/csv.hpp>
#include <pnndt/dataset.hpp>
#include <pnndt/experiment.hpp>
#include <pnndt/features.hpp>
#include <pnndt/gmdh.hpp>
#include <pnndt/knn.hpp>
#include <pnndt/metrics.hpp>
#include <pnndt/model.hpp>
#include <pnndt/neuron.hpp>
#include <pnndt/pipeline.hpp>
#include <pnndt/synth.hpp>
#include <pnndt/tree.hpp>
