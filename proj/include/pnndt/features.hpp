#pragma once

// Spectral feature naming for two-channel (C3, C4) sleep EEG segments:
// six bands, relative and absolute power, channels C3, C4 and their sum.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pnndt {

enum class Band { Subdelta, Delta, Theta, Alpha, Beta1, Beta2 };
enum class Channel { C3, C4, C3C4 };
enum class PowerKind { Absolute, Relative };

inline constexpr std::size_t kBandCount = 6;
inline constexpr std::size_t kChannelCount = 3;
inline constexpr std::size_t kKindCount = 2;
inline constexpr std::size_t kFeatureCount = kBandCount * kChannelCount * kKindCount;

struct FeatureDescriptor {
    Band band;
    Channel channel;
    PowerKind kind;

    /// `AbsPowThetaC4`, `RelPowBeta1C3`; the summed channel carries no suffix.
    std::string name() const {
        static constexpr std::array<std::string_view, kBandCount> bands{
            "Subdelta", "Delta", "Theta", "Alpha", "Beta1", "Beta2"};
        static constexpr std::array<std::string_view, kChannelCount> channels{"C3", "C4", ""};
        std::string s = kind == PowerKind::Absolute ? "AbsPow" : "RelPow";
        s += bands[static_cast<std::size_t>(band)];
        s += channels[static_cast<std::size_t>(channel)];
        return s;
    }

    /// Column position in the canonical 36-feature layout (kind, band, channel).
    std::size_t index() const {
        return (static_cast<std::size_t>(kind) * kBandCount + static_cast<std::size_t>(band)) * kChannelCount +
               static_cast<std::size_t>(channel);
    }

    friend bool operator==(const FeatureDescriptor&, const FeatureDescriptor&) = default;
};

inline std::vector<FeatureDescriptor> all_feature_descriptors() {
    std::vector<FeatureDescriptor> out;
    out.reserve(kFeatureCount);
    for (std::size_t k = 0; k < kKindCount; ++k)
        for (std::size_t b = 0; b < kBandCount; ++b)
            for (std::size_t c = 0; c < kChannelCount; ++c)
                out.push_back({static_cast<Band>(b), static_cast<Channel>(c), static_cast<PowerKind>(k)});
    return out;
}

inline std::vector<std::string> canonical_feature_names() {
    std::vector<std::string> names;
    names.reserve(kFeatureCount);
    for (const auto& d : all_feature_descriptors()) names.push_back(d.name());
    return names;
}

inline std::optional<FeatureDescriptor> find_feature(std::string_view name) {
    for (const auto& d : all_feature_descriptors())
        if (d.name() == name) return d;
    return std::nullopt;
}

} // namespace pnndt
