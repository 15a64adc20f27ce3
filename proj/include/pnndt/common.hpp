#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace pnndt {

/// Raised for every contract or data error in the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Class label. 0 = normal segment, 1 = artifact.
using Label = int;

inline constexpr Label kNormal = 0;
inline constexpr Label kArtifact = 1;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Derives an independent generator seed from a base seed and a stream tag.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    return detail::splitmix64(detail::splitmix64(base) ^ detail::splitmix64(tag + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag1, std::uint64_t tag2) {
    return derive_seed(derive_seed(base, tag1), tag2);
}

/// Fixed-point text with `decimals` digits; never prints "-0.000".
inline std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s = buf;
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

} // namespace pnndt
