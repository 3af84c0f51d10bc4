#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcpfl {

// Counter-based deterministic random stream. The key is derived from a 64-bit
// seed plus a domain tag, so distinct tags give independent streams and equal
// (seed, tag) pairs reproduce the exact same sequence on every platform.
//
// Tags follow the convention "purpose:round:id", e.g. "mask:3:1:7" or
// "noise:12:k4".
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::string_view domain_tag);

    std::uint64_t next_u64();

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double();

    // Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound);

    // Standard normal via Box-Muller (pairs cached).
    double next_gaussian();
    std::vector<double> gaussians(std::size_t n);

    // Deterministic Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
    std::optional<double> spare_gaussian_;
};

// Stable 64-bit mix of (seed, tag); also used to derive sub-seeds.
std::uint64_t derive_key(std::uint64_t seed, std::string_view tag);

}  // namespace mcpfl
