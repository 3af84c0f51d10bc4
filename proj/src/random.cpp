#include "mcpfl/random.hpp"

#include <cmath>

namespace mcpfl {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// FNV-1a over the tag bytes
std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

std::uint64_t derive_key(std::uint64_t seed, std::string_view tag) {
    return mix64(mix64(seed + kGamma) ^ hash_tag(tag));
}

RandomStream::RandomStream(std::uint64_t seed, std::string_view domain_tag)
    : state_(derive_key(seed, domain_tag)) {}

std::uint64_t RandomStream::next_u64() {
    state_ += kGamma;
    return mix64(state_);
}

double RandomStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
    // rejection sampling keeps the draw unbiased
    std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

double RandomStream::next_gaussian() {
    if (spare_gaussian_) {
        double g = *spare_gaussian_;
        spare_gaussian_.reset();
        return g;
    }
    // Box-Muller; u1 kept away from 0
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_gaussian_ = r * std::sin(theta);
    return r * std::cos(theta);
}

std::vector<double> RandomStream::gaussians(std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(next_gaussian());
    return out;
}

}  // namespace mcpfl
