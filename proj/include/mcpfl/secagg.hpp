#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mcpfl/errors.hpp"
#include "mcpfl/random.hpp"

namespace mcpfl {

// Fixed-point vector over Z_{2^64} (natural wrap arithmetic). Negative reals
// embed via two's complement.
struct FieldVector {
    std::vector<std::uint64_t> values;
    int frac_bits = 24;

    double scale() const { return static_cast<double>(std::uint64_t{1} << frac_bits); }
};

inline constexpr int kDefaultFracBits = 24;

// Unordered client pair -> 64-bit seed, provisioned per round by the harness.
struct PairwiseSeeds {
    std::map<std::pair<int, int>, std::uint64_t> seeds;  // key is (min, max)

    void set(int a, int b, std::uint64_t seed);
    std::uint64_t get(int a, int b) const;  // throws ProtocolError when absent
};

struct MaskedUpdate {
    int client_id = -1;
    int round = 0;
    FieldVector vec;
    double weight = 1.0;       // public metadata (sample count n_k)
    std::size_t n_samples = 0;
};

// values_i = round(v_i * 2^frac_bits) mod 2^64. Throws EncodingOverflow when
// |v_i| * 2^frac_bits >= 2^62.
FieldVector encode_fixed(std::span<const double> v, int frac_bits = kDefaultFracBits);

// Signed representative in [-2^63, 2^63) divided by the scale.
std::vector<double> decode_fixed(const FieldVector& fv);

// Pairwise-cancelling mask: adds the PRG stream for every roster peer with a
// larger id, subtracts it for every peer with a smaller id (mod 2^64). The
// stream is keyed on the pair seed and the round, so both ends of a pair
// expand identical masks.
FieldVector mask(const FieldVector& update, int self_id, const std::vector<int>& roster,
                 const PairwiseSeeds& seeds, int round);

// Modular sum of the masked vectors. Requires the delivered set to equal the
// masking roster exactly; otherwise throws RoundAbort listing the missing ids.
FieldVector aggregate_unmask(const std::vector<MaskedUpdate>& masked,
                             const std::vector<int>& roster);

}  // namespace mcpfl
