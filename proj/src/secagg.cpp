#include "mcpfl/secagg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcpfl {

void PairwiseSeeds::set(int a, int b, std::uint64_t seed) {
    seeds[{std::min(a, b), std::max(a, b)}] = seed;
}

std::uint64_t PairwiseSeeds::get(int a, int b) const {
    auto it = seeds.find({std::min(a, b), std::max(a, b)});
    if (it == seeds.end())
        throw ProtocolError("missing pairwise seed for clients " + std::to_string(a) + "," +
                            std::to_string(b));
    return it->second;
}

FieldVector encode_fixed(std::span<const double> v, int frac_bits) {
    FieldVector fv;
    fv.frac_bits = frac_bits;
    fv.values.reserve(v.size());
    const double scale = static_cast<double>(std::uint64_t{1} << frac_bits);
    const double limit = std::ldexp(1.0, 62);
    for (double x : v) {
        double scaled = x * scale;
        if (!(std::fabs(scaled) < limit)) throw EncodingOverflow("encode_fixed: magnitude too large");
        auto s = static_cast<std::int64_t>(std::llround(scaled));
        fv.values.push_back(static_cast<std::uint64_t>(s));  // two's-complement embedding
    }
    return fv;
}

std::vector<double> decode_fixed(const FieldVector& fv) {
    std::vector<double> out;
    out.reserve(fv.values.size());
    const double scale = fv.scale();
    for (std::uint64_t u : fv.values)
        out.push_back(static_cast<double>(static_cast<std::int64_t>(u)) / scale);
    return out;
}

FieldVector mask(const FieldVector& update, int self_id, const std::vector<int>& roster,
                 const PairwiseSeeds& seeds, int round) {
    if (std::find(roster.begin(), roster.end(), self_id) == roster.end())
        throw ProtocolError("mask: self id not in roster");

    FieldVector out = update;
    const std::string tag = "mask:" + std::to_string(round);
    for (int peer : roster) {
        if (peer == self_id) continue;
        RandomStream prg(seeds.get(self_id, peer), tag);
        if (peer > self_id) {
            for (auto& v : out.values) v += prg.next_u64();
        } else {
            for (auto& v : out.values) v -= prg.next_u64();
        }
    }
    return out;
}

FieldVector aggregate_unmask(const std::vector<MaskedUpdate>& masked,
                             const std::vector<int>& roster) {
    std::vector<int> missing;
    for (int id : roster) {
        bool found = false;
        for (const auto& m : masked)
            if (m.client_id == id) found = true;
        if (!found) missing.push_back(id);
    }
    if (!missing.empty() || masked.size() != roster.size()) {
        if (missing.empty())
            throw ProtocolError("aggregate_unmask: update set does not match roster");
        throw RoundAbort(std::move(missing));
    }
    if (masked.empty()) throw ProtocolError("aggregate_unmask: empty roster");

    // ascending client id keeps the reduction order fixed
    std::vector<const MaskedUpdate*> ordered;
    for (const auto& m : masked) ordered.push_back(&m);
    std::sort(ordered.begin(), ordered.end(),
              [](auto* a, auto* b) { return a->client_id < b->client_id; });

    FieldVector sum;
    sum.frac_bits = ordered.front()->vec.frac_bits;
    sum.values.assign(ordered.front()->vec.values.size(), 0);
    for (const auto* m : ordered) {
        if (m->vec.values.size() != sum.values.size())
            throw ProtocolError("aggregate_unmask: vector length mismatch");
        for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += m->vec.values[i];
    }
    return sum;
}

}  // namespace mcpfl
