#include "mcpfl/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "mcpfl/random.hpp"

namespace mcpfl {
namespace {

constexpr std::size_t kLatentDim = 8;
constexpr double kViewNoise = 0.7;      // modality-specific signal scale
constexpr double kImWeightScale = 1.2;  // label weight norms for im / emr
constexpr double kEmrWeightScale = 1.0;

std::vector<double> unit_vector(RandomStream& rs, std::size_t n, double scale) {
    std::vector<double> v = rs.gaussians(n);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x *= scale / norm;
    return v;
}

// Marsaglia-Tsang gamma sampler (shape only; unit rate).
double draw_gamma(RandomStream& rs, double alpha) {
    if (alpha < 1.0) {
        double u = rs.next_double();
        while (u <= 0.0) u = rs.next_double();
        return draw_gamma(rs, alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    double d = alpha - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rs.next_gaussian();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rs.next_double();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::vector<double> draw_dirichlet(RandomStream& rs, double beta, std::size_t n) {
    std::vector<double> g(n);
    double sum = 0.0;
    for (auto& x : g) {
        x = draw_gamma(rs, beta);
        sum += x;
    }
    if (sum <= 0.0) return std::vector<double>(n, 1.0 / static_cast<double>(n));
    for (auto& x : g) x /= sum;
    return g;
}

Dataset make_empty_like(const DataSpec& spec) {
    Dataset d;
    for (auto m : kModalities) d.modalities[static_cast<int>(m)].dim = spec.dims[static_cast<int>(m)];
    return d;
}

void append_example(Dataset& dst, const Dataset& src, std::size_t row) {
    for (auto m : kModalities) {
        auto& md = dst.modalities[static_cast<int>(m)];
        const auto& ms = src.modalities[static_cast<int>(m)];
        auto f = src.features_of(m, row);
        md.features.insert(md.features.end(), f.begin(), f.end());
        md.presence.push_back(ms.presence[row]);
    }
    dst.labels.push_back(src.labels[row]);
}

}  // namespace

const char* modality_name(Modality m) {
    switch (m) {
        case Modality::im: return "im";
        case Modality::emr: return "emr";
        case Modality::iot: return "iot";
    }
    return "?";
}

Modality modality_from_name(const std::string& name) {
    for (auto m : kModalities)
        if (name == modality_name(m)) return m;
    throw ConfigError("unknown modality: " + name);
}

void DataSpec::validate() const {
    if (n_total < 1) throw ConfigError("data.n_total must be >= 1");
    for (auto m : kModalities) {
        if (dims[static_cast<int>(m)] == 0)
            throw ConfigError(std::string("data.dim_") + modality_name(m) + " must be > 0");
        double mr = missing_rate[static_cast<int>(m)];
        if (mr < 0.0 || mr > 1.0)
            throw ConfigError(std::string("data.missing_rate_") + modality_name(m) +
                              " must be in [0,1]");
    }
    if (noise_std < 0.0) throw ConfigError("data.noise_std must be >= 0");
}

std::size_t Dataset::count_present(Modality m) const {
    const auto& md = modalities[static_cast<int>(m)];
    return static_cast<std::size_t>(std::count(md.presence.begin(), md.presence.end(), 1));
}

std::span<const double> Dataset::features_of(Modality m, std::size_t row) const {
    const auto& md = modalities[static_cast<int>(m)];
    return {md.features.data() + row * md.dim, md.dim};
}

bool Dataset::present(Modality m, std::size_t row) const {
    return modalities[static_cast<int>(m)].presence[row] != 0;
}

SplitDataset generate(const DataSpec& spec) {
    spec.validate();

    // Projections and label weights are fixed by the seed.
    RandomStream setup(spec.seed, "data:setup");
    std::array<std::vector<double>, 3> proj;  // dim x kLatentDim, row-major
    for (auto m : kModalities) {
        std::size_t d = spec.dims[static_cast<int>(m)];
        proj[static_cast<int>(m)] = setup.gaussians(d * kLatentDim);
        for (double& x : proj[static_cast<int>(m)]) x /= std::sqrt(double(kLatentDim));
    }
    std::vector<double> w_im = unit_vector(setup, spec.dims[0], kImWeightScale);
    std::vector<double> w_emr = unit_vector(setup, spec.dims[1], kEmrWeightScale);

    Dataset all = make_empty_like(spec);
    for (auto m : kModalities) {
        auto& md = all.modalities[static_cast<int>(m)];
        md.features.reserve(spec.n_total * md.dim);
        md.presence.reserve(spec.n_total);
    }
    all.labels.reserve(spec.n_total);

    for (std::size_t i = 0; i < spec.n_total; ++i) {
        RandomStream ex(spec.seed, "data:ex:" + std::to_string(i));
        std::vector<double> u = ex.gaussians(kLatentDim);

        std::array<std::vector<double>, 3> x;
        for (auto m : kModalities) {
            std::size_t d = spec.dims[static_cast<int>(m)];
            const auto& P = proj[static_cast<int>(m)];
            auto& xm = x[static_cast<int>(m)];
            xm.assign(d, 0.0);
            for (std::size_t r = 0; r < d; ++r) {
                double s = 0.0;
                for (std::size_t c = 0; c < kLatentDim; ++c) s += P[r * kLatentDim + c] * u[c];
                xm[r] = s + kViewNoise * ex.next_gaussian();
            }
        }

        double score = 0.0;
        for (std::size_t j = 0; j < w_im.size(); ++j) score += w_im[j] * x[0][j];
        for (std::size_t j = 0; j < w_emr.size(); ++j) score += w_emr[j] * x[1][j];
        score += spec.interaction_weight * x[0][0] * x[2][0];
        score += spec.noise_std * ex.next_gaussian();
        all.labels.push_back(score > 0.0 ? 1 : 0);

        // missingness applied after the label is fixed
        for (auto m : kModalities) {
            auto& md = all.modalities[static_cast<int>(m)];
            bool missing = ex.next_double() < spec.missing_rate[static_cast<int>(m)];
            if (missing) std::fill(x[static_cast<int>(m)].begin(), x[static_cast<int>(m)].end(), 0.0);
            md.presence.push_back(missing ? 0 : 1);
            md.features.insert(md.features.end(), x[static_cast<int>(m)].begin(),
                               x[static_cast<int>(m)].end());
        }
    }

    std::size_t n_test = spec.n_total / 5;
    std::size_t n_train = spec.n_total - n_test;
    SplitDataset out{make_empty_like(spec), make_empty_like(spec)};
    for (std::size_t i = 0; i < n_train; ++i) append_example(out.train, all, i);
    for (std::size_t i = n_train; i < spec.n_total; ++i) append_example(out.test, all, i);
    return out;
}

std::vector<Dataset> partition(const Dataset& data, std::size_t n_clients,
                               double dirichlet_beta, std::uint64_t seed) {
    if (n_clients < 1) throw ConfigError("n_clients must be >= 1");
    if (dirichlet_beta <= 0.0) throw ConfigError("dirichlet_beta must be > 0");
    if (n_clients > data.n()) throw ConfigError("n_clients exceeds dataset size");

    RandomStream rs(seed, "partition");
    std::vector<std::vector<std::size_t>> assigned(n_clients);

    for (int cls = 0; cls < 2; ++cls) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < data.n(); ++i)
            if (data.labels[i] == cls) idx.push_back(i);
        rs.shuffle(idx);

        std::vector<double> prop = draw_dirichlet(rs, dirichlet_beta, n_clients);
        // largest-remainder apportionment of idx.size() slots
        std::vector<std::size_t> take(n_clients, 0);
        std::vector<std::pair<double, std::size_t>> rem;
        std::size_t used = 0;
        for (std::size_t k = 0; k < n_clients; ++k) {
            double exact = prop[k] * static_cast<double>(idx.size());
            take[k] = static_cast<std::size_t>(exact);
            used += take[k];
            rem.push_back({exact - std::floor(exact), k});
        }
        std::sort(rem.begin(), rem.end(), [](auto& a, auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        for (std::size_t r = 0; used < idx.size(); ++r, ++used) take[rem[r % n_clients].second]++;

        std::size_t pos = 0;
        for (std::size_t k = 0; k < n_clients; ++k)
            for (std::size_t t = 0; t < take[k]; ++t) assigned[k].push_back(idx[pos++]);
    }

    // every client gets at least one example: move from the richest client
    for (std::size_t k = 0; k < n_clients; ++k) {
        while (assigned[k].empty()) {
            std::size_t rich = 0;
            for (std::size_t j = 1; j < n_clients; ++j)
                if (assigned[j].size() > assigned[rich].size()) rich = j;
            assigned[k].push_back(assigned[rich].back());
            assigned[rich].pop_back();
        }
    }

    std::vector<Dataset> out;
    out.reserve(n_clients);
    for (std::size_t k = 0; k < n_clients; ++k) {
        Dataset d;
        for (auto m : kModalities)
            d.modalities[static_cast<int>(m)].dim = data.modalities[static_cast<int>(m)].dim;
        std::sort(assigned[k].begin(), assigned[k].end());
        for (std::size_t row : assigned[k]) append_example(d, data, row);
        out.push_back(std::move(d));
    }
    return out;
}

void export_csv(const Dataset& data, const std::string& dir, const std::string& prefix) {
    std::filesystem::create_directories(dir);
    for (auto m : kModalities) {
        const auto& md = data.modalities[static_cast<int>(m)];
        std::ofstream f(dir + "/" + prefix + "_" + modality_name(m) + ".csv");
        f << "example_id,presence";
        for (std::size_t j = 0; j < md.dim; ++j) f << ",f" << j;
        f << "\n";
        for (std::size_t i = 0; i < data.n(); ++i) {
            f << i << "," << int(md.presence[i]);
            char buf[32];
            for (std::size_t j = 0; j < md.dim; ++j) {
                std::snprintf(buf, sizeof(buf), ",%.9g", md.features[i * md.dim + j]);
                f << buf;
            }
            f << "\n";
        }
    }
    std::ofstream f(dir + "/" + prefix + "_labels.csv");
    f << "example_id,label\n";
    for (std::size_t i = 0; i < data.n(); ++i) f << i << "," << int(data.labels[i]) << "\n";
}

}  // namespace mcpfl
