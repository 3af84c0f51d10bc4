#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcpfl/errors.hpp"

namespace mcpfl {

enum class Modality { im = 0, emr = 1, iot = 2 };

inline constexpr std::array<Modality, 3> kModalities{Modality::im, Modality::emr, Modality::iot};

const char* modality_name(Modality m);
Modality modality_from_name(const std::string& name);  // throws ConfigError

struct DataSpec {
    std::size_t n_total = 4000;
    std::array<std::size_t, 3> dims{32, 16, 8};  // indexed by Modality
    double interaction_weight = 0.3;
    double noise_std = 0.1;
    std::array<double, 3> missing_rate{0.0, 0.0, 0.0};
    std::uint64_t seed = 1;

    void validate() const;  // throws ConfigError
};

struct ModalityData {
    std::size_t dim = 0;
    std::vector<double> features;    // n x dim, row-major; zeroed when absent
    std::vector<std::uint8_t> presence;  // n flags
};

// One labeled multi-modal dataset; each row index refers to the same entity
// across modalities and shares one label.
struct Dataset {
    std::array<ModalityData, 3> modalities;
    std::vector<std::uint8_t> labels;

    std::size_t n() const { return labels.size(); }
    std::size_t count_present(Modality m) const;
    std::span<const double> features_of(Modality m, std::size_t row) const;
    bool present(Modality m, std::size_t row) const;
};

struct SplitDataset {
    Dataset train;
    Dataset test;
};

// Synthetic three-modality generator. The label depends on im and emr linear
// signal plus an im x iot interaction term, so no single modality carries the
// whole signal. The 80/20 train/test split happens before any partitioning.
SplitDataset generate(const DataSpec& spec);

// Label-skewed non-IID partition via per-class Dirichlet proportions. Every
// client receives at least one example; partitions are disjoint and cover the
// dataset.
std::vector<Dataset> partition(const Dataset& data, std::size_t n_clients,
                               double dirichlet_beta, std::uint64_t seed);

// Writes one CSV per modality (example_id, presence, f0..fd) plus a label
// file (example_id, label) into dir with the given filename prefix.
void export_csv(const Dataset& data, const std::string& dir, const std::string& prefix);

}  // namespace mcpfl
