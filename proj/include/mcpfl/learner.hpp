#pragma once

#include <array>
#include <span>
#include <vector>

#include "mcpfl/datagen.hpp"
#include "mcpfl/fusion.hpp"
#include "mcpfl/model_vector.hpp"
#include "mcpfl/random.hpp"

namespace mcpfl {

struct ModelConfig {
    std::array<std::size_t, 3> latent_dims{2, 2, 1};  // indexed by Modality
    double lambda = 1e-4;       // L2 weight
    double learning_rate = 0.3;
    std::size_t local_epochs = 8;
    std::size_t batch_size = 32;
    double fedprox_mu = 0.0;    // 0 disables the proximal term

    void validate() const;
};

// Parameter layout for a fusion plan: one affine encoder block per agreed
// modality (W row-major, then b) plus the classifier block (w, then c).
LayoutPtr make_layout(const FusionPlan& plan);

std::string encoder_block_name(Modality m);

// Server-side initial model: encoder weights ~ N(0, 1/input_dim) to break the
// encoder/classifier zero saddle, classifier and biases zero.
ModelVector init_model(const FusionPlan& plan, RandomStream& stream);

// latent = W x + b
std::vector<double> encode(std::span<const double> x, std::span<const double> enc_params,
                           std::size_t input_dim, std::size_t latent_dim);

// sigmoid(w . z + c)
double predict(std::span<const double> z, std::span<const double> clf_params);

double sigmoid(double t);

// Fused forward pass for one dataset row under a plan. Effective presence is
// data presence ANDed with the plan's supported flags.
double forward(const Dataset& data, std::size_t row, const ModelVector& theta,
               const FusionPlan& plan);

// Mean binary cross-entropy over the rows plus lambda * ||theta||^2.
double loss(const Dataset& data, const std::vector<std::size_t>& rows, const ModelVector& theta,
            double lambda, const FusionPlan& plan);

// Analytic gradient of loss over the same rows.
ModelVector grad(const Dataset& data, const std::vector<std::size_t>& rows,
                 const ModelVector& theta, double lambda, const FusionPlan& plan);

// Local mini-batch SGD from theta_global; returns the update delta
// theta_local - theta_global. With fedprox_mu > 0 each step adds
// mu * (theta - theta_global) to the gradient.
ModelVector local_train(const Dataset& data, const ModelVector& theta_global,
                        const ModelConfig& cfg, const FusionPlan& plan, RandomStream& stream);

}  // namespace mcpfl
