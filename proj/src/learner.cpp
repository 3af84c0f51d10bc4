#include "mcpfl/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mcpfl {
namespace {

struct Forward {
    std::vector<double> z;
    double p = 0.5;
    std::vector<std::uint8_t> presence;  // effective, per plan entry
};

Forward forward_full(const Dataset& data, std::size_t row, const ModelVector& theta,
                     const FusionPlan& plan) {
    Forward fw;
    std::vector<std::vector<double>> latents(plan.agreed.size());
    for (std::size_t i = 0; i < plan.agreed.size(); ++i) {
        const auto& d = plan.agreed[i];
        bool present = plan.supported[i] && data.present(d.modality, row);
        fw.presence.push_back(present ? 1 : 0);
        if (present) {
            auto x = data.features_of(d.modality, row);
            auto params = theta.block(encoder_block_name(d.modality));
            latents[i] = encode(x, params, d.input_dim, d.latent_dim);
        }
    }
    fw.z = align(latents, fw.presence, plan);
    fw.p = predict(fw.z, theta.block("clf"));
    return fw;
}

}  // namespace

void ModelConfig::validate() const {
    if (lambda < 0.0) throw ConfigError("model.lambda must be >= 0");
    if (learning_rate <= 0.0) throw ConfigError("model.learning_rate must be > 0");
    if (batch_size == 0) throw ConfigError("model.batch_size must be >= 1");
    if (fedprox_mu < 0.0) throw ConfigError("model.fedprox_mu must be >= 0");
    for (auto m : kModalities)
        if (latent_dims[static_cast<int>(m)] == 0)
            throw ConfigError("model latent dims must be > 0");
}

std::string encoder_block_name(Modality m) {
    return std::string("phi_") + modality_name(m);
}

LayoutPtr make_layout(const FusionPlan& plan) {
    std::vector<std::pair<std::string, std::size_t>> sizes;
    for (const auto& d : plan.agreed)
        sizes.push_back({encoder_block_name(d.modality), d.latent_dim * (d.input_dim + 1)});
    sizes.push_back({"clf", plan.fused_dim + 1});
    return Layout::make(sizes);
}

ModelVector init_model(const FusionPlan& plan, RandomStream& stream) {
    ModelVector theta(make_layout(plan));
    for (const auto& d : plan.agreed) {
        auto enc = theta.block(encoder_block_name(d.modality));
        double scale = 1.0 / std::sqrt(static_cast<double>(d.input_dim));
        for (std::size_t i = 0; i < d.latent_dim * d.input_dim; ++i)
            enc[i] = scale * stream.next_gaussian();
    }
    return theta;
}

std::vector<double> encode(std::span<const double> x, std::span<const double> enc_params,
                           std::size_t input_dim, std::size_t latent_dim) {
    if (x.size() != input_dim || enc_params.size() != latent_dim * (input_dim + 1))
        throw SchemaViolation("encode: dimension mismatch");
    std::vector<double> latent(latent_dim);
    const double* W = enc_params.data();
    const double* b = enc_params.data() + latent_dim * input_dim;
    for (std::size_t r = 0; r < latent_dim; ++r) {
        double s = b[r];
        for (std::size_t c = 0; c < input_dim; ++c) s += W[r * input_dim + c] * x[c];
        latent[r] = s;
    }
    return latent;
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double predict(std::span<const double> z, std::span<const double> clf_params) {
    if (clf_params.size() != z.size() + 1) throw SchemaViolation("predict: fused dim mismatch");
    double t = clf_params[z.size()];
    for (std::size_t i = 0; i < z.size(); ++i) t += clf_params[i] * z[i];
    return sigmoid(t);
}

double forward(const Dataset& data, std::size_t row, const ModelVector& theta,
               const FusionPlan& plan) {
    return forward_full(data, row, theta, plan).p;
}

double loss(const Dataset& data, const std::vector<std::size_t>& rows, const ModelVector& theta,
            double lambda, const FusionPlan& plan) {
    double total = 0.0;
    for (std::size_t row : rows) {
        double p = forward(data, row, theta, plan);
        double y = data.labels[row];
        // clamped log keeps saturated predictions finite
        constexpr double eps = 1e-15;
        total += -(y * std::log(std::max(p, eps)) + (1.0 - y) * std::log(std::max(1.0 - p, eps)));
    }
    double n = l2_norm(theta);
    return total / static_cast<double>(rows.size()) + lambda * n * n;
}

ModelVector grad(const Dataset& data, const std::vector<std::size_t>& rows,
                 const ModelVector& theta, double lambda, const FusionPlan& plan) {
    ModelVector g(theta.layout);
    auto g_clf = g.block("clf");
    const auto clf = theta.block("clf");
    const double inv_n = 1.0 / static_cast<double>(rows.size());

    for (std::size_t row : rows) {
        Forward fw = forward_full(data, row, theta, plan);
        double r = (fw.p - static_cast<double>(data.labels[row])) * inv_n;  // dL/dlogit

        for (std::size_t i = 0; i < fw.z.size(); ++i) g_clf[i] += r * fw.z[i];
        g_clf[fw.z.size()] += r;

        // backprop into present encoders only; absent modalities were
        // zero-imputed and contribute nothing
        std::size_t off = 0;
        for (std::size_t i = 0; i < plan.agreed.size(); ++i) {
            const auto& d = plan.agreed[i];
            if (fw.presence[i]) {
                auto x = data.features_of(d.modality, row);
                auto g_enc = g.block(encoder_block_name(d.modality));
                double* gW = g_enc.data();
                double* gb = g_enc.data() + d.latent_dim * d.input_dim;
                for (std::size_t l = 0; l < d.latent_dim; ++l) {
                    double dl = r * clf[off + l];  // dL/dlatent_l
                    for (std::size_t c = 0; c < d.input_dim; ++c) gW[l * d.input_dim + c] += dl * x[c];
                    gb[l] += dl;
                }
            }
            off += d.latent_dim;
        }
    }

    if (lambda != 0.0)
        for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] += 2.0 * lambda * theta.values[i];
    return g;
}

ModelVector local_train(const Dataset& data, const ModelVector& theta_global,
                        const ModelConfig& cfg, const FusionPlan& plan, RandomStream& stream) {
    if (data.n() == 0) throw SkipClient("client has no data");

    ModelVector theta = theta_global;
    std::vector<std::size_t> order(data.n());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 0; epoch < cfg.local_epochs; ++epoch) {
        stream.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            std::size_t end = std::min(start + cfg.batch_size, order.size());
            std::vector<std::size_t> batch(order.begin() + start, order.begin() + end);
            ModelVector g = grad(data, batch, theta, cfg.lambda, plan);
            if (cfg.fedprox_mu > 0.0) {
                for (std::size_t i = 0; i < g.values.size(); ++i)
                    g.values[i] += cfg.fedprox_mu * (theta.values[i] - theta_global.values[i]);
            }
            for (std::size_t i = 0; i < theta.values.size(); ++i)
                theta.values[i] -= cfg.learning_rate * g.values[i];
        }
    }
    return vec_axpy(-1.0, theta_global, theta);  // local - global
}

}  // namespace mcpfl
