#include "mcpfl/fusion.hpp"

#include <algorithm>
#include <string>

namespace mcpfl {

std::size_t FusionPlan::n_supported() const {
    return static_cast<std::size_t>(std::count(supported.begin(), supported.end(), true));
}

FusionPlan negotiate(const std::vector<SchemaDescriptor>& server_required,
                     const CapabilitySet& client_caps, bool strict) {
    if (server_required.empty()) throw ProtocolError("negotiate: empty server schema set");

    FusionPlan plan;
    // canonical order im, emr, iot regardless of input order
    for (auto m : kModalities) {
        for (const auto& d : server_required) {
            if (d.modality == m) {
                plan.agreed.push_back(d);
                break;
            }
        }
    }

    std::size_t matched = 0;
    for (const auto& d : plan.agreed) {
        bool ok = false;
        for (const auto& c : client_caps.supported)
            if (c.modality == d.modality && c.schema_version == d.schema_version) ok = true;
        plan.supported.push_back(ok);
        if (ok) ++matched;
    }

    if (matched == 0)
        throw NegotiationRejected(client_caps.client_id, "no schema overlap");
    if (strict && matched < plan.agreed.size())
        throw NegotiationRejected(client_caps.client_id, "strict mode requires full schema match");

    plan.fused_dim = plan.agreed.size();
    for (const auto& d : plan.agreed) plan.fused_dim += d.latent_dim;
    return plan;
}

std::vector<double> align(const std::vector<std::vector<double>>& latents,
                          const std::vector<std::uint8_t>& presence, const FusionPlan& plan) {
    if (latents.size() != plan.agreed.size() || presence.size() != plan.agreed.size())
        throw SchemaViolation("align: input count does not match plan");

    std::vector<double> z;
    z.reserve(plan.fused_dim);
    for (std::size_t i = 0; i < plan.agreed.size(); ++i) {
        const auto& d = plan.agreed[i];
        if (presence[i]) {
            if (latents[i].size() != d.latent_dim)
                throw SchemaViolation(std::string("align: latent dim mismatch for ") +
                                      modality_name(d.modality));
            z.insert(z.end(), latents[i].begin(), latents[i].end());
        } else {
            z.insert(z.end(), d.latent_dim, 0.0);
        }
    }
    for (std::size_t i = 0; i < plan.agreed.size(); ++i)
        z.push_back(presence[i] ? 1.0 : 0.0);
    return z;
}

}  // namespace mcpfl
