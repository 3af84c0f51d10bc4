#pragma once

#include <cstddef>
#include <vector>

#include "mcpfl/datagen.hpp"
#include "mcpfl/errors.hpp"

namespace mcpfl {

struct SchemaDescriptor {
    Modality modality;
    int schema_version = 1;
    std::size_t input_dim = 0;
    std::size_t latent_dim = 0;

    bool operator==(const SchemaDescriptor&) const = default;
};

struct CapabilitySet {
    int client_id = -1;
    std::vector<SchemaDescriptor> supported;  // at most one per (modality, version)
};

// Result of negotiation: the server-ordered modality list plus which entries
// the client actually matched. Unmatched modalities keep their slots in the
// fused vector (zero-imputed downstream), so the model layout is stable
// across clients.
struct FusionPlan {
    std::vector<SchemaDescriptor> agreed;  // fixed global order im, emr, iot
    std::vector<bool> supported;           // per agreed entry
    std::size_t fused_dim = 0;             // sum of latent dims + one flag per modality

    std::size_t n_supported() const;
};

// Matches client capabilities against the server-required schema set (exact
// modality + version equality). strict=false admits partial matches; with
// strict=true any unmatched required modality rejects the client (the
// no-negotiation ablation). Zero overlap always rejects.
FusionPlan negotiate(const std::vector<SchemaDescriptor>& server_required,
                     const CapabilitySet& client_caps, bool strict = false);

// Concatenates present latents in plan order (absent ones zero-imputed),
// then appends the presence flags in plan order.
std::vector<double> align(const std::vector<std::vector<double>>& latents,
                          const std::vector<std::uint8_t>& presence, const FusionPlan& plan);

}  // namespace mcpfl
