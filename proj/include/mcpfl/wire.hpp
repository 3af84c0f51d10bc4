#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mcpfl/errors.hpp"

namespace mcpfl {

inline constexpr const char* kProtocolVersion = "mcpfl/0.1";

enum class MsgType {
    capability_advertise,
    schema_offer,
    schema_ack,
    negotiation_reject,
    round_invite,
    round_accept,
    round_decline,
    masked_update,
    round_abort,
    global_model,
};

const char* msg_type_name(MsgType t);

// One protocol message. Serialization is a single line:
//   mcpfl/0.1|<msg_type>|round=<r>|from=<sender>|<payload>
// where payload is a semicolon-separated k=v list. Vector-bearing messages
// (masked_update, global_model) record their dimension in the payload and
// count 8 bytes per coordinate in byte_size on top of the header line.
struct WireMessage {
    MsgType type;
    int round = 0;
    std::string sender;
    std::string payload;
    std::size_t vector_dim = 0;  // coordinates carried in the body, if any

    std::string serialize() const;
    std::size_t byte_size() const;
};

// Recorded message sequence for one simulation run. Round 0 holds the
// negotiation phase (capability_advertise / schema_offer / schema_ack /
// negotiation_reject); rounds >= 1 must follow
//   invite -> accept/decline -> (updates | abort) -> global_model
// with exactly one terminating global_model per round.
class Transcript {
public:
    void record(WireMessage msg) { messages_.push_back(std::move(msg)); }
    const std::vector<WireMessage>& messages() const { return messages_; }

    std::size_t total_bytes() const;
    std::size_t count(MsgType t) const;

    // Throws ProtocolError on the first grammar violation.
    void validate_grammar() const;

    void dump(const std::string& path) const;

private:
    std::vector<WireMessage> messages_;
};

}  // namespace mcpfl
