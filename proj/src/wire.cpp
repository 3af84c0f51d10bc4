#include "mcpfl/wire.hpp"

#include <fstream>
#include <map>

namespace mcpfl {

const char* msg_type_name(MsgType t) {
    switch (t) {
        case MsgType::capability_advertise: return "capability_advertise";
        case MsgType::schema_offer: return "schema_offer";
        case MsgType::schema_ack: return "schema_ack";
        case MsgType::negotiation_reject: return "negotiation_reject";
        case MsgType::round_invite: return "round_invite";
        case MsgType::round_accept: return "round_accept";
        case MsgType::round_decline: return "round_decline";
        case MsgType::masked_update: return "masked_update";
        case MsgType::round_abort: return "round_abort";
        case MsgType::global_model: return "global_model";
    }
    return "?";
}

std::string WireMessage::serialize() const {
    std::string line = kProtocolVersion;
    line += '|';
    line += msg_type_name(type);
    line += "|round=" + std::to_string(round);
    line += "|from=" + sender;
    line += '|';
    line += payload;
    return line;
}

std::size_t WireMessage::byte_size() const {
    return serialize().size() + 8 * vector_dim;
}

std::size_t Transcript::total_bytes() const {
    std::size_t n = 0;
    for (const auto& m : messages_) n += m.byte_size();
    return n;
}

std::size_t Transcript::count(MsgType t) const {
    std::size_t n = 0;
    for (const auto& m : messages_)
        if (m.type == t) ++n;
    return n;
}

void Transcript::validate_grammar() const {
    // phase per message type within a round; phases must be non-decreasing
    auto phase_of = [](MsgType t) -> int {
        switch (t) {
            case MsgType::round_invite: return 1;
            case MsgType::round_accept:
            case MsgType::round_decline: return 2;
            case MsgType::masked_update:
            case MsgType::round_abort: return 3;
            case MsgType::global_model: return 4;
            default: return 0;  // negotiation-phase message
        }
    };

    std::map<int, int> last_phase;
    std::map<int, int> model_count;
    for (const auto& m : messages_) {
        int phase = phase_of(m.type);
        if (m.round == 0) {
            if (phase != 0)
                throw ProtocolError("round message in negotiation phase: " +
                                    std::string(msg_type_name(m.type)));
            continue;
        }
        if (phase == 0)
            throw ProtocolError("negotiation message inside round " + std::to_string(m.round));
        auto it = last_phase.find(m.round);
        int prev = it == last_phase.end() ? 0 : it->second;
        if (phase < prev)
            throw ProtocolError("out-of-order message " + std::string(msg_type_name(m.type)) +
                                " in round " + std::to_string(m.round));
        if (model_count[m.round] > 0)
            throw ProtocolError("message after global_model in round " + std::to_string(m.round));
        last_phase[m.round] = phase;
        if (m.type == MsgType::global_model) model_count[m.round]++;
    }
    for (const auto& [round, phase] : last_phase)
        if (model_count[round] != 1)
            throw ProtocolError("round " + std::to_string(round) + " missing global_model");
}

void Transcript::dump(const std::string& path) const {
    std::ofstream f(path);
    for (const auto& m : messages_) f << m.serialize() << "\n";
}

}  // namespace mcpfl
