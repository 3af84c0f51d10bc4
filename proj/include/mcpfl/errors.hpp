#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mcpfl {

struct LayoutError : std::runtime_error {
    explicit LayoutError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SchemaViolation : std::runtime_error {
    explicit SchemaViolation(const std::string& what) : std::runtime_error(what) {}
};

struct NegotiationRejected : std::runtime_error {
    int client_id;
    explicit NegotiationRejected(int client, const std::string& what)
        : std::runtime_error(what), client_id(client) {}
};

struct EncodingOverflow : std::runtime_error {
    explicit EncodingOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the aggregator when the received update set does not match the
// masking roster; carries the ids that never delivered.
struct RoundAbort : std::runtime_error {
    std::vector<int> missing;
    explicit RoundAbort(std::vector<int> missing_ids)
        : std::runtime_error("secure aggregation aborted: missing client updates"),
          missing(std::move(missing_ids)) {}
};

struct SkipClient : std::runtime_error {
    explicit SkipClient(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mcpfl
