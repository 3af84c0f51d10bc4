#include <doctest.h>

#include "mcpfl/wire.hpp"

using namespace mcpfl;

TEST_CASE("serialization format and byte accounting") {
    WireMessage m{MsgType::masked_update, 3, "client:7", "dim=10;weight=42", 10};
    CHECK(m.serialize() == "mcpfl/0.1|masked_update|round=3|from=client:7|dim=10;weight=42");
    CHECK(m.byte_size() == m.serialize().size() + 80);

    WireMessage inv{MsgType::round_invite, 1, "server", "to=4"};
    CHECK(inv.byte_size() == inv.serialize().size());
}

TEST_CASE("valid round sequence passes the grammar") {
    Transcript t;
    t.record({MsgType::schema_offer, 0, "server", ""});
    t.record({MsgType::capability_advertise, 0, "client:0", ""});
    t.record({MsgType::schema_ack, 0, "server", ""});
    t.record({MsgType::round_invite, 1, "server", "to=0"});
    t.record({MsgType::round_invite, 1, "server", "to=1"});
    t.record({MsgType::round_accept, 1, "client:0", ""});
    t.record({MsgType::round_decline, 1, "client:1", ""});
    t.record({MsgType::masked_update, 1, "client:0", "dim=4", 4});
    t.record({MsgType::global_model, 1, "server", "dim=4", 4});
    // an abort-retry round
    t.record({MsgType::round_invite, 2, "server", "to=0"});
    t.record({MsgType::round_accept, 2, "client:0", ""});
    t.record({MsgType::masked_update, 2, "client:0", "dim=4", 4});
    t.record({MsgType::round_abort, 2, "server", "missing=1;"});
    t.record({MsgType::masked_update, 2, "client:0", "dim=4", 4});
    t.record({MsgType::global_model, 2, "server", "dim=4", 4});
    CHECK_NOTHROW(t.validate_grammar());
    CHECK(t.count(MsgType::round_invite) == 3);
}

TEST_CASE("empty round carries only the model broadcast") {
    Transcript t;
    t.record({MsgType::global_model, 1, "server", "dim=4", 4});
    CHECK_NOTHROW(t.validate_grammar());
}

TEST_CASE("grammar violations are rejected") {
    SUBCASE("update before accept") {
        Transcript t;
        t.record({MsgType::round_invite, 1, "server", ""});
        t.record({MsgType::masked_update, 1, "client:0", "", 4});
        t.record({MsgType::round_accept, 1, "client:0", ""});
        t.record({MsgType::global_model, 1, "server", "", 4});
        CHECK_THROWS_AS(t.validate_grammar(), ProtocolError);
    }
    SUBCASE("message after global_model") {
        Transcript t;
        t.record({MsgType::round_invite, 1, "server", ""});
        t.record({MsgType::round_accept, 1, "client:0", ""});
        t.record({MsgType::global_model, 1, "server", "", 4});
        t.record({MsgType::masked_update, 1, "client:0", "", 4});
        CHECK_THROWS_AS(t.validate_grammar(), ProtocolError);
    }
    SUBCASE("round without a model broadcast") {
        Transcript t;
        t.record({MsgType::round_invite, 1, "server", ""});
        t.record({MsgType::round_accept, 1, "client:0", ""});
        CHECK_THROWS_AS(t.validate_grammar(), ProtocolError);
    }
    SUBCASE("negotiation message inside a round") {
        Transcript t;
        t.record({MsgType::round_invite, 1, "server", ""});
        t.record({MsgType::schema_ack, 1, "server", ""});
        CHECK_THROWS_AS(t.validate_grammar(), ProtocolError);
    }
}
