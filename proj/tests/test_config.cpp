#include <doctest.h>

#include <cmath>
#include <string>

#include "mcpfl/config.hpp"

using namespace mcpfl;

TEST_CASE("empty text yields the defaults") {
    auto cfg = parse_config_text("");
    CHECK(cfg.n_clients == 20);
    CHECK(cfg.rounds == 50);
    CHECK(cfg.data.n_total == 4000);
    CHECK(cfg.dirichlet_beta == 0.5);
    CHECK(cfg.methods.size() == 4);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(std::isinf(cfg.dp.epsilon_max));
}

TEST_CASE("comments and whitespace are ignored") {
    auto cfg = parse_config_text(
        "# a comment line\n"
        "  run.rounds = 7   # trailing comment\n"
        "\n"
        "dp.sigma = 0.5\n");
    CHECK(cfg.rounds == 7);
    CHECK(cfg.dp.sigma == 0.5);
}

TEST_CASE("lists and the unbounded budget parse") {
    auto cfg = parse_config_text(
        "run.methods = fedavg,mcp_fusion\n"
        "run.seeds = 11,12\n"
        "dp.epsilon_max = unbounded\n");
    CHECK(cfg.methods == std::vector<std::string>{"fedavg", "mcp_fusion"});
    CHECK(cfg.seeds == std::vector<std::uint64_t>{11, 12});
    CHECK(std::isinf(cfg.dp.epsilon_max));
}

TEST_CASE("errors carry the offending key") {
    SUBCASE("unknown key") {
        try {
            parse_config_text("dp.sgma = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("unknown key: dp.sgma") != std::string::npos);
        }
    }
    SUBCASE("type error names the key") {
        try {
            parse_config_text("run.rounds = soon\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("run.rounds") != std::string::npos);
        }
    }
    SUBCASE("negative sigma fails validation") {
        try {
            parse_config_text("dp.sigma = -1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("dp.sigma") != std::string::npos);
        }
    }
    SUBCASE("missing separator") {
        CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigError);
    }
}

TEST_CASE("emit then parse is the identity") {
    ExperimentConfig cfg;
    cfg.rounds = 13;
    cfg.dp.sigma = 0.75;
    cfg.dp.epsilon_max = 8.0;
    cfg.sched.policy = Policy::energy_aware;  // policy is per-method, not a key
    cfg.schema_mismatch_rate = 0.3;
    cfg.methods = {"mcp_fusion"};
    cfg.seeds = {42};
    cfg.out_dir = "elsewhere";

    auto text = emit_config(cfg);
    auto back = parse_config_text(text);
    CHECK(emit_config(back) == text);
    CHECK(back.rounds == 13);
    CHECK(back.dp.sigma == 0.75);
    CHECK(back.dp.epsilon_max == 8.0);
    CHECK(back.schema_mismatch_rate == 0.3);
    CHECK(back.methods == cfg.methods);
    CHECK(back.seeds == cfg.seeds);
    CHECK(back.out_dir == "elsewhere");
}
