#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mcpfl/experiment.hpp"
#include "mcpfl/orchestrator.hpp"

using namespace mcpfl;

namespace {

ExperimentConfig small_cfg() {
    ExperimentConfig cfg;
    cfg.data.n_total = 300;
    cfg.data.dims = {6, 4, 3};
    cfg.model.latent_dims = {3, 3, 2};
    cfg.n_clients = 6;
    cfg.rounds = 3;
    cfg.sched.random_k = 4;
    cfg.seeds = {1};
    return cfg;
}

}  // namespace

TEST_CASE("method matrix flags") {
    auto m = method_config("mcp_fusion", 0.01);
    CHECK(m.use_schema_negotiation);
    CHECK(m.use_secagg);
    CHECK(m.use_dp);
    CHECK(m.use_energy_scheduler);
    CHECK(m.policy == Policy::energy_aware);
    CHECK_FALSE(m.dp_no_clip);

    CHECK_FALSE(method_config("mcp_no_secagg", 0.0).use_secagg);
    CHECK_FALSE(method_config("mcp_no_dp", 0.0).use_dp);
    CHECK(method_config("mcp_no_sched", 0.0).policy == Policy::all);
    CHECK(method_config("naive_dp", 0.0).dp_no_clip);
    CHECK(method_config("fedavg", 0.0).modalities == std::vector<Modality>{Modality::im});
    CHECK(method_config("fedavg_iot", 0.0).modalities == std::vector<Modality>{Modality::iot});
    CHECK(method_config("fedprox", 0.05).fedprox_mu == 0.05);
    CHECK(method_config("multimodal_fl", 0.0).policy == Policy::all);
    CHECK_THROWS_AS(method_config("fedsgd", 0.0), ConfigError);
}

TEST_CASE("single client round equals one full-batch gradient step") {
    auto cfg = small_cfg();
    cfg.n_clients = 1;
    cfg.rounds = 1;
    cfg.model.batch_size = 10000;  // one full batch
    cfg.model.local_epochs = 1;
    cfg.sched.dropout_kappa = 0.0;

    Simulation sim(cfg, method_config("multimodal_fl", 0.0), 5);
    auto stats = sim.run_round();
    CHECK_FALSE(stats.empty_round);
    CHECK(stats.roster_size == 1);

    // reproduce the client's dataset and the expected update independently
    auto data = generate(cfg.data);
    auto parts = partition(data.train, 1, cfg.dirichlet_beta, cfg.data.seed);
    std::vector<SchemaDescriptor> req;
    for (auto m : kModalities) {
        int i = static_cast<int>(m);
        req.push_back({m, 1, cfg.data.dims[i], cfg.model.latent_dims[i]});
    }
    auto plan = negotiate(req, CapabilitySet{0, req});
    RandomStream is(5, "init");
    ModelVector theta0 = init_model(plan, is);
    std::vector<std::size_t> rows(parts[0].n());
    std::iota(rows.begin(), rows.end(), 0);
    auto g = grad(parts[0], rows, theta0, cfg.model.lambda, plan);

    const auto& theta = sim.global_model();
    REQUIRE(theta.values.size() == g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i)
        CHECK(std::fabs(theta.values[i] -
                        (theta0.values[i] - cfg.model.learning_rate * g.values[i])) <= 1e-9);
}

TEST_CASE("an all-ineligible population yields an empty round") {
    auto cfg = small_cfg();
    cfg.sched.tau = 1.0;
    cfg.energy_min = 0.3;
    cfg.energy_max = 0.4;  // nobody clears energy - depletion >= 1.0
    Simulation sim(cfg, method_config("mcp_no_dp", 0.0), 3);

    auto before = sim.global_model().values;
    auto stats = sim.run_round();
    CHECK(stats.empty_round);
    CHECK(stats.roster_size == 0);
    CHECK(sim.global_model().values == before);
    CHECK(sim.transcript().count(MsgType::global_model) == 1);
    CHECK_NOTHROW(sim.transcript().validate_grammar());
}

TEST_CASE("identical seeds replay bit-for-bit") {
    auto cfg = small_cfg();
    Simulation a(cfg, method_config("mcp_fusion", 0.0), 9);
    Simulation b(cfg, method_config("mcp_fusion", 0.0), 9);
    a.run_all();
    b.run_all();
    CHECK(a.global_model().values == b.global_model().values);
    REQUIRE(a.transcript().messages().size() == b.transcript().messages().size());
    for (std::size_t i = 0; i < a.transcript().messages().size(); ++i)
        CHECK(a.transcript().messages()[i].serialize() ==
              b.transcript().messages()[i].serialize());

    Simulation c(cfg, method_config("mcp_fusion", 0.0), 10);
    c.run_all();
    CHECK(c.global_model().values != a.global_model().values);
}

TEST_CASE("full runs keep the transcript grammatical") {
    auto cfg = small_cfg();
    for (const char* name : {"fedavg", "multimodal_fl", "mcp_fusion", "naive_dp"}) {
        Simulation sim(cfg, method_config(name, 0.0), 4);
        sim.run_all();
        CHECK_NOTHROW(sim.transcript().validate_grammar());
        CHECK(sim.transcript().count(MsgType::global_model) == cfg.rounds);
    }
}

TEST_CASE("masking changes the wire bytes but not the model") {
    auto cfg = small_cfg();
    cfg.sched.dropout_kappa = 0.0;  // identical rosters either way

    auto with = method_config("mcp_no_dp", 0.0);
    auto without = with;
    without.use_secagg = false;

    Simulation a(cfg, with, 11);
    Simulation b(cfg, without, 11);
    a.run_all();
    b.run_all();

    const double tol =
        static_cast<double>(cfg.rounds) * static_cast<double>(cfg.n_clients) / std::ldexp(1.0, 24);
    REQUIRE(a.global_model().values.size() == b.global_model().values.size());
    for (std::size_t i = 0; i < a.global_model().values.size(); ++i)
        CHECK(std::fabs(a.global_model().values[i] - b.global_model().values[i]) <= tol);
}

TEST_CASE("strict schema matching rejects every mismatched client") {
    auto cfg = small_cfg();
    cfg.schema_mismatch_rate = 0.5;

    Simulation strict(cfg, method_config("mcp_no_negotiation", 0.0), 2);
    Simulation relaxed(cfg, method_config("mcp_fusion", 0.0), 2);
    CHECK(strict.negotiation_rejects() >= relaxed.negotiation_rejects());
    CHECK(strict.negotiation_rejects() > 0);
    CHECK(strict.admitted_count() + strict.negotiation_rejects() == cfg.n_clients);

    cfg.schema_mismatch_rate = 0.0;
    Simulation clean(cfg, method_config("mcp_no_negotiation", 0.0), 2);
    CHECK(clean.negotiation_rejects() == 0);
}

TEST_CASE("run_experiment produces one cell per method x seed") {
    auto cfg = small_cfg();
    cfg.methods = {"fedavg", "mcp_fusion"};
    cfg.seeds = {1, 2};
    auto result = run_experiment(cfg);
    REQUIRE(result.cells.size() == 4);
    CHECK(result.cells[0].method == "fedavg");
    CHECK(result.cells[3].method == "mcp_fusion");
    for (const auto& cell : result.cells) {
        CHECK(cell.rounds.size() == cfg.rounds + 1);  // round-0 evaluation included
        for (const auto& rs : cell.rounds) {
            CHECK(rs.eval.accuracy >= 0.0);
            CHECK(rs.eval.accuracy <= 1.0);
        }
    }
    CHECK(final_accuracy_mean(result, "fedavg") >= 0.0);
}
