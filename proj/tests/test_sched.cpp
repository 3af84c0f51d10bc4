#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mcpfl/sched.hpp"

using namespace mcpfl;

namespace {

ClientProfile base_profile() {
    ClientProfile p;
    p.id = 0;
    p.energy = 0.5;
    p.depletion_est = 0.2;
    p.link = 0.8;
    p.staleness = 1;
    return p;
}

SchedulerConfig base_cfg() {
    SchedulerConfig cfg;
    cfg.tau = 0.2;
    cfg.gamma = 0.2;
    cfg.eta = 3;
    return cfg;
}

std::vector<ClientProfile> random_profiles(std::size_t n, std::uint64_t seed) {
    RandomStream rs(seed, "test:profiles");
    std::vector<ClientProfile> ps;
    for (std::size_t i = 0; i < n; ++i) {
        ClientProfile p;
        p.id = static_cast<int>(i);
        p.energy = rs.next_double();
        p.depletion_est = 0.3 * rs.next_double();
        p.link = rs.next_double();
        p.staleness = static_cast<int>(rs.next_below(8));
        ps.push_back(p);
    }
    return ps;
}

}  // namespace

TEST_CASE("eligibility truth table over the three conditions") {
    auto cfg = base_cfg();
    for (int energy_ok = 0; energy_ok <= 1; ++energy_ok) {
        for (int link_ok = 0; link_ok <= 1; ++link_ok) {
            for (int fresh = 0; fresh <= 1; ++fresh) {
                ClientProfile p = base_profile();
                p.energy = energy_ok ? 0.5 : 0.15;  // 0.5-0.1 >= 0.2 vs 0.15-0.1 < 0.2
                p.depletion_est = 0.1;
                p.link = link_ok ? 0.8 : 0.1;
                p.staleness = fresh ? 1 : 4;
                bool expect = energy_ok && link_ok && fresh;
                CHECK(eligibility(p, cfg) == expect);
            }
        }
    }
}

TEST_CASE("eligibility boundary cases from the indicator definition") {
    auto cfg = base_cfg();
    ClientProfile p = base_profile();
    CHECK(eligibility(p, cfg));  // 0.5 - 0.2 >= 0.2

    p.energy = 0.15;
    p.depletion_est = 0.1;
    CHECK_FALSE(eligibility(p, cfg));  // 0.05 < 0.2

    p = base_profile();
    p.staleness = 4;
    CHECK_FALSE(eligibility(p, cfg));  // eta = 3
}

TEST_CASE("eligibility is monotone in each field") {
    auto cfg = base_cfg();
    for (const auto& p : random_profiles(1000, 6)) {
        if (!eligibility(p, cfg)) continue;
        ClientProfile q = p;
        q.energy = std::min(1.0, p.energy + 0.1);
        CHECK(eligibility(q, cfg));
        q = p;
        q.link = std::min(1.0, p.link + 0.1);
        CHECK(eligibility(q, cfg));
        q = p;
        q.depletion_est = std::max(0.0, p.depletion_est - 0.1);
        CHECK(eligibility(q, cfg));
        q = p;
        q.staleness = std::max(0, p.staleness - 1);
        CHECK(eligibility(q, cfg));
    }
}

TEST_CASE("staleness readmit overrides long absence") {
    auto cfg = base_cfg();
    ClientProfile p = base_profile();
    p.staleness = 7;  // > 2 * eta
    CHECK_FALSE(eligibility(p, cfg));
    cfg.staleness_readmit = true;
    CHECK(eligibility(p, cfg));
}

TEST_CASE("select_round policies") {
    auto profiles = random_profiles(20, 7);
    auto cfg = base_cfg();

    SUBCASE("policy all takes everyone") {
        cfg.policy = Policy::all;
        RandomStream rs(1, "s");
        CHECK(select_round(profiles, cfg, rs).size() == 20);
    }
    SUBCASE("all-ineligible population yields the empty round") {
        cfg.tau = 1.0;  // nobody passes energy - depletion >= 1
        RandomStream rs(1, "s");
        CHECK(select_round(profiles, cfg, rs).empty());
    }
    SUBCASE("random_k samples exactly k") {
        cfg.policy = Policy::random_k;
        cfg.random_k = 7;
        RandomStream rs(1, "s");
        CHECK(select_round(profiles, cfg, rs).size() == 7);
    }
    SUBCASE("energy_aware roster is a subset of the full roster") {
        RandomStream rs(1, "s");
        auto ea = select_round(profiles, cfg, rs);
        cfg.policy = Policy::all;
        auto everyone = select_round(profiles, cfg, rs);
        for (int id : ea)
            CHECK(std::find(everyone.begin(), everyone.end(), id) != everyone.end());
    }
    SUBCASE("raising tau never grows the roster") {
        std::size_t prev = 21;
        for (double tau : {0.0, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0}) {
            cfg.tau = tau;
            RandomStream rs(1, "s");
            auto roster = select_round(profiles, cfg, rs);
            CHECK(roster.size() <= prev);
            prev = roster.size();
        }
    }
}

TEST_CASE("dropout simulation") {
    auto cfg = base_cfg();
    ClientProfile p = base_profile();

    SUBCASE("kappa = 0 never drops") {
        cfg.dropout_kappa = 0.0;
        RandomStream rs(1, "d");
        for (int i = 0; i < 100; ++i) CHECK(survives_round(p, cfg, rs));
    }
    SUBCASE("drop probability caps at 0.9 for depleted clients") {
        cfg.dropout_kappa = 5.0;
        p.energy = 1e-9;
        p.depletion_est = 0.5;
        RandomStream rs(2, "d");
        int drops = 0;
        for (int i = 0; i < 20000; ++i)
            if (!survives_round(p, cfg, rs)) ++drops;
        CHECK(std::fabs(drops / 20000.0 - 0.9) < 0.01);
    }
    SUBCASE("empirical rate matches kappa * dE / E") {
        cfg.dropout_kappa = 0.5;
        p.energy = 0.5;
        p.depletion_est = 0.1;  // p_drop = 0.1
        RandomStream rs(3, "d");
        int drops = 0;
        for (int i = 0; i < 10000; ++i)
            if (!survives_round(p, cfg, rs)) ++drops;
        CHECK(std::fabs(drops / 10000.0 - 0.1) <= 0.01);
    }
}

TEST_CASE("step_energy bookkeeping") {
    ClientProfile p = base_profile();
    p.recharge_rate = 0.0;

    SUBCASE("idle with no recharge leaves energy unchanged") {
        auto q = step_energy(p, Participation::idle, 0.0);
        CHECK(q.energy == p.energy);
        CHECK(q.staleness == p.staleness + 1);
    }
    SUBCASE("participation arithmetic") {
        p.energy = 0.5;
        p.train_cost = 0.05;
        p.comm_cost_per_mb = 0.01;
        p.recharge_rate = 0.02;
        auto q = step_energy(p, Participation::completed, 1.0);
        CHECK(q.energy == doctest::Approx(0.46));
        CHECK(q.staleness == 0);
    }
    SUBCASE("energy clamps at zero") {
        p.energy = 0.01;
        p.train_cost = 0.5;
        auto q = step_energy(p, Participation::dropped, 0.0);
        CHECK(q.energy == 0.0);
        CHECK(q.staleness == p.staleness + 1);
    }
    SUBCASE("depletion estimate is an EMA of spend") {
        p.depletion_est = 0.0;
        p.train_cost = 0.1;
        p.comm_cost_per_mb = 0.0;
        auto q = step_energy(p, Participation::completed, 0.0);
        CHECK(q.depletion_est == doctest::Approx(0.05));
        q = step_energy(q, Participation::completed, 0.0);
        CHECK(q.depletion_est == doctest::Approx(0.075));
    }
}
