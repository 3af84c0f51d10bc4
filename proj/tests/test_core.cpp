#include <doctest.h>

#include <cmath>

#include "mcpfl/model_vector.hpp"
#include "mcpfl/random.hpp"

using namespace mcpfl;

namespace {

LayoutPtr two_block_layout(std::size_t a, std::size_t b) {
    return Layout::make({{"a", a}, {"b", b}});
}

}  // namespace

TEST_CASE("layout blocks are contiguous and cover the vector") {
    auto layout = Layout::make({{"phi_im", 3}, {"phi_emr", 2}, {"clf", 4}});
    CHECK(layout->total_size() == 9);
    CHECK(layout->block("phi_im").offset == 0);
    CHECK(layout->block("phi_emr").offset == 3);
    CHECK(layout->block("clf").offset == 5);
    CHECK(layout->block("clf").length == 4);
    CHECK_THROWS_AS(layout->block("nope"), LayoutError);
}

TEST_CASE("vec_axpy basic identities") {
    auto layout = two_block_layout(1, 1);
    ModelVector x(layout, {1.0, 2.0});
    ModelVector y(layout, {3.0, 4.0});

    SUBCASE("a=0 returns y") {
        auto r = vec_axpy(0.0, x, y);
        CHECK(r.values == std::vector<double>{3.0, 4.0});
    }
    SUBCASE("a=1 direct sum") {
        auto r = vec_axpy(1.0, x, y);
        CHECK(r.values == std::vector<double>{4.0, 6.0});
    }
    SUBCASE("a=2 scaling") {
        ModelVector u(layout, {1.0, -1.0});
        ModelVector z(layout, {0.0, 0.0});
        auto r = vec_axpy(2.0, u, z);
        CHECK(r.values == std::vector<double>{2.0, -2.0});
    }
}

TEST_CASE("vec_axpy rejects layout mismatch") {
    ModelVector x(two_block_layout(1, 1), {1.0, 2.0});
    ModelVector y(two_block_layout(2, 0), {1.0, 2.0});
    CHECK_THROWS_AS(vec_axpy(1.0, x, y), LayoutError);
}

TEST_CASE("l2_norm") {
    auto layout = two_block_layout(2, 1);
    CHECK(l2_norm(ModelVector(layout, {0.0, 0.0, 0.0})) == 0.0);

    auto pair = Layout::make({{"a", 2}});
    CHECK(l2_norm(ModelVector(pair, {3.0, 4.0})) == doctest::Approx(5.0));

    // independent elementwise oracle on a random 100-dim vector
    RandomStream rs(7, "test:l2");
    auto hundred = Layout::make({{"a", 100}});
    ModelVector v(hundred, rs.gaussians(100));
    double acc = 0.0;
    for (double x : v.values) acc += x * x;
    CHECK(l2_norm(v) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
}

TEST_CASE("random stream determinism contract") {
    RandomStream a(42, "noise:1:k3");
    RandomStream b(42, "noise:1:k3");
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RandomStream c(42, "noise:1:k4");
    RandomStream d(42, "noise:1:k3");
    bool all_equal = true;
    for (int i = 0; i < 10; ++i)
        if (c.next_u64() != d.next_u64()) all_equal = false;
    CHECK_FALSE(all_equal);
}

TEST_CASE("gaussian draws") {
    RandomStream empty(1, "g");
    CHECK(empty.gaussians(0).empty());

    RandomStream a(9, "g:x");
    RandomStream b(9, "g:x");
    CHECK(a.gaussians(17) == b.gaussians(17));

    // Monte-Carlo moments
    RandomStream mc(123, "g:mc");
    const std::size_t n = 100000;
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double g = mc.next_gaussian();
        sum += g;
        sq += g * g;
    }
    double mean = sum / n;
    double sd = std::sqrt(sq / n - mean * mean);
    CHECK(std::fabs(mean) < 0.02);
    CHECK(std::fabs(sd - 1.0) < 0.02);
}
