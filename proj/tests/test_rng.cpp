#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "concbound/ensemble.hpp"
#include "concbound/rng.hpp"

using namespace concbound;

TEST_CASE("counter rng is a pure function of its key") {
    CounterRng a(42, CounterRng::kCellStream, 3, 7);
    CounterRng b(42, CounterRng::kCellStream, 3, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    CounterRng c(42, CounterRng::kCellStream, 3, 8);
    CounterRng d(42, CounterRng::kCellStream, 3, 7);
    int same = 0;
    for (int i = 0; i < 100; ++i) same += (c.next_u64() == d.next_u64());
    CHECK(same == 0);
}

TEST_CASE("unit draws live in their half-open intervals and look uniform") {
    CounterRng rng(1, 5);
    double sum = 0.0, sum_sq = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sum_sq += u * u;
    }
    CHECK(sum / draws == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sum_sq / draws == doctest::Approx(1.0 / 3.0).epsilon(0.02));

    CounterRng rng2(1, 6);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng2.next_unit_open0();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("next_below covers the whole range") {
    CounterRng rng(9, 5);
    int seen[7] = {};
    for (int i = 0; i < 7000; ++i) seen[rng.next_below(7)] += 1;
    for (int k = 0; k < 7; ++k) CHECK(seen[k] > 7000 / 14);
}

TEST_CASE("sample_matrix is deterministic in (seed, replication)") {
    EnsembleConfig config;
    config.n = 3;
    config.N = 2;
    config.family = Family::SymmetricPareto;
    config.alpha = 3.0;
    config.seed = 123;

    const auto a = sample_matrix(config, 17);
    const auto b = sample_matrix(config, 17);
    CHECK(a.cells == b.cells);
    CHECK(a.envelope == b.envelope);

    const auto c = sample_matrix(config, 18);
    CHECK(a.cells != c.cells);
}

TEST_CASE("matrix shape and supports") {
    EnsembleConfig config;
    config.n = 3;
    config.N = 2;
    config.family = Family::BoundedUniform;
    config.lo = -1.0;
    config.hi = 1.0;
    const auto m = sample_matrix(config, 0);
    CHECK(m.cells.size() == 6);
    CHECK(m.envelope.size() == 3);
    for (double v : m.cells) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }

    config.family = Family::Rademacher;
    const auto r = sample_matrix(config, 0);
    for (double v : r.cells) CHECK(std::fabs(v) == 1.0);

    config.family = Family::SymmetricPareto;
    config.alpha = 2.5;
    config.scale = 0.7;
    const auto p = sample_matrix(config, 0);
    for (double v : p.cells) CHECK(std::fabs(v) >= 0.7);
}

TEST_CASE("iid mode records the minimal envelope") {
    EnsembleConfig config;
    config.n = 4;
    config.N = 5;
    config.family = Family::StudentT;
    config.dof = 5.0;
    config.seed = 7;
    const auto m = sample_matrix(config, 2);
    for (std::int64_t i = 0; i < config.n; ++i) {
        double worst = 0.0;
        for (std::int64_t j = 0; j < config.N; ++j) worst = std::max(worst, std::fabs(m.cell(i, j)));
        CHECK(m.envelope[static_cast<std::size_t>(i)] == worst);
    }
}

TEST_CASE("shared envelope rows put one magnitude per row") {
    EnsembleConfig config;
    config.n = 4;
    config.N = 6;
    config.family = Family::SymmetricPareto;
    config.alpha = 4.5;
    config.dependence = Dependence::SharedEnvelopeRows;
    config.seed = 11;
    const auto m = sample_matrix(config, 0);
    for (std::int64_t i = 0; i < config.n; ++i) {
        const double mag = m.envelope[static_cast<std::size_t>(i)];
        CHECK(mag >= 1.0);
        for (std::int64_t j = 0; j < config.N; ++j) {
            CHECK(std::fabs(m.cell(i, j)) == mag);
        }
    }
}

TEST_CASE("student-t draws have the right second moment") {
    EnsembleConfig config;
    config.n = 1;
    config.N = 1;
    config.family = Family::StudentT;
    config.dof = 8.0;
    config.seed = 3;
    CounterRng rng(3, CounterRng::kCellStream, 0, 0);
    double sum_sq = 0.0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        const double v = concbound::detail::draw_cell(config, rng);
        CHECK(std::isfinite(v));
        sum_sq += v * v;
    }
    // E T^2 = dof / (dof - 2) = 4/3
    CHECK(sum_sq / draws == doctest::Approx(8.0 / 6.0).epsilon(0.05));
}

TEST_CASE("config validation") {
    EnsembleConfig config;
    config.n = 0;
    CHECK_THROWS_AS(validate(config), DomainError);
    config.n = 1;
    config.family = Family::SymmetricPareto;
    config.alpha = 0.0;
    CHECK_THROWS_AS(validate(config), DomainError);
    config.alpha = 2.0;
    config.scale = -1.0;
    CHECK_THROWS_AS(validate(config), DomainError);
    config.scale = 1.0;
    CHECK_NOTHROW(validate(config));

    EnsembleConfig uniform;
    uniform.family = Family::BoundedUniform;
    uniform.lo = 1.0;
    uniform.hi = -1.0;
    CHECK_THROWS_AS(validate(uniform), DomainError);
}

TEST_CASE("centered flag follows the support") {
    EnsembleConfig config;
    config.family = Family::BoundedUniform;
    config.lo = -1.0;
    config.hi = 1.0;
    CHECK(config.centered());
    config.lo = 0.0;
    config.hi = 2.0;
    CHECK_FALSE(config.centered());
    config.family = Family::Rademacher;
    CHECK(config.centered());
}
