#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "concbound/verify.hpp"

using namespace concbound;

namespace {

EnsembleConfig pareto_config(double alpha, std::int64_t n, std::int64_t big_n,
                             std::uint64_t seed, Dependence dep = Dependence::SharedEnvelopeRows) {
    EnsembleConfig c;
    c.family = Family::SymmetricPareto;
    c.alpha = alpha;
    c.n = n;
    c.N = big_n;
    c.seed = seed;
    c.dependence = dep;
    return c;
}

CheckOptions quick(std::int64_t replications) {
    CheckOptions opt;
    opt.replications = replications;
    return opt;
}

}  // namespace

TEST_CASE("verdict margin rule is exact") {
    const auto fail = make_verdict("fixture", 15.0, 1.0, 5.0, 3.0);  // exceeds bound by 10 SE
    CHECK_FALSE(fail.passed);
    const auto pass = make_verdict("fixture", 5.5, 1.0, 5.0, 3.0);
    CHECK(pass.passed);
    const auto boundary = make_verdict("fixture", 8.0, 1.0, 5.0, 3.0);
    CHECK(boundary.passed);  // 8 - 3 <= 5

    // re-derivable from the recorded fields
    for (const auto& v : {fail, pass, boundary}) {
        CHECK(v.passed == (v.empirical - v.margin_sigmas * v.empirical_se <= v.bound));
    }
}

TEST_CASE("mgf lemma: exact two-point checks") {
    const FiniteSupportDistribution two_point{{-1.0, 1.0}, {0.5, 0.5}};
    const auto at_2 = check_mgf_lemma(two_point, 2.0);
    CHECK(at_2.empirical == doctest::Approx(std::cosh(0.5)).epsilon(1e-15));
    CHECK(at_2.bound == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(at_2.empirical_se == 0.0);
    CHECK(at_2.passed);

    const auto at_1 = check_mgf_lemma(two_point, 1.0);
    CHECK(at_1.empirical == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
    CHECK(at_1.bound == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(at_1.passed);

    const FiniteSupportDistribution point_mass{{0.0}, {1.0}};
    const auto degenerate = check_mgf_lemma(point_mass, 3.0);
    CHECK(degenerate.empirical == 1.0);
    CHECK(degenerate.passed);

    // bit-identical on re-run
    const auto again = check_mgf_lemma(two_point, 2.0);
    CHECK(again.empirical == at_2.empirical);
}

TEST_CASE("mgf lemma: domain errors") {
    CHECK_THROWS_AS(check_mgf_lemma({{0.5}, {1.0}}, 2.0), DomainError);  // not centered
    CHECK_THROWS_AS(check_mgf_lemma({{-3.0, 3.0}, {0.5, 0.5}}, 2.0), DomainError);  // support
    CHECK_THROWS_AS(check_mgf_lemma({{-2.0, 2.0}, {0.5, 0.5}}, 2.0), DomainError);  // E W^2 = 4
    CHECK_THROWS_AS(check_mgf_lemma({{-1.0, 1.0}, {0.3, 0.3}}, 2.0), DomainError);  // probs
    CHECK_THROWS_AS(check_mgf_lemma({{}, {}}, 2.0), DomainError);
}

TEST_CASE("combinatorics check") {
    const auto v = check_combinatorics(6, 6);
    CHECK(v.passed);
    CHECK(v.empirical == doctest::Approx(1.0).epsilon(1e-12));  // equality at C_2^n = n
    CHECK(v.bound == 1.0);

    const auto corrupted = check_combinatorics(6, 6, 1e-3);
    CHECK_FALSE(corrupted.passed);
}

TEST_CASE("averaging lemma") {
    // W identically one: the estimate is exactly one
    EnsembleConfig constant;
    constant.family = Family::BoundedUniform;
    constant.lo = 1.0;
    constant.hi = 1.0;
    constant.n = 10;
    constant.seed = 3;
    const auto exact = check_averaging_lemma(constant, 1.0, quick(300));
    CHECK(exact.empirical == 1.0);
    CHECK(exact.empirical_se == 0.0);
    CHECK(exact.passed);

    // uniform on [0, 2] at l = 1: E W = 1 and E P_n W = 1
    EnsembleConfig uniform;
    uniform.family = Family::BoundedUniform;
    uniform.lo = 0.0;
    uniform.hi = 2.0;
    uniform.n = 50;
    uniform.seed = 4;
    const auto mean_one = check_averaging_lemma(uniform, 1.0, quick(2000));
    CHECK(mean_one.empirical == doctest::Approx(1.0).epsilon(0.05));
    CHECK(mean_one.passed);

    // heavy-tailed magnitudes scaled so E W^2 = 1
    auto pareto = pareto_config(5.0, 20, 1, 5, Dependence::IidAcrossCells);
    const auto scaled = check_averaging_lemma(pareto, 2.0, quick(2000));
    CHECK(scaled.passed);

    // infinite moment cannot be scaled
    auto heavy = pareto_config(1.5, 5, 1, 6);
    CHECK_THROWS_AS(check_averaging_lemma(heavy, 2.0, quick(300)), DomainError);
}

TEST_CASE("truncation lemma check") {
    // bounded family: K = n^(l/p) M >= M bounds every envelope, bias is exactly zero
    EnsembleConfig rad;
    rad.family = Family::Rademacher;
    rad.n = 50;
    rad.N = 10;
    rad.seed = 9;
    const auto exact = check_truncation_lemma(rad, 4.0, 1.0, quick(400));
    CHECK(exact.empirical == 0.0);
    CHECK(exact.empirical_se == 0.0);
    CHECK(exact.passed);

    // degenerate M = 0
    EnsembleConfig zero;
    zero.family = Family::BoundedUniform;
    zero.lo = 0.0;
    zero.hi = 0.0;
    zero.n = 5;
    const auto degenerate = check_truncation_lemma(zero, 2.0, 1.0, quick(200));
    CHECK(degenerate.passed);
    CHECK(degenerate.empirical == 0.0);

    // heavy-tailed case with both variants recorded
    const auto heavy = check_truncation_lemma(pareto_config(4.5, 100, 20, 42), 4.0, 2.0,
                                              quick(2000));
    CHECK(heavy.passed);
    bool has_stated = false, has_proof = false;
    for (const auto& [key, value] : heavy.details) {
        if (key == "bound_stated") has_stated = true;
        if (key == "bound_proof_derived") has_proof = true;
    }
    CHECK(has_stated);
    CHECK(has_proof);
}

TEST_CASE("moment inequality check") {
    // all-zero ensemble: empirical 0 against bound 0
    EnsembleConfig zero;
    zero.family = Family::BoundedUniform;
    zero.lo = 0.0;
    zero.hi = 0.0;
    zero.n = 5;
    zero.N = 2;
    const auto trivial =
        check_moment_inequality(zero, 2.0, 1.0, 1.0, Direction::Upper, quick(200));
    CHECK(trivial.passed);
    CHECK(trivial.empirical == 0.0);
    CHECK(trivial.bound == 0.0);

    EnsembleConfig rad;
    rad.family = Family::Rademacher;
    rad.n = 20;
    rad.N = 5;
    rad.seed = 17;
    const auto upper = check_moment_inequality(rad, 4.0, 1.0, 1.0, Direction::Upper, quick(600));
    CHECK(upper.passed);
    const auto lower = check_moment_inequality(rad, 4.0, 1.0, 0.5, Direction::Lower, quick(600));
    CHECK(lower.passed);

    // corrupting the bound by 1e-3 must flip a check with a nonzero empirical
    auto corrupted = quick(300);
    corrupted.bound_scale = 1e-3;
    EnsembleConfig constant;
    constant.family = Family::BoundedUniform;
    constant.lo = 1.0;
    constant.hi = 1.0;
    constant.n = 4;
    const auto failing = check_averaging_lemma(constant, 1.0, corrupted);
    CHECK_FALSE(failing.passed);  // 1.0 > 1e-3 with zero SE
}

TEST_CASE("regime comparison") {
    CHECK(regime_comparison({}, 1.0).empty());

    const auto rows = regime_comparison({{2.0, 3.0, 100, 10}, {2.0, 3.0, 10000, 10}}, 1.0);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].gamma_favored);  // l <= p < 2l at (2, 3)

    const auto& big = rows[1];
    REQUIRE(big.bound_main.has_value());
    REQUIRE(big.bound_symmetrization.has_value());
    REQUIRE(big.bound_finite_class.has_value());
    // (72 * 2 / 10000^(1/3))^2 vs 2 Gamma(1) 32/10000 vs (35 * 4 / 10000)
    CHECK(*big.bound_main == doctest::Approx(std::pow(144.0 / std::pow(1e4, 1.0 / 3.0), 2.0)));
    CHECK(*big.bound_symmetrization == doctest::Approx(0.0064).epsilon(1e-12));
    CHECK(*big.bound_finite_class == doctest::Approx(0.014).epsilon(1e-12));
    CHECK(big.tightest == "symmetrization");
    REQUIRE(big.threshold_main.has_value());
    const double ez = std::sqrt(8.0 * std::log(20.0) / 1e4);
    CHECK(*big.threshold_main == doctest::Approx(2.0 * ez).epsilon(1e-12));
    CHECK(*big.threshold_symmetrization == doctest::Approx(4.0 * ez).epsilon(1e-12));
    CHECK(*big.threshold_finite_class ==
          doctest::Approx(2.0 * std::log(20.0) / 100.0).epsilon(1e-12));

    // non-integer l: the finite-class family is inapplicable
    const auto frac = regime_comparison({{1.5, 3.0, 100, 10}}, 1.0);
    CHECK_FALSE(frac[0].bound_finite_class.has_value());
    CHECK(frac[0].bound_main.has_value());
    CHECK(frac[0].bound_symmetrization.has_value());

    // p below 2: no expected-sup replacement, no finite class
    const auto low_p = regime_comparison({{1.0, 1.5, 100, 10}}, 1.0);
    CHECK_FALSE(low_p[0].threshold_main.has_value());
    CHECK_FALSE(low_p[0].bound_finite_class.has_value());
    CHECK(low_p[0].gamma_favored);  // 1 <= 1.5 < 2
}
