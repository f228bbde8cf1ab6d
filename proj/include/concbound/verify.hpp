#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "concbound/bounds.hpp"
#include "concbound/combinatorics.hpp"
#include "concbound/ensemble.hpp"
#include "concbound/errors.hpp"
#include "concbound/simulate.hpp"

namespace concbound {

// Outcome of one inequality check. `passed` follows the margin rule
// empirical - margin_sigmas * empirical_se <= bound, nothing else.
struct Verdict {
    std::string name;
    double empirical = 0.0;
    double empirical_se = 0.0;
    double bound = 0.0;
    double margin_sigmas = 3.0;
    bool passed = false;
    std::vector<std::pair<std::string, std::string>> details;
};

inline Verdict make_verdict(std::string name, double empirical, double empirical_se,
                            double bound, double margin_sigmas = 3.0) {
    Verdict v;
    v.name = std::move(name);
    v.empirical = empirical;
    v.empirical_se = empirical_se;
    v.bound = bound;
    v.margin_sigmas = margin_sigmas;
    v.passed = empirical - margin_sigmas * empirical_se <= bound;
    return v;
}

struct CheckOptions {
    std::int64_t replications = 100000;
    double pilot_fraction = 0.2;
    double margin_sigmas = 3.0;
    double bound_scale = 1.0;  // test fixture: scales the bound side of every check
    int threads = 0;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace detail

// Monte Carlo dominance check of the main concentration bound: estimates
// E[Z - (1+eps) E Z]_+^l (or the lower-direction analogue) and compares it
// with the closed-form bound evaluated at the analytic envelope moments.
inline Verdict check_moment_inequality(const EnsembleConfig& config, double p, double l,
                                       double eps, Direction direction,
                                       const CheckOptions& opt = {}) {
    const auto moments = analytic_ensemble_moments(config, p);
    const MomentEnvelopeSpec spec{p, moments.M};
    const ProcessScale scale{config.n, config.N, moments.sigma, {}};
    const auto bound = eval_main_moment_bound(direction, l, eps, spec, scale);

    const auto summary = estimate(config, opt.replications, {{l, eps, direction}}, std::nullopt,
                                  opt.pilot_fraction, opt.threads);
    const auto& pm = summary.plus_moments.front();

    auto v = make_verdict("moment_" + std::string(to_string(direction)) + "_l" + detail::fmt(l),
                          pm.estimate, pm.se, bound.value * opt.bound_scale, opt.margin_sigmas);
    v.details = {
        {"family", std::string(to_string(config.family))},
        {"direction", std::string(to_string(direction))},
        {"l", detail::fmt(l)},
        {"eps", detail::fmt(eps)},
        {"p", detail::fmt(p)},
        {"M", detail::fmt(moments.M)},
        {"sigma", detail::fmt(moments.sigma)},
        {"threshold", detail::fmt(pm.threshold)},
        {"mean_sup_pilot", detail::fmt(summary.mean_sup)},
        {"replications", std::to_string(opt.replications)},
        {"bound_scale", detail::fmt(opt.bound_scale)},
    };
    return v;
}

// Truncation-bias lemma at K = n^(l/p) M: |E[Z_trunc - Z]| against the
// proof-derived bound M / n^(1-l/p). The stated variant M / n^(l(1-1/p)) is
// recorded in the details for comparison.
inline Verdict check_truncation_lemma(const EnsembleConfig& config, double p, double l,
                                      const CheckOptions& opt = {}) {
    const auto moments = analytic_ensemble_moments(config, p);
    const MomentEnvelopeSpec spec{p, moments.M};
    const ProcessScale scale{config.n, config.N, moments.sigma, {}};
    const auto bias = eval_truncation_bias(l, spec, scale);
    const double K = std::pow(static_cast<double>(config.n), l / p) * moments.M;

    double empirical = 0.0, se = 0.0;
    if (moments.M > 0.0) {
        const auto batch = run_replications(config, opt.replications, K, opt.threads);
        std::vector<double> diffs(batch.stats.size());
        for (std::size_t r = 0; r < batch.stats.size(); ++r) {
            diffs[r] = batch.stats[r].sup_bounded - batch.stats[r].sup;
        }
        const double mean = detail::mean_of(diffs);
        empirical = std::fabs(mean);
        se = detail::sample_sd(diffs, mean) /
             std::sqrt(static_cast<double>(batch.stats.size()));
    }

    auto v = make_verdict("truncation_bias_l" + detail::fmt(l), empirical, se,
                          bias.proof_derived * opt.bound_scale, opt.margin_sigmas);
    v.details = {
        {"family", std::string(to_string(config.family))},
        {"l", detail::fmt(l)},
        {"p", detail::fmt(p)},
        {"K", detail::fmt(K)},
        {"M", detail::fmt(moments.M)},
        {"bound_proof_derived", detail::fmt(bias.proof_derived)},
        {"bound_stated", detail::fmt(bias.stated)},
        {"replications", std::to_string(opt.replications)},
        {"bound_scale", detail::fmt(opt.bound_scale)},
    };
    return v;
}

// Averaging lemma: for nonnegative W with E W^l <= 1, E[P_n W]^l <= 1. W is
// built from the family's magnitudes scaled so that E W^l = 1 analytically.
inline Verdict check_averaging_lemma(const EnsembleConfig& config, double l,
                                     const CheckOptions& opt = {}) {
    require_domain(l >= 1.0, "check_averaging_lemma: l must be >= 1");
    const double raw_moment = abs_moment(config, l);  // throws if the moment diverges
    const double w_scale = raw_moment > 0.0 ? std::pow(raw_moment, -1.0 / l) : 0.0;

    std::vector<double> values(static_cast<std::size_t>(opt.replications));
    for (std::int64_t r = 0; r < opt.replications; ++r) {
        double acc = 0.0;
        for (std::int64_t i = 0; i < config.n; ++i) {
            CounterRng rng(config.seed, CounterRng::kCellStream, static_cast<std::uint64_t>(r),
                           static_cast<std::uint64_t>(i));
            acc += w_scale * detail::draw_magnitude(config, rng);
        }
        values[static_cast<std::size_t>(r)] =
            std::pow(acc / static_cast<double>(config.n), l);
    }
    const double mean = detail::mean_of(values);
    const double se =
        detail::sample_sd(values, mean) / std::sqrt(static_cast<double>(opt.replications));

    auto v = make_verdict("averaging_l" + detail::fmt(l), mean, se, 1.0 * opt.bound_scale,
                          opt.margin_sigmas);
    v.details = {
        {"family", std::string(to_string(config.family))},
        {"l", detail::fmt(l)},
        {"w_scale", detail::fmt(w_scale)},
        {"replications", std::to_string(opt.replications)},
        {"bound_scale", detail::fmt(opt.bound_scale)},
    };
    return v;
}

// A centered random variable with finitely many atoms, for exact
// moment-generating-function checks.
struct FiniteSupportDistribution {
    std::vector<double> values;
    std::vector<double> probs;
};

// MGF lemma: centered W in [-A, A] with E W^2 <= 1 satisfies
// E e^(W/A) <= 1 + 1/A^2. Exact summation, so the verdict carries SE = 0.
inline Verdict check_mgf_lemma(const FiniteSupportDistribution& dist, double A,
                               double bound_scale = 1.0) {
    require_domain(std::isfinite(A) && A > 0.0, "check_mgf_lemma: A must be > 0");
    require_domain(!dist.values.empty() && dist.values.size() == dist.probs.size(),
                   "check_mgf_lemma: distribution needs matching values and probabilities");
    double total = 0.0, mean = 0.0, second = 0.0;
    for (std::size_t k = 0; k < dist.values.size(); ++k) {
        require_domain(dist.probs[k] >= 0.0, "check_mgf_lemma: probabilities must be >= 0");
        require_domain(std::fabs(dist.values[k]) <= A,
                       "check_mgf_lemma: support must lie in [-A, A]");
        total += dist.probs[k];
        mean += dist.probs[k] * dist.values[k];
        second += dist.probs[k] * dist.values[k] * dist.values[k];
    }
    require_domain(std::fabs(total - 1.0) <= 1e-12,
                   "check_mgf_lemma: probabilities must sum to 1");
    require_domain(std::fabs(mean) <= 1e-12, "check_mgf_lemma: W must be centered");
    require_domain(second <= 1.0 + 1e-12, "check_mgf_lemma: requires E W^2 <= 1");

    double mgf = 0.0;
    for (std::size_t k = 0; k < dist.values.size(); ++k) {
        mgf += dist.probs[k] * std::exp(dist.values[k] / A);
    }
    auto v = make_verdict("mgf_A" + detail::fmt(A), mgf, 0.0,
                          (1.0 + 1.0 / (A * A)) * bound_scale);
    v.details = {
        {"A", detail::fmt(A)},
        {"support_size", std::to_string(dist.values.size())},
        {"second_moment", detail::fmt(second)},
        {"bound_scale", detail::fmt(bound_scale)},
    };
    return v;
}

// Counting lemma over the full grid m <= m_max, n <= n_max: the exact tuple
// count never exceeds m! (n/2)^floor(m/2), with the anchor values matched
// exactly. The verdict records the worst exact/bound ratio.
inline Verdict check_combinatorics(int m_max, int n_max, double bound_scale = 1.0) {
    require_domain(m_max >= 1 && n_max >= 1, "check_combinatorics: grid must be nonempty");
    double worst_ratio = 0.0;
    int worst_m = 0, worst_n = 0;
    bool anchors_ok = true;
    for (int m = 1; m <= m_max; ++m) {
        for (int n = 1; n <= n_max; ++n) {
            const auto exact = c_exact(m, n);  // throws BudgetError past the budget
            const double bound = c_bound(m, n);
            const double ratio = static_cast<double>(exact) / bound;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst_m = m;
                worst_n = n;
            }
            if (m == 1 && exact != 0) anchors_ok = false;
            if (m == 2 && exact != static_cast<std::uint64_t>(n)) anchors_ok = false;
            if (n == 1 && m >= 2 && exact != 1) anchors_ok = false;
            if (m == 3 && n == 2 && exact != 2) anchors_ok = false;
        }
    }
    const double empirical =
        anchors_ok ? worst_ratio : std::numeric_limits<double>::infinity();
    auto v = make_verdict("combinatorics", empirical, 0.0, 1.0 * bound_scale);
    v.details = {
        {"m_max", std::to_string(m_max)},
        {"n_max", std::to_string(n_max)},
        {"worst_ratio_at", "m=" + std::to_string(worst_m) + ",n=" + std::to_string(worst_n)},
        {"anchors", "C(1,n)=0, C(2,n)=n, C(3,2)=2, C(m,1)=1"},
        {"anchors_ok", anchors_ok ? "true" : "false"},
        {"bound_scale", detail::fmt(bound_scale)},
    };
    return v;
}

struct RegimeRequest {
    double l = 1.0;
    double p = 2.0;
    std::int64_t n = 1;
    std::int64_t N = 1;
};

// Envelope-term values of the three l-th-moment deviation bounds, side by
// side, with their thresholds (E Z replaced by the expected-sup bound).
struct RegimeRow {
    RegimeRequest params;
    std::optional<double> bound_main;            // (72 l M / n^(1-l/p))^l, eps = 1
    std::optional<double> bound_symmetrization;  // l Gamma(l/2) (32/n)^(l/2) M^l
    std::optional<double> bound_finite_class;    // (35 l^2/n)^(l/2) M^l
    std::optional<double> threshold_main;            // 2 E Z
    std::optional<double> threshold_symmetrization;  // 4 E Z
    std::optional<double> threshold_finite_class;    // 2 M log(2N)/sqrt(n)
    bool gamma_favored = false;  // l <= p < 2l
    std::string tightest;
};

inline std::vector<RegimeRow> regime_comparison(const std::vector<RegimeRequest>& grid,
                                                double M) {
    require_domain(std::isfinite(M) && M >= 0.0, "regime_comparison: M must be >= 0");
    std::vector<RegimeRow> rows;
    rows.reserve(grid.size());
    for (const auto& req : grid) {
        RegimeRow row;
        row.params = req;
        const MomentEnvelopeSpec spec{req.p, M};
        const ProcessScale scale{req.n, req.N, 0.0, {}};
        validate(spec);
        validate(scale);

        std::optional<double> ez_bound;
        if (req.p >= 2.0) ez_bound = eval_expected_sup_bound(spec, scale).value;

        if (req.l >= 1.0 && req.l <= req.p) {
            const double inner = 72.0 * req.l * M /
                                 detail::envelope_decay(static_cast<double>(req.n), req.l, req.p);
            row.bound_main = std::pow(inner, req.l);
            if (ez_bound) row.threshold_main = 2.0 * *ez_bound;
        }
        if (req.l >= 1.0 && req.p >= req.l) {
            row.bound_symmetrization = eval_symmetrization_bound(req.l, spec, scale).value;
            if (ez_bound) row.threshold_symmetrization = 4.0 * *ez_bound;
        }
        if (req.p >= 2.0 && req.l >= 1.0 && req.l == std::floor(req.l) && req.p >= req.l) {
            const auto fc = eval_finite_class_bound(req.l, spec, scale);
            row.bound_finite_class = fc.value;
            row.threshold_finite_class = fc.threshold;
        }
        row.gamma_favored = req.l <= req.p && req.p < 2.0 * req.l;

        double best = std::numeric_limits<double>::infinity();
        if (row.bound_main && *row.bound_main < best) {
            best = *row.bound_main;
            row.tightest = "main";
        }
        if (row.bound_symmetrization && *row.bound_symmetrization < best) {
            best = *row.bound_symmetrization;
            row.tightest = "symmetrization";
        }
        if (row.bound_finite_class && *row.bound_finite_class < best) {
            best = *row.bound_finite_class;
            row.tightest = "finite_class";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace concbound
