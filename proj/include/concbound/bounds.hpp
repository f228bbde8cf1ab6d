#pragma once

#include <cmath>
#include <optional>

#include "concbound/errors.hpp"
#include "concbound/gamma.hpp"
#include "concbound/types.hpp"

namespace concbound {

namespace detail {

// n^(1 - l/p), the decay rate of the envelope term.
inline double envelope_decay(double n, double l, double p) {
    return std::pow(n, 1.0 - l / p);
}

inline void check_l_range(double l, double p, const char* who) {
    require_domain(std::isfinite(l) && l >= 1.0 && l <= p,
                   std::string(who) + ": l must satisfy 1 <= l <= p");
}

inline void check_integer_l(double l, const char* who) {
    require_domain(std::isfinite(l) && l >= 1.0 && l == std::floor(l),
                   std::string(who) + ": l must be a positive integer");
}

}  // namespace detail

// Inner sum of the main moment bound before the outer l-th power:
//   upper: (64/eps + 7 + eps) l M / n^(1-l/p) + 4 sqrt(l) sigma / sqrt(n)
//   lower: (86.4/eps + 7 - eps) l M / n^(1-l/p) + 4.7 sqrt(l) sigma / sqrt(n)
inline double main_moment_inner(Direction dir, double l, double eps,
                                const MomentEnvelopeSpec& spec, const ProcessScale& scale) {
    const double n = static_cast<double>(scale.n);
    const double env_coeff =
        dir == Direction::Upper ? 64.0 / eps + 7.0 + eps : 86.4 / eps + 7.0 - eps;
    const double sigma_coeff = dir == Direction::Upper ? 4.0 : 4.7;
    return env_coeff * l * spec.M / detail::envelope_decay(n, l, spec.p) +
           sigma_coeff * std::sqrt(l) * scale.sigma / std::sqrt(n);
}

// Bound on E[Z - (1+eps) E Z]_+^l (upper) or E[(1-eps) E Z - Z]_+^l (lower).
inline BoundResult eval_main_moment_bound(Direction dir, double l, double eps,
                                          const MomentEnvelopeSpec& spec,
                                          const ProcessScale& scale) {
    validate(spec);
    validate(scale);
    detail::check_l_range(l, spec.p, "eval_main_moment_bound");
    detail::check_direction_eps(dir, eps, "eval_main_moment_bound");

    BoundResult out;
    out.family = dir == Direction::Upper ? BoundFamily::MainUpper : BoundFamily::MainLower;
    out.params.family = out.family;
    out.params.l = l;
    out.params.eps = eps;
    out.value = std::pow(main_moment_inner(dir, l, eps, spec, scale), l);
    out.ez_multiple = dir == Direction::Upper ? 1.0 + eps : 1.0 - eps;
    return out;
}

// Truncated variant: the bound of the generalized lemma at truncation level K,
//   upper: ((64/eps + 5) l K / n + 4 sqrt(l) sigma_trunc / sqrt(n) + M^(p/l) / K^(p/l - 1))^l
//   lower: same with (86.4/eps + 5) and 4.7 sqrt(l).
inline BoundResult eval_truncated_moment_bound(Direction dir, double l, double eps, double K,
                                               const MomentEnvelopeSpec& spec,
                                               const ProcessScale& scale) {
    validate(spec);
    validate(scale);
    detail::check_l_range(l, spec.p, "eval_truncated_moment_bound");
    detail::check_direction_eps(dir, eps, "eval_truncated_moment_bound");
    require_domain(std::isfinite(K) && K > 0.0, "eval_truncated_moment_bound: K must be > 0");

    const double n = static_cast<double>(scale.n);
    const double env_coeff = dir == Direction::Upper ? 64.0 / eps + 5.0 : 86.4 / eps + 5.0;
    const double sigma_coeff = dir == Direction::Upper ? 4.0 : 4.7;
    const double pl = spec.p / l;
    const double tail_term = spec.M == 0.0 ? 0.0 : std::pow(spec.M, pl) / std::pow(K, pl - 1.0);
    const double inner = env_coeff * l * K / n +
                         sigma_coeff * std::sqrt(l) * scale.sigma_lower() / std::sqrt(n) +
                         tail_term;

    BoundResult out;
    out.family = dir == Direction::Upper ? BoundFamily::TruncatedUpper : BoundFamily::TruncatedLower;
    out.params.family = out.family;
    out.params.l = l;
    out.params.eps = eps;
    out.params.K = K;
    out.value = std::pow(inner, l);
    out.ez_multiple = dir == Direction::Upper ? 1.0 + eps : 1.0 - eps;
    return out;
}

// Symmetrization bound for centered vectors: l Gamma(l/2) (32/n)^(l/2) M^l,
// controlling E[Z - 4 E Z]_+^l. The 4 E Z threshold stays symbolic.
inline BoundResult eval_symmetrization_bound(double l, const MomentEnvelopeSpec& spec,
                                             const ProcessScale& scale) {
    validate(spec);
    validate(scale);
    require_domain(std::isfinite(l) && l >= 1.0, "eval_symmetrization_bound: l must be >= 1");
    require_domain(spec.p >= l, "eval_symmetrization_bound: p must be >= l");

    const double n = static_cast<double>(scale.n);
    BoundResult out;
    out.family = BoundFamily::Symmetrization;
    out.params.family = out.family;
    out.params.l = l;
    out.value = l * gamma(l / 2.0) * std::pow(32.0 / n, l / 2.0) * std::pow(spec.M, l);
    out.ez_multiple = 4.0;
    out.centered_assumed = true;
    return out;
}

// Finite-class deviation bound for centered vectors.
//   A omitted: (35 l^2 / n)^(l/2) M^l against the threshold 2 M log(2N)/sqrt(n).
//   A given:   (2 (2/A)^(p-1) + (l!)^(1/l) sqrt(2/n) + 1/A + l A / n)^l M^l
//              against the threshold A M log(2N)/n.
inline BoundResult eval_finite_class_bound(double l, const MomentEnvelopeSpec& spec,
                                           const ProcessScale& scale,
                                           std::optional<double> A = std::nullopt) {
    validate(spec);
    validate(scale);
    detail::check_integer_l(l, "eval_finite_class_bound");
    require_domain(spec.p >= 2.0, "eval_finite_class_bound: p must be >= 2");
    require_domain(spec.p >= l, "eval_finite_class_bound: p must be >= l");
    if (A) {
        require_domain(std::isfinite(*A) && *A >= 2.0, "eval_finite_class_bound: A must be >= 2");
    }

    const double n = static_cast<double>(scale.n);
    const double N = static_cast<double>(scale.N);
    const double ml = std::pow(spec.M, l);

    BoundResult out;
    out.centered_assumed = true;
    out.params.l = l;
    if (!A) {
        out.family = BoundFamily::FiniteClass;
        out.value = std::pow(35.0 * l * l / n, l / 2.0) * ml;
        out.threshold = 2.0 * spec.M * std::log(2.0 * N) / std::sqrt(n);
    } else {
        out.family = BoundFamily::FiniteClassGeneral;
        out.params.A = *A;
        const int li = static_cast<int>(l);
        const double inner = 2.0 * std::pow(2.0 / *A, spec.p - 1.0) +
                             std::pow(factorial(li), 1.0 / l) * std::sqrt(2.0 / n) +
                             1.0 / *A + l * *A / n;
        out.value = std::pow(inner, l) * ml;
        out.threshold = *A * spec.M * std::log(2.0 * N) / n;
    }
    out.params.family = out.family;
    return out;
}

// Bounded-part deviation bound (M/A + l A M / n)^l at the implied truncation
// level K = A/2 + sqrt(A^2/4 - 1); the threshold is A M log(N)/n.
inline BoundResult eval_bounded_part_bound(double l, double A, const MomentEnvelopeSpec& spec,
                                           const ProcessScale& scale) {
    validate(spec);
    validate(scale);
    detail::check_integer_l(l, "eval_bounded_part_bound");
    require_domain(spec.p >= 2.0, "eval_bounded_part_bound: p must be >= 2");
    require_domain(std::isfinite(A) && A >= 2.0, "eval_bounded_part_bound: A must be >= 2");

    const double n = static_cast<double>(scale.n);
    const double N = static_cast<double>(scale.N);
    BoundResult out;
    out.family = BoundFamily::BoundedPart;
    out.params.family = out.family;
    out.params.l = l;
    out.params.A = A;
    out.params.K = A / 2.0 + std::sqrt(A * A / 4.0 - 1.0);  // implied truncation level
    out.value = std::pow(spec.M / A + l * A * spec.M / n, l);
    out.threshold = A * spec.M * std::log(N) / n;
    return out;
}

struct TruncationBias {
    double stated;         // M / n^(l (1 - 1/p)), as stated in the lemma
    double proof_derived;  // M / n^(1 - l/p), what the Hoelder step actually yields
};

// Both variants of the truncation-bias bound on |E[Z_trunc - Z]| at
// K = n^(l/p) M. They coincide at l = 1 and differ for l > 1; verification
// uses the proof-derived value.
inline TruncationBias eval_truncation_bias(double l, const MomentEnvelopeSpec& spec,
                                           const ProcessScale& scale) {
    validate(spec);
    validate(scale);
    detail::check_l_range(l, spec.p, "eval_truncation_bias");
    const double n = static_cast<double>(scale.n);
    return TruncationBias{
        spec.M / std::pow(n, l * (1.0 - 1.0 / spec.p)),
        spec.M / std::pow(n, 1.0 - l / spec.p),
    };
}

// Duembgen-style bound on the expected supremum of centered vectors:
// E Z <= sqrt(8 log(2N)/n) M, valid for p >= 2.
inline BoundResult eval_expected_sup_bound(const MomentEnvelopeSpec& spec,
                                           const ProcessScale& scale) {
    validate(spec);
    validate(scale);
    require_domain(spec.p >= 2.0, "eval_expected_sup_bound: p must be >= 2");
    const double n = static_cast<double>(scale.n);
    const double N = static_cast<double>(scale.N);
    BoundResult out;
    out.family = BoundFamily::ExpectedSup;
    out.params.family = out.family;
    out.value = std::sqrt(8.0 * std::log(2.0 * N) / n) * spec.M;
    out.centered_assumed = true;
    return out;
}

struct ClassicalTail {
    double threshold;   // deviation level at probability e^(-n x)
    double prob_bound;  // e^(-n x), clipped to <= 1
    double raw;         // unclipped e^(-n x)
};

struct BousquetParams {
    double sigma_y2 = 0.0;  // sup_f Var f(X_1)
    double mean_y = 0.0;    // E Y
    std::int64_t n = 1;
};

struct BernsteinClassParams {
    double bernstein_k = 0.0;  // Bernstein constant
    std::int64_t N = 1;        // class cardinality
    std::int64_t n = 1;
};

// Bousquet: P(Y - E Y >= sqrt(2 x nu) + x/3) <= e^(-n x), nu = sigma_Y^2 + 2 E Y.
inline ClassicalTail eval_bousquet_tail(double x, const BousquetParams& params) {
    require_domain(std::isfinite(x) && x > 0.0, "eval_bousquet_tail: x must be > 0");
    require_domain(std::isfinite(params.sigma_y2) && params.sigma_y2 >= 0.0,
                   "eval_bousquet_tail: sigma_y2 must be >= 0");
    require_domain(std::isfinite(params.mean_y) && params.mean_y >= 0.0,
                   "eval_bousquet_tail: mean_y must be >= 0");
    require_domain(params.n >= 1, "eval_bousquet_tail: n must be >= 1");
    const double nu = params.sigma_y2 + 2.0 * params.mean_y;
    const double raw = std::exp(-static_cast<double>(params.n) * x);
    return ClassicalTail{std::sqrt(2.0 * x * nu) + x / 3.0, std::min(raw, 1.0), raw};
}

// Bernstein-class: P(Y >= K x + sqrt(2x) + sqrt(2 log(2N)/n) + K log(2N)/n) <= e^(-n x).
inline ClassicalTail eval_bernstein_class_tail(double x, const BernsteinClassParams& params) {
    require_domain(std::isfinite(x) && x > 0.0, "eval_bernstein_class_tail: x must be > 0");
    require_domain(std::isfinite(params.bernstein_k) && params.bernstein_k >= 0.0,
                   "eval_bernstein_class_tail: bernstein constant must be >= 0");
    require_domain(params.n >= 1, "eval_bernstein_class_tail: n must be >= 1");
    require_domain(params.N >= 1, "eval_bernstein_class_tail: N must be >= 1");
    const double n = static_cast<double>(params.n);
    const double log2n = std::log(2.0 * static_cast<double>(params.N));
    const double threshold = params.bernstein_k * x + std::sqrt(2.0 * x) +
                             std::sqrt(2.0 * log2n / n) + params.bernstein_k * log2n / n;
    const double raw = std::exp(-n * x);
    return ClassicalTail{threshold, std::min(raw, 1.0), raw};
}

}  // namespace concbound
