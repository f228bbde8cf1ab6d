#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include "concbound/errors.hpp"

namespace concbound {

// Envelope moment assumption: E E_i^p <= M^p for every observation.
struct MomentEnvelopeSpec {
    double p = 1.0;  // moment order, >= 1
    double M = 0.0;  // envelope moment bound, >= 0, in units of the process
};

inline void validate(const MomentEnvelopeSpec& spec) {
    require_domain(std::isfinite(spec.p) && spec.p >= 1.0, "envelope: p must be finite and >= 1");
    require_domain(std::isfinite(spec.M) && spec.M >= 0.0, "envelope: M must be finite and >= 0");
}

// Dimensions and second-moment scale of the process.
struct ProcessScale {
    std::int64_t n = 1;  // sample size
    std::int64_t N = 1;  // class cardinality
    double sigma = 0.0;  // sqrt(max_j (1/n) sum_i E Z_i(j)^2)
    std::optional<double> sigma_trunc;  // same quantity for the truncated vectors

    double sigma_lower() const { return sigma_trunc.value_or(sigma); }
};

inline void validate(const ProcessScale& scale) {
    require_domain(scale.n >= 1, "scale: n must be >= 1");
    require_domain(scale.N >= 1, "scale: N must be >= 1");
    require_domain(std::isfinite(scale.sigma) && scale.sigma >= 0.0,
                   "scale: sigma must be finite and >= 0");
    if (scale.sigma_trunc) {
        require_domain(std::isfinite(*scale.sigma_trunc) && *scale.sigma_trunc >= 0.0 &&
                           *scale.sigma_trunc <= scale.sigma,
                       "scale: sigma_trunc must satisfy 0 <= sigma_trunc <= sigma");
    }
}

enum class Direction { Upper, Lower };

inline std::string_view to_string(Direction d) {
    return d == Direction::Upper ? "upper" : "lower";
}

namespace detail {

inline void check_direction_eps(Direction dir, double eps, const char* who) {
    if (dir == Direction::Upper) {
        require_domain(std::isfinite(eps) && eps > 0.0,
                       std::string(who) + ": upper direction requires eps > 0");
    } else {
        require_domain(std::isfinite(eps) && eps > 0.0 && eps <= 1.0,
                       std::string(who) + ": lower direction requires eps in (0, 1]");
    }
}

}  // namespace detail

enum class BoundFamily {
    MainUpper,
    MainLower,
    ChebyshevUpper,
    ChebyshevLower,
    TruncatedUpper,
    TruncatedLower,
    Symmetrization,
    FiniteClass,
    FiniteClassGeneral,
    BoundedPart,
    TruncationBias,
    ExpectedSup,
    Bousquet,
    BernsteinClass,
};

inline std::string_view to_string(BoundFamily f) {
    switch (f) {
        case BoundFamily::MainUpper: return "main_upper";
        case BoundFamily::MainLower: return "main_lower";
        case BoundFamily::ChebyshevUpper: return "chebyshev_upper";
        case BoundFamily::ChebyshevLower: return "chebyshev_lower";
        case BoundFamily::TruncatedUpper: return "truncated_upper";
        case BoundFamily::TruncatedLower: return "truncated_lower";
        case BoundFamily::Symmetrization: return "symmetrization";
        case BoundFamily::FiniteClass: return "finite_class";
        case BoundFamily::FiniteClassGeneral: return "finite_class_general";
        case BoundFamily::BoundedPart: return "bounded_part";
        case BoundFamily::TruncationBias: return "truncation_bias";
        case BoundFamily::ExpectedSup: return "expected_sup";
        case BoundFamily::Bousquet: return "bousquet";
        case BoundFamily::BernsteinClass: return "bernstein_class";
    }
    return "unknown";
}

inline std::optional<BoundFamily> bound_family_from_string(std::string_view s) {
    using F = BoundFamily;
    if (s == "main_upper") return F::MainUpper;
    if (s == "main_lower") return F::MainLower;
    if (s == "chebyshev_upper") return F::ChebyshevUpper;
    if (s == "chebyshev_lower") return F::ChebyshevLower;
    if (s == "truncated_upper") return F::TruncatedUpper;
    if (s == "truncated_lower") return F::TruncatedLower;
    if (s == "symmetrization") return F::Symmetrization;
    if (s == "finite_class") return F::FiniteClass;
    if (s == "finite_class_general") return F::FiniteClassGeneral;
    if (s == "bounded_part") return F::BoundedPart;
    if (s == "truncation_bias") return F::TruncationBias;
    if (s == "expected_sup") return F::ExpectedSup;
    if (s == "bousquet") return F::Bousquet;
    if (s == "bernstein_class") return F::BernsteinClass;
    return std::nullopt;
}

// Free parameters of one bound evaluation. Which fields matter depends on the
// family; per-family validity is checked at evaluation time.
struct BoundRequest {
    BoundFamily family = BoundFamily::MainUpper;
    std::optional<double> l;
    std::optional<double> eps;
    std::optional<double> K;
    std::optional<double> A;
    std::optional<double> x;
    // classical-tail parameters
    std::optional<double> sigma_y2;     // Bousquet: Var of the single functions
    std::optional<double> mean_y;       // Bousquet: E Y
    std::optional<double> bernstein_k;  // Bernstein-class constant
};

struct BoundResult {
    BoundFamily family = BoundFamily::MainUpper;
    double value = 0.0;
    BoundRequest params;  // echo of the request, derived fields filled in
    // Deviation threshold when the bound has a numeric one (e.g. 2M log(2N)/sqrt(n)).
    std::optional<double> threshold;
    // Thresholds of the form c * E[Z] stay symbolic; this records c.
    std::optional<double> ez_multiple;
    // Pre-clipping value for probability bounds (value is clipped to <= 1).
    std::optional<double> raw;
    bool centered_assumed = false;
};

}  // namespace concbound
