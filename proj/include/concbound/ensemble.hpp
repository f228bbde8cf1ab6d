#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "concbound/errors.hpp"
#include "concbound/quadrature.hpp"
#include "concbound/rng.hpp"

namespace concbound {

enum class Family { Rademacher, BoundedUniform, SymmetricPareto, StudentT };

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::Rademacher: return "rademacher";
        case Family::BoundedUniform: return "bounded_uniform";
        case Family::SymmetricPareto: return "symmetric_pareto";
        case Family::StudentT: return "student_t";
    }
    return "unknown";
}

enum class Dependence { IidAcrossCells, SharedEnvelopeRows };

inline std::string_view to_string(Dependence d) {
    return d == Dependence::IidAcrossCells ? "iid" : "shared_envelope_rows";
}

// Generative description of the random vectors Z_i(j): an n x N array of
// draws from one family, either independent across cells or sharing one
// magnitude per row with independent signs per cell.
struct EnsembleConfig {
    std::int64_t n = 1;
    std::int64_t N = 1;
    Family family = Family::Rademacher;
    double lo = -1.0;    // BoundedUniform support
    double hi = 1.0;
    double alpha = 0.0;  // SymmetricPareto tail index
    double dof = 0.0;    // StudentT degrees of freedom
    double scale = 1.0;  // SymmetricPareto / StudentT scale
    Dependence dependence = Dependence::IidAcrossCells;
    std::uint64_t seed = 0;

    bool centered() const {
        if (family == Family::BoundedUniform) return lo == -hi;
        return true;  // the remaining families are symmetric
    }
};

inline void validate(const EnsembleConfig& config) {
    require_domain(config.n >= 1, "ensemble: n must be >= 1");
    require_domain(config.N >= 1, "ensemble: N must be >= 1");
    switch (config.family) {
        case Family::Rademacher:
            break;
        case Family::BoundedUniform:
            require_domain(std::isfinite(config.lo) && std::isfinite(config.hi) &&
                               config.lo <= config.hi,
                           "ensemble: bounded_uniform requires finite lo <= hi");
            break;
        case Family::SymmetricPareto:
            require_domain(std::isfinite(config.alpha) && config.alpha > 0.0,
                           "ensemble: symmetric_pareto requires alpha > 0");
            require_domain(std::isfinite(config.scale) && config.scale > 0.0,
                           "ensemble: symmetric_pareto requires scale > 0");
            break;
        case Family::StudentT:
            require_domain(std::isfinite(config.dof) && config.dof > 0.0,
                           "ensemble: student_t requires dof > 0");
            require_domain(std::isfinite(config.scale) && config.scale > 0.0,
                           "ensemble: student_t requires scale > 0");
            break;
    }
}

namespace detail {

inline double draw_cell(const EnsembleConfig& c, CounterRng& rng) {
    switch (c.family) {
        case Family::Rademacher:
            return rng.next_sign();
        case Family::BoundedUniform:
            return c.lo + (c.hi - c.lo) * rng.next_unit();
        case Family::SymmetricPareto: {
            const double mag = c.scale * std::pow(rng.next_unit_open0(), -1.0 / c.alpha);
            return mag * rng.next_sign();
        }
        case Family::StudentT: {
            // polar representation: R cos(theta) with
            // R = sqrt(dof (U^(-2/dof) - 1)) is Student-t with dof degrees
            const double u1 = rng.next_unit_open0();
            const double u2 = rng.next_unit();
            const double r = std::sqrt(c.dof * (std::pow(u1, -2.0 / c.dof) - 1.0));
            return c.scale * r * std::cos(6.283185307179586 * u2);
        }
    }
    return 0.0;
}

inline double draw_magnitude(const EnsembleConfig& c, CounterRng& rng) {
    if (c.family == Family::Rademacher) return 1.0;
    return std::fabs(draw_cell(c, rng));
}

}  // namespace detail

// One draw of the n x N array plus the per-row envelope values.
struct MatrixSample {
    std::int64_t n = 0;
    std::int64_t N = 0;
    std::vector<double> cells;     // row-major
    std::vector<double> envelope;  // per-row envelope

    double cell(std::int64_t i, std::int64_t j) const {
        return cells[static_cast<std::size_t>(i * N + j)];
    }
};

// Fully determined by (config.seed, replication): row i draws from the
// substream (seed, kCellStream, replication, i).
inline MatrixSample sample_matrix(const EnsembleConfig& config, std::int64_t replication) {
    validate(config);
    MatrixSample sample;
    sample.n = config.n;
    sample.N = config.N;
    sample.cells.resize(static_cast<std::size_t>(config.n * config.N));
    sample.envelope.resize(static_cast<std::size_t>(config.n));
    for (std::int64_t i = 0; i < config.n; ++i) {
        CounterRng rng(config.seed, CounterRng::kCellStream,
                       static_cast<std::uint64_t>(replication), static_cast<std::uint64_t>(i));
        double* row = sample.cells.data() + i * config.N;
        if (config.dependence == Dependence::SharedEnvelopeRows) {
            const double mag = detail::draw_magnitude(config, rng);
            for (std::int64_t j = 0; j < config.N; ++j) row[j] = mag * rng.next_sign();
            sample.envelope[static_cast<std::size_t>(i)] = mag;
        } else {
            double env = 0.0;
            for (std::int64_t j = 0; j < config.N; ++j) {
                row[j] = detail::draw_cell(config, rng);
                env = std::max(env, std::fabs(row[j]));
            }
            sample.envelope[static_cast<std::size_t>(i)] = env;
        }
    }
    return sample;
}

// E |X|^q of a single cell. Closed forms where the family has one; StudentT
// falls back to tanh-sinh quadrature with relative tolerance 1e-8.
inline double abs_moment(const EnsembleConfig& config, double q) {
    validate(config);
    require_domain(std::isfinite(q) && q > 0.0, "abs_moment: q must be > 0");
    switch (config.family) {
        case Family::Rademacher:
            return 1.0;
        case Family::BoundedUniform: {
            const double a = config.lo, b = config.hi;
            if (a == b) return std::pow(std::fabs(a), q);
            const auto primitive = [q](double x) {
                return std::copysign(std::pow(std::fabs(x), q + 1.0), x) / (q + 1.0);
            };
            return (primitive(b) - primitive(a)) / (b - a);
        }
        case Family::SymmetricPareto:
            require_domain(config.alpha > q,
                           "abs_moment: moment order must be below the Pareto tail index");
            return std::pow(config.scale, q) * config.alpha / (config.alpha - q);
        case Family::StudentT: {
            require_domain(config.dof > q,
                           "abs_moment: moment order must be below the Student-t dof");
            // substitute x = sqrt(dof) tan(theta):
            //   E|T|^q = dof^(q/2) * int sin^q cos^(dof-q-1) / int cos^(dof-1)
            const double nu = config.dof;
            const double pi_half = 1.5707963267948966;
            const double num = integrate_tanh_sinh(
                [&](double th) {
                    return std::pow(std::sin(th), q) * std::pow(std::cos(th), nu - q - 1.0);
                },
                0.0, pi_half);
            const double den = integrate_tanh_sinh(
                [&](double th) { return std::pow(std::cos(th), nu - 1.0); }, 0.0, pi_half);
            return std::pow(config.scale, q) * std::pow(nu, q / 2.0) * num / den;
        }
    }
    return 0.0;
}

struct EnsembleMoments {
    double M = 0.0;      // envelope moment bound at order p
    double sigma = 0.0;  // per-coordinate root mean square
};

// Analytic (M, sigma) for the configured family at envelope order p.
//
// For the bounded families M is the support bound, a valid envelope for any
// dependence mode. For the heavy-tailed families M is the single-cell moment
// root, which bounds the envelope moment exactly in shared_envelope_rows mode
// (there the envelope *is* one cell magnitude); in iid mode the minimal
// envelope is a row maximum and has larger moments.
inline EnsembleMoments analytic_ensemble_moments(const EnsembleConfig& config, double p) {
    validate(config);
    require_domain(std::isfinite(p) && p >= 1.0, "analytic_ensemble_moments: p must be >= 1");
    EnsembleMoments out;
    switch (config.family) {
        case Family::Rademacher:
            out.M = 1.0;
            out.sigma = 1.0;
            return out;
        case Family::BoundedUniform:
            out.M = std::max(std::fabs(config.lo), std::fabs(config.hi));
            out.sigma = std::sqrt(abs_moment(config, 2.0));
            return out;
        case Family::SymmetricPareto:
        case Family::StudentT:
            out.M = std::pow(abs_moment(config, p), 1.0 / p);
            out.sigma = std::sqrt(abs_moment(config, 2.0));
            return out;
    }
    return out;
}

}  // namespace concbound
