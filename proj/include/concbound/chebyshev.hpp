#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "concbound/bounds.hpp"
#include "concbound/errors.hpp"
#include "concbound/types.hpp"

namespace concbound {

struct ChebyshevSearch {
    double grid_step = 1e-3;   // coarse scan of l in [1, p]
    double refine_tol = 1e-12; // golden-section interval tolerance on l
};

struct ChebyshevResult {
    BoundResult bound;
    double l_star = 1.0;
};

namespace detail {

// log of (main bound at l) / x^l; minimized over l to get the tail bound.
// Working in log space avoids over/underflow of the l-th powers.
inline double chebyshev_log_value(Direction dir, double l, double eps, double x,
                                  const MomentEnvelopeSpec& spec, const ProcessScale& scale) {
    const double inner = main_moment_inner(dir, l, eps, spec, scale);
    if (inner == 0.0) return -std::numeric_limits<double>::infinity();
    return l * (std::log(inner) - std::log(x));
}

}  // namespace detail

// Tail probability bound min_{1<=l<=p} (main bound at l) / x^l, clipped to 1.
// Coarse grid scan followed by golden-section refinement around the grid
// minimizer; the unclipped minimum is kept in BoundResult::raw.
inline ChebyshevResult eval_tail_bound_chebyshev(Direction dir, double x, double eps,
                                                 const MomentEnvelopeSpec& spec,
                                                 const ProcessScale& scale,
                                                 const ChebyshevSearch& search = {}) {
    validate(spec);
    validate(scale);
    require_domain(std::isfinite(x) && x > 0.0, "eval_tail_bound_chebyshev: x must be > 0");
    detail::check_direction_eps(dir, eps, "eval_tail_bound_chebyshev");

    const auto log_value = [&](double l) {
        return detail::chebyshev_log_value(dir, l, eps, x, spec, scale);
    };

    // coarse grid over [1, p], endpoints included
    const double p = spec.p;
    double best_l = 1.0;
    double best = log_value(1.0);
    if (p > 1.0) {
        const auto steps = static_cast<long>(std::ceil((p - 1.0) / search.grid_step));
        for (long k = 1; k <= steps; ++k) {
            const double l = std::min(1.0 + static_cast<double>(k) * search.grid_step, p);
            const double v = log_value(l);
            if (v < best) {
                best = v;
                best_l = l;
            }
        }
    }

    // golden-section refinement within one grid cell of the coarse minimizer
    if (p > 1.0 && std::isfinite(best)) {
        double lo = std::max(1.0, best_l - search.grid_step);
        double hi = std::min(p, best_l + search.grid_step);
        const double inv_phi = 0.6180339887498949;
        double a = hi - inv_phi * (hi - lo);
        double b = lo + inv_phi * (hi - lo);
        double fa = log_value(a);
        double fb = log_value(b);
        while (hi - lo > search.refine_tol) {
            if (fa < fb) {
                hi = b;
                b = a;
                fb = fa;
                a = hi - inv_phi * (hi - lo);
                fa = log_value(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + inv_phi * (hi - lo);
                fb = log_value(b);
            }
        }
        const double mid = 0.5 * (lo + hi);
        const double fm = log_value(mid);
        if (fm < best) {
            best = fm;
            best_l = mid;
        }
    }

    const double raw = std::exp(best);
    ChebyshevResult out;
    out.l_star = best_l;
    out.bound.family =
        dir == Direction::Upper ? BoundFamily::ChebyshevUpper : BoundFamily::ChebyshevLower;
    out.bound.params.family = out.bound.family;
    out.bound.params.l = best_l;
    out.bound.params.eps = eps;
    out.bound.params.x = x;
    out.bound.value = std::min(raw, 1.0);
    out.bound.raw = raw;
    out.bound.ez_multiple = dir == Direction::Upper ? 1.0 + eps : 1.0 - eps;
    return out;
}

}  // namespace concbound
