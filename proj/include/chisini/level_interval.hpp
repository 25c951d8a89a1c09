#pragma once

#include <cmath>

#include "chisini/bisect.hpp"
#include "chisini/function.hpp"

namespace chisini {

/// The preimage interval of a target value under a nondecreasing
/// one-variable function: lo = inf{t : f(t) = y}, hi = sup{t : f(t) = y},
/// each located by bisection within tol_dom. An endpoint is attained when
/// the function value at the located endpoint matches the target.
struct LevelInterval {
    double y = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool lo_attained = false;
    bool hi_attained = false;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

namespace detail {

inline void check_step_monotone(double f_left, double f_mid, double f_right, double slack) {
    if (f_mid < f_left - slack || f_mid > f_right + slack)
        throw NotMonotone("monotonicity violation detected during bisection");
}

} // namespace detail

/// Locate the preimage interval of y under a nondecreasing f on a compact
/// interval. Throws NotInRange when y is outside [f(lo), f(hi)] by more
/// than tol_val, NotMonotone when a violation is bracketed en route.
///
/// Endpoint attainment across a jump is decided by evaluating f at the
/// shortest-decimal point inside the final bracket; bisection midpoints hit
/// representable breakpoints exactly, so for piecewise functions with such
/// breakpoints the verdict reflects the value at the true endpoint.
inline LevelInterval level_interval(const MonotoneFn& f, double y, const SolverConfig& cfg) {
    Interval w = f.domain.working(cfg);
    const double slack = 10.0 * cfg.tol_val;
    const double f_lo = f(w.lo);
    const double f_hi = f(w.hi);
    if (f_lo > f_hi + slack)
        throw NotMonotone("f is decreasing across its interval");
    if (y < f_lo - cfg.tol_val || y > f_hi + cfg.tol_val)
        throw NotInRange("target value outside the function range");

    LevelInterval li;
    li.y = y;

    // infimum side: first t with f(t) >= y - tol_val
    if (f_lo >= y - cfg.tol_val) {
        li.lo = w.lo;
        li.lo_attained = std::abs(f_lo - y) <= cfg.attain_tol();
    } else {
        double vl = f_lo, vr = f_hi;
        auto pred = [&](double t) {
            double v = f(t);
            detail::check_step_monotone(vl, v, vr, slack);
            bool hit = v >= y - cfg.tol_val;
            (hit ? vr : vl) = v;
            return hit;
        };
        Bracket b = bisect_rising(pred, w.lo, w.hi, cfg);
        double gap = vr - vl;
        if (gap > cfg.jump_tol()) {
            double t = shortest_decimal_in(b.lo, b.hi);
            double v = f(t);
            li.lo = t;
            li.lo_attained = std::abs(v - y) <= cfg.attain_tol();
        } else {
            li.lo = b.hi;
            li.lo_attained = std::abs(vr - y) <= cfg.attain_tol();
        }
    }

    // supremum side: last t with f(t) <= y + tol_val
    if (f_hi <= y + cfg.tol_val) {
        li.hi = w.hi;
        li.hi_attained = std::abs(f_hi - y) <= cfg.attain_tol();
    } else {
        double vl = f_lo, vr = f_hi;
        auto pred = [&](double t) {
            double v = f(t);
            detail::check_step_monotone(vl, v, vr, slack);
            bool past = v > y + cfg.tol_val;
            (past ? vr : vl) = v;
            return past;
        };
        Bracket b = bisect_rising(pred, w.lo, w.hi, cfg);
        double gap = vr - vl;
        if (gap > cfg.jump_tol()) {
            double t = shortest_decimal_in(b.lo, b.hi);
            double v = f(t);
            li.hi = t;
            li.hi_attained = std::abs(v - y) <= cfg.attain_tol();
        } else {
            li.hi = b.lo;
            li.hi_attained = std::abs(vl - y) <= cfg.attain_tol();
        }
    }

    if (li.lo > li.hi) { // can only happen within bisection noise
        double m = 0.5 * (li.lo + li.hi);
        li.lo = li.hi = m;
    }
    return li;
}

} // namespace chisini
