#pragma once

#include <cmath>
#include <cstdio>

#include "chisini/config.hpp"

namespace chisini {

/// Bracket around the switch point of a monotone predicate:
/// pred is false at lo and true at hi, hi - lo <= tol_dom on return.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

/// Bisect a rising predicate (false -> true) on [lo, hi]. Callers must
/// guarantee pred(lo) == false and pred(hi) == true.
template <class Pred>
Bracket bisect_rising(Pred&& pred, double lo, double hi, const SolverConfig& cfg) {
    for (int it = 0; it < cfg.max_bisect && hi - lo > cfg.tol_dom; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // interval no longer splittable
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return Bracket{lo, hi};
}

/// The number with the fewest significant decimal digits inside [lo, hi].
/// Used to pin down jump locations: a bisection bracket of width tol_dom
/// around a breakpoint like 0.5 snaps to the breakpoint itself, so the
/// function can be evaluated at the exact switch point.
inline double shortest_decimal_in(double lo, double hi) {
    if (!(lo <= hi)) return lo;
    if (lo <= 0.0 && hi >= 0.0) return 0.0;
    for (int digits = 0; digits <= 17; ++digits) {
        // scale so that one unit in the last place spans the magnitude range
        double mag = std::max(std::abs(lo), std::abs(hi));
        int exp10 = int(std::floor(std::log10(mag)));
        double scale = std::pow(10.0, digits - exp10 - 1);
        double c = std::ceil(lo * scale) / scale;
        if (c >= lo && c <= hi) return c;
    }
    return 0.5 * (lo + hi);
}

} // namespace chisini
