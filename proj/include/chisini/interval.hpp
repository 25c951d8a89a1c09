#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "chisini/config.hpp"
#include "chisini/errors.hpp"

namespace chisini {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A nonempty real interval with independently open/closed endpoints.
/// Infinite endpoints are always open; a degenerate interval is closed.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    bool lo_closed = true;
    bool hi_closed = true;

    static Interval closed(double lo, double hi) { return make(lo, hi, true, true); }
    static Interval open(double lo, double hi) { return make(lo, hi, false, false); }
    static Interval whole_line() { return make(-kInf, kInf, false, false); }

    static Interval make(double lo, double hi, bool lo_closed, bool hi_closed) {
        if (std::isnan(lo) || std::isnan(hi) || lo > hi)
            throw InvalidInput("interval endpoints must satisfy lo <= hi");
        if (lo == hi && !(lo_closed && hi_closed))
            throw InvalidInput("a degenerate interval must be closed");
        if (std::isinf(lo)) lo_closed = false;
        if (std::isinf(hi)) hi_closed = false;
        return Interval{lo, hi, lo_closed, hi_closed};
    }

    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    bool compact() const { return bounded() && lo_closed && hi_closed; }
    double span() const { return hi - lo; }

    /// Membership honoring open endpoints.
    bool contains(double t) const {
        if (t < lo || t > hi) return false;
        if (t == lo && !lo_closed) return false;
        if (t == hi && !hi_closed) return false;
        return true;
    }

    /// Membership in the closure, with a coordinate slack.
    bool contains_closure(double t, double slack = 0.0) const {
        return t >= lo - slack && t <= hi + slack;
    }

    bool contains(const Interval& j) const {
        if (j.lo < lo || (j.lo == lo && j.lo_closed && !lo_closed)) return false;
        if (j.hi > hi || (j.hi == hi && j.hi_closed && !hi_closed)) return false;
        return true;
    }

    double clamp(double t) const { return std::min(std::max(t, lo), hi); }

    /// Compact working interval: open endpoints move inward by inset_rel of
    /// the (capped) span, infinite ones are capped first. All bisection and
    /// probing runs on this interval; boundary limits of open intervals are
    /// therefore approximated, not attained.
    Interval working(const SolverConfig& cfg) const {
        double a = std::isinf(lo) ? -cfg.unbounded_cap : lo;
        double b = std::isinf(hi) ? cfg.unbounded_cap : hi;
        double eps = cfg.inset_rel * (b - a);
        if (!lo_closed) a += eps;
        if (!hi_closed) b -= eps;
        if (!(a < b) && a != b) throw InvalidInput("interval too thin to inset");
        return Interval::closed(a, b);
    }
};

/// The common domain I^n of an n-ary function.
struct Box {
    Interval interval;
    int arity = 2;

    Box() = default;
    Box(Interval iv, int n) : interval(iv), arity(n) {
        if (n < 1) throw InvalidInput("box arity must be >= 1");
    }

    bool contains(std::span<const double> x, double slack = 0.0) const {
        if (int(x.size()) != arity) return false;
        for (double t : x)
            if (!interval.contains_closure(t, slack)) return false;
        return true;
    }

    Box working(const SolverConfig& cfg) const { return Box(interval.working(cfg), arity); }
};

using Point = std::vector<double>;

inline double min_coord(std::span<const double> x) {
    double m = x[0];
    for (double t : x) m = std::min(m, t);
    return m;
}

inline double max_coord(std::span<const double> x) {
    double m = x[0];
    for (double t : x) m = std::max(m, t);
    return m;
}

/// Chebyshev distance between two points.
inline double cheb_dist(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// Componentwise x <= y.
inline bool leq(std::span<const double> a, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

} // namespace chisini
