#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "chisini/level_interval.hpp"

namespace chisini {

/// Per-point level-set geometry of a nondecreasing function: the preimage
/// interval of the value on the diagonal, and the Chebyshev distances to
/// the strictly-lower and strictly-upper regions (infinite when the region
/// is empty; infinities propagate via the limiting-value formulas, never
/// via floating-point overflow).
struct LevelData {
    Point x;
    double value = 0.0;
    double level_lo = 0.0, level_hi = 0.0;
    bool lo_attained = false, hi_attained = false;
    double dist_below = 0.0, dist_above = 0.0;
    bool in_omega = false; ///< dist_below + dist_above > tol_dom
};

namespace detail {

/// Distance along the clamped diagonal ray to the region where the strict
/// predicate on F fires; infinity when it never fires within the box span.
/// The reported value is the lower end of the final bisection bracket, so
/// contact distances come out as exactly zero.
template <bool Downward>
double probe_distance(const FunctionHandle& f, std::span<const double> x, double y,
                      const Box& w, const SolverConfig& cfg) {
    const int n = f.arity();
    const double lo = w.interval.lo, hi = w.interval.hi;
    const double span = hi - lo;
    std::array<double, 16> buf;
    Point big;
    double* p = nullptr;
    if (n <= 16) {
        p = buf.data();
    } else {
        big.resize(std::size_t(n));
        p = big.data();
    }
    auto fires = [&](double h) {
        for (int i = 0; i < n; ++i) {
            double t = Downward ? x[std::size_t(i)] - h : x[std::size_t(i)] + h;
            p[std::size_t(i)] = std::min(std::max(t, lo), hi);
        }
        double v = f(std::span<const double>(p, std::size_t(n)));
        return Downward ? v < y - cfg.tol_val : v > y + cfg.tol_val;
    };
    if (!fires(span)) return kInf;
    if (fires(0.0))
        throw NotMonotone("probe fired at zero offset; function value is not reproducible");
    Bracket b = bisect_rising(fires, 0.0, span, cfg);
    return b.lo;
}

} // namespace detail

/// Compute the full level-set bundle at a point. The point must lie inside
/// (the closure of) the box; open/unbounded boxes are probed on the inset
/// compact working box.
inline LevelData level_data(const FunctionHandle& f, std::span<const double> x,
                            const SolverConfig& cfg) {
    if (!f.box().contains(x, cfg.tol_dom))
        throw PointOutOfBox("point is outside the function box");
    Box w = f.box().working(cfg);

    LevelData d;
    d.x.assign(x.begin(), x.end());
    for (double& t : d.x) t = w.interval.clamp(t);
    d.value = f.at(d.x);

    MonotoneFn diag = diagonal(f);
    LevelInterval li = level_interval(diag, d.value, cfg);
    d.level_lo = li.lo;
    d.level_hi = li.hi;
    d.lo_attained = li.lo_attained;
    d.hi_attained = li.hi_attained;

    d.dist_below = detail::probe_distance<true>(f, d.x, d.value, w, cfg);
    d.dist_above = detail::probe_distance<false>(f, d.x, d.value, w, cfg);
    d.in_omega = std::isinf(d.dist_below) || std::isinf(d.dist_above) ||
                 d.dist_below + d.dist_above > cfg.tol_dom;
    return d;
}

/// Exhaustive-grid reference for the probe distances: minimum Chebyshev
/// distance from x to grid points whose value is strictly below (above)
/// the level, using the same tol_val-strict predicate.
inline std::pair<double, double> brute_force_distances(const FunctionHandle& f,
                                                       std::span<const double> x,
                                                       const SolverConfig& cfg) {
    if (!f.box().contains(x, cfg.tol_dom))
        throw PointOutOfBox("point is outside the function box");
    const int n = f.arity();
    const int g = cfg.oracle_grid;
    double cells = std::pow(double(g), double(n));
    if (cells > 1e7) throw GridTooLarge("oracle grid exceeds 10^7 points");
    Box w = f.box().working(cfg);
    const double lo = w.interval.lo, span = w.interval.span();

    Point p(std::size_t(n), lo);
    std::vector<int> idx(std::size_t(n), 0);
    const double y = f(x);
    double below = kInf, above = kInf;
    const std::size_t total = std::size_t(cells);
    for (std::size_t k = 0; k < total; ++k) {
        for (int i = 0; i < n; ++i)
            p[std::size_t(i)] = lo + span * double(idx[std::size_t(i)]) / double(g - 1);
        double v = f.at(p);
        if (v < y - cfg.tol_val || v > y + cfg.tol_val) {
            double dist = cheb_dist(x, p);
            if (v < y - cfg.tol_val)
                below = std::min(below, dist);
            else
                above = std::min(above, dist);
        }
        for (int i = n - 1; i >= 0; --i) { // last axis fastest
            if (++idx[std::size_t(i)] < g) break;
            idx[std::size_t(i)] = 0;
        }
    }
    return {below, above};
}

/// Distances against an axis-aligned corner block pinned at the level
/// endpoints: distance to [inf I, lo*]^n is max(x) - lo*, distance to
/// [hi*, sup I]^n is hi* - min(x). Used on level sets whose endpoint is
/// not attained by the diagonal.
inline std::pair<double, double> corrected_distances(std::span<const double> x, double level_lo,
                                                     double level_hi) {
    double below = std::max(0.0, max_coord(x) - level_lo);
    double above = std::max(0.0, level_hi - min_coord(x));
    return {below, above};
}

/// Precomputed value table for repeated oracle queries against one
/// function (the per-point oracle would otherwise re-evaluate the grid).
class OracleTable {
public:
    OracleTable(const FunctionHandle& f, const SolverConfig& cfg)
        : n_(f.arity()), g_(cfg.oracle_grid), tol_(cfg.tol_val) {
        double cells = std::pow(double(g_), double(n_));
        if (cells > 1e7) throw GridTooLarge("oracle grid exceeds 10^7 points");
        Box w = f.box().working(cfg);
        lo_ = w.interval.lo;
        span_ = w.interval.span();
        const std::size_t total = std::size_t(cells);
        values_.resize(total);
        coords_.resize(std::size_t(n_) * total);
        Point p(std::size_t(n_), 0.0);
        std::vector<int> idx(std::size_t(n_), 0);
        for (std::size_t k = 0; k < total; ++k) {
            for (int i = 0; i < n_; ++i) {
                p[std::size_t(i)] = lo_ + span_ * double(idx[std::size_t(i)]) / double(g_ - 1);
                coords_[k * std::size_t(n_) + std::size_t(i)] = p[std::size_t(i)];
            }
            values_[k] = f.at(p);
            for (int i = n_ - 1; i >= 0; --i) {
                if (++idx[std::size_t(i)] < g_) break;
                idx[std::size_t(i)] = 0;
            }
        }
    }

    std::pair<double, double> distances(std::span<const double> x, double y) const {
        double below = kInf, above = kInf;
        const std::size_t total = values_.size();
        for (std::size_t k = 0; k < total; ++k) {
            double v = values_[k];
            if (v >= y - tol_ && v <= y + tol_) continue;
            double dist = 0.0;
            for (int i = 0; i < n_; ++i)
                dist = std::max(dist,
                                std::abs(x[std::size_t(i)] - coords_[k * std::size_t(n_) + std::size_t(i)]));
            if (v < y - tol_)
                below = std::min(below, dist);
            else
                above = std::min(above, dist);
        }
        return {below, above};
    }

    double cell_width() const { return span_ / double(g_ - 1); }

private:
    int n_, g_;
    double tol_, lo_ = 0.0, span_ = 1.0;
    std::vector<double> values_;
    std::vector<double> coords_;
};

} // namespace chisini
