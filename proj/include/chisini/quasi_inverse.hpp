#pragma once

#include <algorithm>
#include <cmath>

#include "chisini/level_interval.hpp"

namespace chisini {

/// Which point of the preimage interval a quasi-inverse selects.
enum class QIPolicy { leftmost, rightmost, midpoint };

inline const char* to_string(QIPolicy p) {
    switch (p) {
        case QIPolicy::leftmost: return "leftmost";
        case QIPolicy::rightmost: return "rightmost";
        default: return "midpoint";
    }
}

/// A right-inverse g of a monotone one-variable function f: f(g(y)) = y for
/// y in ran(f), with g(y) inside the preimage interval of y. Nonincreasing
/// sources are handled by reflecting the axis. Construction samples f and
/// throws NotMonotone when the direction is not consistent.
class QuasiInverse {
public:
    QuasiInverse(MonotoneFn f, QIPolicy policy, SolverConfig cfg)
        : policy_(policy), cfg_(cfg) {
        Interval w = f.domain.working(cfg_);
        decreasing_ = classify_direction(f, w, cfg_);
        if (!decreasing_) {
            f_ = std::move(f);
        } else {
            // reflect the axis so the worker function is nondecreasing
            double a = w.lo, b = w.hi;
            auto inner = f.eval;
            f_ = MonotoneFn{w, [inner, a, b](double t) { return inner(a + b - t); }};
            reflect_lo_ = a;
            reflect_hi_ = b;
        }
        Interval w2 = f_.domain.working(cfg_);
        double va = f_(w2.lo), vb = f_(w2.hi);
        range_ = Interval::closed(std::min(va, vb), std::max(va, vb));
    }

    double operator()(double y) const {
        LevelInterval li = level_interval(f_, y, cfg_);
        QIPolicy p = policy_;
        if (decreasing_) {
            // reflected axis swaps which end is leftmost
            if (p == QIPolicy::leftmost)
                p = QIPolicy::rightmost;
            else if (p == QIPolicy::rightmost)
                p = QIPolicy::leftmost;
        }
        double t;
        switch (p) {
            case QIPolicy::leftmost: t = li.lo; break;
            case QIPolicy::rightmost: t = li.hi; break;
            default: t = li.mid(); break;
        }
        return decreasing_ ? reflect_lo_ + reflect_hi_ - t : t;
    }

    QIPolicy policy() const { return policy_; }
    const Interval& range() const { return range_; } ///< hull of ran(f), the domain of g
    bool source_decreasing() const { return decreasing_; }

private:
    static bool classify_direction(const MonotoneFn& f, const Interval& w,
                                   const SolverConfig& cfg) {
        const int k = 33;
        double prev = f(w.lo);
        int up = 0, down = 0;
        for (int i = 1; i < k; ++i) {
            double t = w.lo + w.span() * double(i) / double(k - 1);
            double v = f(t);
            if (v > prev + cfg.tol_val) ++up;
            if (v < prev - cfg.tol_val) ++down;
            prev = v;
        }
        if (up > 0 && down > 0)
            throw NotMonotone("function is neither nondecreasing nor nonincreasing");
        return down > 0;
    }

    MonotoneFn f_;
    QIPolicy policy_;
    SolverConfig cfg_;
    Interval range_;
    bool decreasing_ = false;
    double reflect_lo_ = 0.0, reflect_hi_ = 0.0;
};

/// Construct a quasi-inverse with the given selection policy.
inline QuasiInverse quasi_inverse(const MonotoneFn& f, QIPolicy policy, const SolverConfig& cfg) {
    return QuasiInverse(f, policy, cfg);
}

} // namespace chisini
