#pragma once

#include <array>
#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chisini/interval.hpp"
#include "chisini/rng.hpp"

namespace chisini {

/// A permutation of argument positions {0..n-1}.
struct Permutation {
    std::vector<int> map;

    explicit Permutation(std::vector<int> m) : map(std::move(m)) {
        std::vector<char> seen(map.size(), 0);
        for (int i : map) {
            if (i < 0 || i >= int(map.size()) || seen[i])
                throw InvalidInput("permutation is not a bijection");
            seen[i] = 1;
        }
    }

    static Permutation identity(int n) {
        std::vector<int> m(n);
        std::iota(m.begin(), m.end(), 0);
        return Permutation(std::move(m));
    }

    static Permutation transposition(int n, int i, int j) {
        auto p = identity(n);
        std::swap(p.map[i], p.map[j]);
        return p;
    }

    int size() const { return int(map.size()); }
};

/// A one-variable function on an interval (e.g. a diagonal section or a
/// transformation generator).
struct MonotoneFn {
    Interval domain;
    std::function<double(double)> eval;

    double operator()(double t) const { return eval(t); }
};

using EvalFn = std::function<double(std::span<const double>)>;

struct FunctionMeta {
    std::string name;
    std::vector<Permutation> symmetries; ///< declared argument symmetries
    bool claims_continuous = false;
    bool claims_nondecreasing = true;
    bool monotonicity_verified = false; ///< false for opaque callables
    std::function<double(double)> analytic_diagonal; ///< optional closed form of t -> F(t,...,t)
    std::vector<Point> critical_points; ///< known discontinuity/violation witnesses
};

/// An evaluable n-ary function together with its box and metadata.
/// Immutable after construction; evaluation is pure and safe to call from
/// concurrent contexts.
class FunctionHandle {
public:
    FunctionHandle() = default;

    FunctionHandle(Box box, EvalFn eval, FunctionMeta meta = {})
        : s_(std::make_shared<const State>(State{box, std::move(eval), std::move(meta), nullptr})) {}

    double operator()(std::span<const double> x) const { return s_->eval(x); }
    double operator()(std::initializer_list<double> x) const {
        return s_->eval(std::span<const double>(x.begin(), x.size()));
    }
    double at(const Point& x) const { return s_->eval(x); }

    const Box& box() const { return s_->box; }
    int arity() const { return s_->box.arity; }
    const FunctionMeta& meta() const { return s_->meta; }
    explicit operator bool() const { return bool(s_); }

    friend FunctionHandle dualize(const FunctionHandle& f);
    friend FunctionHandle rebox(const FunctionHandle& f, Interval iv);

private:
    struct State {
        Box box;
        EvalFn eval;
        FunctionMeta meta;
        std::shared_ptr<const State> dual_of;
    };

    explicit FunctionHandle(std::shared_ptr<const State> s) : s_(std::move(s)) {}

    std::shared_ptr<const State> s_;
};

namespace detail {

/// Evaluate F at t*(1,...,1) without heap allocation for small arities.
inline double eval_diag(const FunctionHandle& f, double t) {
    int n = f.arity();
    if (n <= 16) {
        std::array<double, 16> buf;
        buf.fill(t);
        return f(std::span<const double>(buf.data(), std::size_t(n)));
    }
    Point x(std::size_t(n), t);
    return f.at(x);
}

} // namespace detail

/// Diagonal section t -> F(t,...,t). Uses the declared closed form when one
/// is present so the two agree bit-for-bit.
inline MonotoneFn diagonal(const FunctionHandle& f) {
    if (f.meta().analytic_diagonal)
        return MonotoneFn{f.box().interval, f.meta().analytic_diagonal};
    return MonotoneFn{f.box().interval, [f](double t) { return detail::eval_diag(f, t); }};
}

/// Reflection-conjugated function on a compact box: x is reflected through
/// the interval midpoint, the value reflected back. Applying it twice
/// returns the original handle, so the round trip is pointwise exact.
inline FunctionHandle dualize(const FunctionHandle& f) {
    const Interval iv = f.box().interval;
    if (!iv.compact())
        throw UnboundedDomain("dualize requires a compact interval");
    if (f.s_->dual_of) return FunctionHandle(f.s_->dual_of);

    const double a = iv.lo, b = iv.hi;
    auto psi = [a, b](double t) { return a + b - t; };

    FunctionMeta meta = f.meta();
    meta.name = f.meta().name.empty() ? "dual" : f.meta().name + "-dual";
    if (f.meta().analytic_diagonal) {
        auto d = f.meta().analytic_diagonal;
        meta.analytic_diagonal = [d, psi](double t) { return psi(d(psi(t))); };
    }
    meta.critical_points.clear();
    for (const Point& p : f.meta().critical_points) {
        Point q(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) q[i] = psi(p[i]);
        meta.critical_points.push_back(std::move(q));
    }

    EvalFn eval = [f, psi](std::span<const double> x) {
        int n = f.arity();
        std::array<double, 16> buf;
        Point big;
        double* y = nullptr;
        if (n <= 16) {
            y = buf.data();
        } else {
            big.resize(std::size_t(n));
            y = big.data();
        }
        for (int i = 0; i < n; ++i) y[std::size_t(i)] = psi(x[std::size_t(i)]);
        return psi(f(std::span<const double>(y, std::size_t(n))));
    };

    auto st = std::make_shared<FunctionHandle::State>();
    st->box = f.box();
    st->eval = std::move(eval);
    st->meta = std::move(meta);
    st->dual_of = f.s_;
    return FunctionHandle(std::shared_ptr<const FunctionHandle::State>(std::move(st)));
}

/// x -> F(x_{sigma(1)}, ..., x_{sigma(n)}).
inline FunctionHandle permute_args(const FunctionHandle& f, const Permutation& sigma) {
    if (sigma.size() != f.arity())
        throw InvalidInput("permutation size does not match function arity");
    FunctionMeta meta = f.meta();
    meta.name += "-permuted";
    meta.critical_points.clear();
    std::vector<int> m = sigma.map;
    EvalFn eval = [f, m](std::span<const double> x) {
        int n = f.arity();
        std::array<double, 16> buf;
        Point big;
        double* y = nullptr;
        if (n <= 16) {
            y = buf.data();
        } else {
            big.resize(std::size_t(n));
            y = big.data();
        }
        for (int i = 0; i < n; ++i) y[std::size_t(i)] = x[std::size_t(m[std::size_t(i)])];
        return f(std::span<const double>(y, std::size_t(n)));
    };
    return FunctionHandle(f.box(), std::move(eval), std::move(meta));
}

/// Same evaluation on the sub-box J^n, J a subinterval of the domain.
inline FunctionHandle restrict_to(const FunctionHandle& f, Interval sub) {
    if (!f.box().interval.contains(sub))
        throw InvalidInput("restriction interval is not contained in the domain");
    FunctionMeta meta = f.meta();
    meta.critical_points.erase(
        std::remove_if(meta.critical_points.begin(), meta.critical_points.end(),
                       [&](const Point& p) { return !Box(sub, f.arity()).contains(p); }),
        meta.critical_points.end());
    FunctionHandle g = f;
    return FunctionHandle(Box(sub, f.arity()), [g](std::span<const double> x) { return g(x); },
                          std::move(meta));
}

/// Domain override without the containment check (the evaluator must be
/// total on the new box). Used for CLI --box and unbounded-domain tests.
inline FunctionHandle rebox(const FunctionHandle& f, Interval iv) {
    FunctionMeta meta = f.meta();
    meta.critical_points.erase(
        std::remove_if(meta.critical_points.begin(), meta.critical_points.end(),
                       [&](const Point& p) { return !Box(iv, f.arity()).contains(p); }),
        meta.critical_points.end());
    FunctionHandle g = f;
    return FunctionHandle(Box(iv, f.arity()), [g](std::span<const double> x) { return g(x); },
                          std::move(meta));
}

/// g composed after F, for strictly increasing value transforms.
inline FunctionHandle compose_value(std::function<double(double)> g, const FunctionHandle& f,
                                    std::string name = {}) {
    FunctionMeta meta = f.meta();
    meta.name = name.empty() ? meta.name + "-transformed" : std::move(name);
    if (f.meta().analytic_diagonal) {
        auto d = f.meta().analytic_diagonal;
        meta.analytic_diagonal = [g, d](double t) { return g(d(t)); };
    }
    FunctionHandle inner = f;
    return FunctionHandle(f.box(), [g, inner](std::span<const double> x) { return g(inner(x)); },
                          std::move(meta));
}

/// Sampled check of the nondecreasing claim: seeded random pairs x <= x'
/// must satisfy F(x) <= F(x') + tol_val. Returns a violating pair if found.
inline std::optional<std::pair<Point, Point>>
find_monotonicity_violation(const FunctionHandle& f, const SolverConfig& cfg, int pairs = 256) {
    Box w = f.box().working(cfg);
    Rng rng(cfg.rng_seed ^ 0xa5a5a5a5ull);
    int n = f.arity();
    Point x(std::size_t(n), 0.0), y(std::size_t(n), 0.0);
    for (int k = 0; k < pairs; ++k) {
        for (int i = 0; i < n; ++i) {
            double a = rng.next_in(w.interval.lo, w.interval.hi);
            double b = rng.next_in(w.interval.lo, w.interval.hi);
            x[std::size_t(i)] = std::min(a, b);
            y[std::size_t(i)] = std::max(a, b);
        }
        if (f.at(x) > f.at(y) + cfg.tol_val) return std::make_pair(x, y);
    }
    return std::nullopt;
}

} // namespace chisini
