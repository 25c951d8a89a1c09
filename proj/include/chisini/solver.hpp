#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chisini/catalog.hpp"
#include "chisini/level_data.hpp"
#include "chisini/quasi_inverse.hpp"

namespace chisini {

struct RangeDescription {
    double lo = 0.0, hi = 0.0;
    bool lo_attained = true, hi_attained = true;
};

/// Verdicts on whether the equalizer equation for F is solvable: the range
/// of the diagonal must cover every value F takes. Uniqueness (diagonal
/// one-to-one) is sampled evidence, not a proof.
struct SolvabilityReport {
    bool range_equal = false;
    RangeDescription ran_diag, ran_f;
    std::optional<Point> witness;      ///< a point whose value the diagonal misses
    double witness_value = 0.0;
    std::optional<bool> unique;        ///< diagonal one-to-one (sampled evidence)
    int samples = 0;
    bool monotonicity_ok = true;       ///< sampled nondecreasing check on F
};

namespace detail {

inline std::string level_key(double y) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", y); // 12 significant digits
    return std::string(buf);
}

/// Is v attained by the one-variable function f (within tolerance)?
inline bool value_attained(const MonotoneFn& f, double v, const SolverConfig& cfg) {
    LevelInterval li;
    try {
        li = level_interval(f, v, cfg);
    } catch (const NotInRange&) {
        return false;
    }
    if (li.lo_attained || li.hi_attained) return true;
    Interval w = f.domain.working(cfg);
    return std::abs(f(w.clamp(li.mid())) - v) <= cfg.attain_tol();
}

inline void append_sample_points(const FunctionHandle& f, const SolverConfig& cfg,
                                 std::vector<Point>& out, int grid_per_axis, int random_count) {
    Box w = f.box().working(cfg);
    const int n = f.arity();
    const double lo = w.interval.lo, span = w.interval.span();

    // axis-aligned grid (size capped by arity)
    int g = grid_per_axis;
    while (n >= 2 && std::pow(double(g), double(n)) > 4096.0 && g > 3) g = (g + 1) / 2;
    std::vector<int> idx(std::size_t(n), 0);
    std::size_t total = std::size_t(std::pow(double(g), double(n)));
    for (std::size_t k = 0; k < total; ++k) {
        Point p(std::size_t(n), 0.0);
        for (int i = 0; i < n; ++i)
            p[std::size_t(i)] = lo + span * double(idx[std::size_t(i)]) / double(g - 1);
        out.push_back(std::move(p));
        for (int i = n - 1; i >= 0; --i) {
            if (++idx[std::size_t(i)] < g) break;
            idx[std::size_t(i)] = 0;
        }
    }

    Rng rng(cfg.rng_seed ^ 0x517cc1b727220a95ull);
    for (int k = 0; k < random_count; ++k) {
        Point p(std::size_t(n), 0.0);
        for (int i = 0; i < n; ++i) p[std::size_t(i)] = rng.next_in(lo, lo + span);
        out.push_back(std::move(p));
    }

    for (const Point& p : f.meta().critical_points) {
        if (int(p.size()) != n) continue;
        Point q(p);
        for (double& t : q) t = w.interval.clamp(t);
        out.push_back(q);
        // straddle the critical point along each axis
        for (int i = 0; i < n; ++i) {
            for (double off : {-1e-3 * span, 1e-3 * span}) {
                Point r(q);
                r[std::size_t(i)] = w.interval.clamp(r[std::size_t(i)] + off);
                out.push_back(std::move(r));
            }
        }
    }
}

} // namespace detail

/// Compare the range of F with the range of its diagonal section: endpoint
/// values always agree for nondecreasing F, so the test hunts for sampled
/// F-values that fall into jump gaps of the diagonal. All verdicts are
/// carried by the report; only a bad configuration throws.
inline SolvabilityReport check_solvable(const FunctionHandle& f, const SolverConfig& cfg) {
    cfg.validate();
    SolvabilityReport rep;
    Box w = f.box().working(cfg);
    MonotoneFn diag = diagonal(f);

    rep.monotonicity_ok = !find_monotonicity_violation(f, cfg).has_value();

    double d_lo = diag(w.interval.lo), d_hi = diag(w.interval.hi);
    rep.ran_diag = {d_lo, d_hi, true, true};

    std::vector<Point> samples;
    detail::append_sample_points(f, cfg, samples, 33, 256);
    rep.samples = int(samples.size());

    double f_min = kInf, f_max = -kInf;
    std::map<std::string, bool> tested;
    rep.range_equal = true;
    for (const Point& p : samples) {
        double v = f.at(p);
        f_min = std::min(f_min, v);
        f_max = std::max(f_max, v);
        auto key = detail::level_key(v);
        auto it = tested.find(key);
        bool ok;
        if (it != tested.end()) {
            ok = it->second;
        } else {
            ok = detail::value_attained(diag, v, cfg);
            tested.emplace(key, ok);
        }
        if (!ok && rep.range_equal) {
            rep.range_equal = false;
            rep.witness = p;
            rep.witness_value = v;
        }
    }
    rep.ran_f = {f_min, f_max, true, true};

    // one-to-one verdict: strict increase across a fine scan
    {
        const int k = 1025;
        bool strict = true;
        double prev = diag(w.interval.lo);
        for (int i = 1; i < k && strict; ++i) {
            double t = w.interval.lo + w.interval.span() * double(i) / double(k - 1);
            double v = diag(t);
            if (v <= prev) strict = false;
            prev = v;
        }
        rep.unique = strict;
    }
    return rep;
}

/// A level set whose diagonal endpoint is missed needs its distance on the
/// offending side replaced by the corner-block distance.
struct LevelCorrection {
    bool fix_lower = false;
    bool fix_upper = false;
    double level_lo = 0.0;
    double level_hi = 0.0;
};

/// Decide whether the level set of value y needs the corrected evaluation:
/// the endpoint must be missed by the diagonal AND some point of the level
/// set with positive thickness must touch the corresponding strict region.
/// The existence scan probes levelset_scan^n grid points plus declared
/// critical points; it is sound but not complete.
inline std::optional<LevelCorrection> detect_correction(const FunctionHandle& f, double y,
                                                        const SolverConfig& cfg,
                                                        const LevelInterval* known = nullptr) {
    MonotoneFn diag = diagonal(f);
    LevelInterval li = known ? *known : level_interval(diag, y, cfg);
    bool need_lower = !li.lo_attained;
    bool need_upper = !li.hi_attained;
    if (!need_lower && !need_upper) return std::nullopt;

    Box w = f.box().working(cfg);
    const int n = f.arity();
    const double lo = w.interval.lo, span = w.interval.span();
    const int g = cfg.levelset_scan;

    bool fix_lower = false, fix_upper = false;
    auto consider = [&](const Point& p) {
        if (std::abs(f.at(p) - y) > cfg.tol_val) return;
        double below = detail::probe_distance<true>(f, p, y, w, cfg);
        double above = detail::probe_distance<false>(f, p, y, w, cfg);
        bool omega = std::isinf(below) || std::isinf(above) || below + above > cfg.tol_dom;
        if (!omega) return;
        if (need_lower && !fix_lower && below <= cfg.tol_dom) fix_lower = true;
        if (need_upper && !fix_upper && above <= cfg.tol_dom) fix_upper = true;
    };

    std::vector<int> idx(std::size_t(n), 0);
    std::size_t total = std::size_t(std::pow(double(g), double(n)));
    if (total > 1e6) total = std::size_t(1e6);
    Point p(std::size_t(n), 0.0);
    for (std::size_t k = 0; k < total; ++k) {
        for (int i = 0; i < n; ++i)
            p[std::size_t(i)] = lo + span * double(idx[std::size_t(i)]) / double(g - 1);
        consider(p);
        if ((!need_lower || fix_lower) && (!need_upper || fix_upper)) break;
        for (int i = n - 1; i >= 0; --i) {
            if (++idx[std::size_t(i)] < g) break;
            idx[std::size_t(i)] = 0;
        }
    }
    if (!((!need_lower || fix_lower) && (!need_upper || fix_upper))) {
        for (const Point& cp : f.meta().critical_points) {
            if (int(cp.size()) != n) continue;
            Point q(cp);
            for (double& t : q) t = w.interval.clamp(t);
            consider(q);
        }
    }

    if (!fix_lower && !fix_upper) return std::nullopt;
    return LevelCorrection{fix_lower, fix_upper, li.lo, li.hi};
}

enum class SolutionKind { metric, quasi_inverse, conjugated };

inline const char* to_string(SolutionKind k) {
    switch (k) {
        case SolutionKind::metric: return "metric";
        case SolutionKind::quasi_inverse: return "quasi-inverse";
        default: return "conjugated";
    }
}

/// An evaluable solution of the equalizer equation of its source function.
/// Evaluation is pure apart from a write-once-per-level correction cache
/// (metric kind), which is guarded for concurrent use.
class ChisiniSolution {
public:
    double operator()(std::span<const double> x) const { return eval(x); }
    double operator()(std::initializer_list<double> x) const {
        return eval(std::span<const double>(x.begin(), x.size()));
    }
    double at(const Point& x) const { return eval(x); }

    SolutionKind kind() const { return impl_->kind; }
    const FunctionHandle& source() const { return impl_->source; }
    const Box& box() const { return impl_->eval_box; }
    const SolverConfig& config() const { return impl_->cfg; }

    /// Correction record used on the level set of value y, if any.
    std::optional<LevelCorrection> correction_for(double y) const {
        if (impl_->kind != SolutionKind::metric || !impl_->corrections) return std::nullopt;
        return impl_->correction(y, nullptr);
    }

    /// Wrap as a function handle (e.g. to feed transforms or property runs).
    FunctionHandle as_function(std::string name = {}) const {
        FunctionMeta meta;
        meta.name = name.empty() ? std::string(to_string(kind())) + "-solution" : std::move(name);
        meta.claims_nondecreasing = true;
        meta.claims_continuous = false;
        meta.symmetries = impl_->source.meta().symmetries;
        auto self = *this;
        return FunctionHandle(impl_->eval_box,
                              [self](std::span<const double> x) { return self(x); },
                              std::move(meta));
    }

private:
    struct Impl {
        SolutionKind kind = SolutionKind::metric;
        FunctionHandle source;  ///< the function whose equation is solved
        Box eval_box;
        SolverConfig cfg;
        MonotoneFn diag;
        bool corrections = true;
        QIPolicy policy = QIPolicy::midpoint;

        // conjugated kind
        std::shared_ptr<const ChisiniSolution> inner;
        MonotoneFn generator;
        std::shared_ptr<const QuasiInverse> gen_inverse;

        mutable std::mutex mu;
        mutable std::map<std::string, std::optional<LevelCorrection>> cache;

        std::optional<LevelCorrection> correction(double y, const LevelInterval* li) const {
            auto key = detail::level_key(y);
            {
                std::lock_guard<std::mutex> lock(mu);
                auto it = cache.find(key);
                if (it != cache.end()) return it->second;
            }
            auto corr = detect_correction(source, y, cfg, li);
            std::lock_guard<std::mutex> lock(mu);
            auto [it, inserted] = cache.emplace(key, corr);
            return it->second; // first writer wins
        }
    };

    double eval(std::span<const double> x) const {
        const Impl& im = *impl_;
        switch (im.kind) {
            case SolutionKind::quasi_inverse: {
                Box w = im.eval_box.working(im.cfg);
                Point p(x.begin(), x.end());
                for (double& t : p) t = w.interval.clamp(t);
                double y = im.source.at(p);
                LevelInterval li = level_interval(im.diag, y, im.cfg);
                switch (im.policy) {
                    case QIPolicy::leftmost: return li.lo;
                    case QIPolicy::rightmost: return li.hi;
                    default: return li.mid();
                }
            }
            case SolutionKind::conjugated: {
                const int n = im.eval_box.arity;
                Point u(std::size_t(n), 0.0);
                for (int i = 0; i < n; ++i) u[std::size_t(i)] = im.generator(x[std::size_t(i)]);
                return (*im.gen_inverse)(im.inner->at(u));
            }
            default: break;
        }

        // metric kind
        Box w = im.eval_box.working(im.cfg);
        Point p(x.begin(), x.end());
        for (double& t : p) t = w.interval.clamp(t);
        double y = im.source.at(p);
        LevelInterval li = level_interval(im.diag, y, im.cfg);

        std::optional<LevelCorrection> corr;
        if (im.corrections) corr = im.correction(y, &li);

        double lo = li.lo, hi = li.hi;
        double below = detail::probe_distance<true>(im.source, p, y, w, im.cfg);
        double above = detail::probe_distance<false>(im.source, p, y, w, im.cfg);
        if (corr) {
            lo = corr->level_lo;
            hi = corr->level_hi;
            if (corr->fix_lower) below = std::max(0.0, max_coord(p) - lo);
            if (corr->fix_upper) above = std::max(0.0, hi - min_coord(p));
        } else {
            bool omega = std::isinf(below) || std::isinf(above) || below + above > im.cfg.tol_dom;
            if (!omega) return 0.5 * (lo + hi);
        }

        double u;
        bool b_inf = std::isinf(below), a_inf = std::isinf(above);
        if (!b_inf && !a_inf) {
            double sum = below + above;
            u = sum > 0.0 ? (above * lo + below * hi) / sum : 0.5 * (lo + hi);
        } else if (b_inf && !a_inf) {
            u = hi - above;
        } else if (!b_inf && a_inf) {
            u = lo + below;
        } else {
            u = 0.5 * (min_coord(p) + max_coord(p));
        }
        return std::min(std::max(u, lo), hi);
    }

    explicit ChisiniSolution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;

    friend ChisiniSolution q_solution(const FunctionHandle&, QIPolicy, const SolverConfig&);
    friend ChisiniSolution metric_solution(const FunctionHandle&, const SolverConfig&);
    friend ChisiniSolution metric_solution_uncorrected(const FunctionHandle&, const SolverConfig&);
    friend ChisiniSolution idempotize(const FunctionHandle&, const SolverConfig&);
    friend ChisiniSolution conjugated_level_mean(const FunctionHandle&, const MonotoneFn&,
                                                 const QuasiInverse&, const SolverConfig&);
};

namespace detail {

inline void require_solvable(const FunctionHandle& f, const SolverConfig& cfg) {
    SolvabilityReport rep = check_solvable(f, cfg);
    if (!rep.monotonicity_ok)
        throw NotMonotone("function violates its nondecreasing claim (sampled)");
    if (!rep.range_equal) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", rep.witness_value);
        throw Unsolvable(std::string("diagonal range misses the value ") + buf);
    }
}

} // namespace detail

/// Solution g∘F, with g a quasi-inverse of the diagonal selected by the
/// given policy. Range-idempotent and nondecreasing, but in general not
/// idempotent.
inline ChisiniSolution q_solution(const FunctionHandle& f, QIPolicy policy,
                                  const SolverConfig& cfg) {
    detail::require_solvable(f, cfg);
    auto impl = std::make_shared<ChisiniSolution::Impl>();
    impl->kind = SolutionKind::quasi_inverse;
    impl->source = f;
    impl->eval_box = f.box();
    impl->cfg = cfg;
    impl->diag = diagonal(f);
    impl->policy = policy;
    return ChisiniSolution(std::shared_ptr<const ChisiniSolution::Impl>(std::move(impl)));
}

/// The metric-interpolation solution: on each level set the value splits
/// the preimage interval in proportion to the Chebyshev distances to the
/// strictly-lower and strictly-upper regions, with the documented limiting
/// forms when a region is empty, the midpoint off the positive-thickness
/// region, and the corner-block correction on level sets whose preimage
/// endpoint the diagonal misses. Nondecreasing and idempotent.
inline ChisiniSolution metric_solution(const FunctionHandle& f, const SolverConfig& cfg) {
    detail::require_solvable(f, cfg);
    auto impl = std::make_shared<ChisiniSolution::Impl>();
    impl->kind = SolutionKind::metric;
    impl->source = f;
    impl->eval_box = f.box();
    impl->cfg = cfg;
    impl->diag = diagonal(f);
    impl->corrections = true;
    return ChisiniSolution(std::shared_ptr<const ChisiniSolution::Impl>(std::move(impl)));
}

/// Negative control: the metric solution with the correction path disabled.
/// On pathological level sets this provably fails the solve-check.
inline ChisiniSolution metric_solution_uncorrected(const FunctionHandle& f,
                                                   const SolverConfig& cfg) {
    detail::require_solvable(f, cfg);
    auto impl = std::make_shared<ChisiniSolution::Impl>();
    impl->kind = SolutionKind::metric;
    impl->source = f;
    impl->eval_box = f.box();
    impl->cfg = cfg;
    impl->diag = diagonal(f);
    impl->corrections = false;
    return ChisiniSolution(std::shared_ptr<const ChisiniSolution::Impl>(std::move(impl)));
}

/// Unique idempotent solution for a strictly monotone diagonal, realized by
/// bisection inversion of the diagonal.
inline ChisiniSolution idempotize(const FunctionHandle& f, const SolverConfig& cfg) {
    MonotoneFn diag = diagonal(f);
    Interval w = diag.domain.working(cfg);
    const int k = 513;
    int up = 0, down = 0, flat = 0;
    double prev = diag(w.lo);
    for (int i = 1; i < k; ++i) {
        double t = w.lo + w.span() * double(i) / double(k - 1);
        double v = diag(t);
        if (v > prev)
            ++up;
        else if (v < prev)
            ++down;
        else
            ++flat;
        prev = v;
    }
    if (flat > 0 || (up > 0 && down > 0))
        throw NotIdempotizable("diagonal section is not strictly monotone (sampled)");
    detail::require_solvable(f, cfg);
    auto impl = std::make_shared<ChisiniSolution::Impl>();
    impl->kind = SolutionKind::quasi_inverse;
    impl->source = f;
    impl->eval_box = f.box();
    impl->cfg = cfg;
    impl->diag = diag;
    impl->policy = QIPolicy::midpoint;
    return ChisiniSolution(std::shared_ptr<const ChisiniSolution::Impl>(std::move(impl)));
}

/// Transport the metric solution of F through a strictly monotone
/// continuous coordinate change: x -> psi(M(phi(x_1), ..., phi(x_n))).
/// Solves the equalizer equation of F∘(phi,...,phi) and is idempotent.
namespace detail {

inline void validate_generator(const FunctionHandle& f, const MonotoneFn& phi,
                               const SolverConfig& cfg) {
    Interval j = phi.domain.working(cfg);
    const int k = 65;
    double prev = phi(j.lo);
    int up = 0, down = 0;
    for (int i = 1; i < k; ++i) {
        double t = j.lo + j.span() * double(i) / double(k - 1);
        double v = phi(t);
        if (v > prev) ++up;
        if (v < prev) ++down;
        if (v == prev) throw GeneratorNotMonotone("generator is not strictly monotone");
        prev = v;
    }
    if (up > 0 && down > 0) throw GeneratorNotMonotone("generator changes direction");
    if (!f.box().interval.contains_closure(phi(j.lo), cfg.tol_val) ||
        !f.box().interval.contains_closure(phi(j.hi), cfg.tol_val))
        throw GeneratorNotMonotone("generator range leaves the function domain");
}

} // namespace detail

inline ChisiniSolution conjugated_level_mean(const FunctionHandle& f, const MonotoneFn& phi,
                                             const QuasiInverse& psi, const SolverConfig& cfg) {
    detail::validate_generator(f, phi, cfg);
    auto inner = std::make_shared<const ChisiniSolution>(metric_solution(f, cfg));

    Interval j = phi.domain.working(cfg);
    const int n = f.arity();
    FunctionHandle base = f;
    auto phi_eval = phi.eval;
    FunctionMeta meta;
    meta.name = f.meta().name + "-conjugated";
    meta.claims_nondecreasing = phi(j.hi) >= phi(j.lo);
    meta.symmetries = f.meta().symmetries;
    FunctionHandle transported(Box(phi.domain, n),
                               [base, phi_eval, n](std::span<const double> x) {
                                   std::array<double, 16> buf;
                                   Point big;
                                   double* u = nullptr;
                                   if (n <= 16) {
                                       u = buf.data();
                                   } else {
                                       big.resize(std::size_t(n));
                                       u = big.data();
                                   }
                                   for (int i = 0; i < n; ++i)
                                       u[std::size_t(i)] = phi_eval(x[std::size_t(i)]);
                                   return base(std::span<const double>(u, std::size_t(n)));
                               },
                               std::move(meta));

    auto impl = std::make_shared<ChisiniSolution::Impl>();
    impl->kind = SolutionKind::conjugated;
    impl->source = transported;
    impl->eval_box = Box(phi.domain, n);
    impl->cfg = cfg;
    impl->diag = diagonal(transported);
    impl->inner = inner;
    impl->generator = phi;
    impl->gen_inverse = std::make_shared<const QuasiInverse>(psi);
    return ChisiniSolution(std::shared_ptr<const ChisiniSolution::Impl>(std::move(impl)));
}

inline ChisiniSolution conjugated_level_mean(const FunctionHandle& f, const MonotoneFn& phi,
                                             const SolverConfig& cfg) {
    detail::validate_generator(f, phi, cfg);
    return conjugated_level_mean(f, phi, quasi_inverse(phi, QIPolicy::midpoint, cfg), cfg);
}

} // namespace chisini
