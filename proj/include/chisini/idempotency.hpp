#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "chisini/level_interval.hpp"

namespace chisini {

/// Residual report for the self-composition equation f(f(t)) = f(t).
struct IdempotencyReport {
    bool pass = false;
    double max_residual = 0.0;
    std::optional<double> counterexample;
    int samples = 0;
};

/// Check f(f(t)) = f(t) on an evenly spaced sample of the interval.
/// Values of f that leave the interval are clamped back before the second
/// application (they count against the residual via the first application
/// anyway, since a solution must map into its own domain on its range).
inline IdempotencyReport check_idempotency_equation(const MonotoneFn& f, int samples,
                                                    const SolverConfig& cfg) {
    Interval w = f.domain.working(cfg);
    IdempotencyReport rep;
    rep.samples = samples;
    rep.pass = true;
    for (int i = 0; i < samples; ++i) {
        double t = samples == 1 ? w.lo : w.lo + w.span() * double(i) / double(samples - 1);
        double v = f(t);
        double r = std::abs(f(w.clamp(v)) - v);
        if (r > rep.max_residual) {
            rep.max_residual = r;
            if (r > cfg.tol_val) rep.counterexample = t;
        }
    }
    rep.pass = rep.max_residual <= cfg.tol_val;
    return rep;
}

/// Fit a nondecreasing continuous solution of f(f) = f as a two-sided clamp
/// x -> max(a, min(x, b)). Returns the clamp bounds when the fit reproduces
/// f within tol_val on a fresh sample, absent otherwise (including when the
/// self-composition pre-check fails). Throws PreconditionFailed when f is
/// not nondecreasing by sampled evidence.
inline std::optional<std::pair<double, double>> recognize_clamp(const MonotoneFn& f,
                                                                const SolverConfig& cfg) {
    Interval w = f.domain.working(cfg);
    {
        const int k = 65;
        double prev = f(w.lo);
        for (int i = 1; i < k; ++i) {
            double t = w.lo + w.span() * double(i) / double(k - 1);
            double v = f(t);
            if (v < prev - cfg.tol_val)
                throw PreconditionFailed("clamp recognizer requires a nondecreasing function");
            prev = v;
        }
    }
    if (!check_idempotency_equation(f, 257, cfg).pass) return std::nullopt;

    // For a clamp, the bounds are the values at the interval ends; bisection
    // then locates the plateau edges, which must sit at those same values.
    double a = f(w.lo);
    double b = f(w.hi);
    if (a > w.lo + cfg.tol_dom) {
        auto pred = [&](double t) { return f(t) > a + cfg.tol_val; };
        if (!pred(w.hi)) {
            // f is constant: degenerate clamp a = b
        } else {
            Bracket br = bisect_rising(pred, w.lo, w.hi, cfg);
            if (std::abs(br.lo - a) > 1e3 * cfg.tol_dom + cfg.tol_val) return std::nullopt;
        }
    }
    if (b < w.hi - cfg.tol_dom) {
        auto pred = [&](double t) { return f(t) >= b - cfg.tol_val; };
        if (pred(w.lo)) {
            // constant case again
        } else {
            Bracket br = bisect_rising(pred, w.lo, w.hi, cfg);
            if (std::abs(br.hi - b) > 1e3 * cfg.tol_dom + cfg.tol_val) return std::nullopt;
        }
    }

    const int k = 401;
    for (int i = 0; i < k; ++i) {
        double t = w.lo + w.span() * double(i) / double(k - 1);
        double fit = std::max(a, std::min(t, b));
        if (std::abs(f(t) - fit) > cfg.attain_tol()) return std::nullopt;
    }
    return std::make_pair(a, b);
}

} // namespace chisini
