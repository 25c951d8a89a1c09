#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chisini/function.hpp"

namespace chisini {

using Params = std::map<std::string, std::string>;

struct CatalogEntry {
    std::string name;
    std::string params; ///< accepted parameters, human readable
    std::string brief;
};

inline std::vector<CatalogEntry> catalog_entries() {
    return {
        {"nilpotent-min", "", "0 when x1+x2 <= 1, else min(x1,x2); range-gap example"},
        {"lukasiewicz", "", "max(0, x1+x2-1) on [0,1]^2"},
        {"ordinal-sum-example", "", "min(x1, x2, 1/4 + max(0, x1+x2-1)) on [0,1]^2"},
        {"einstein-sum", "", "(x1+x2)/(1+x1*x2) on (-1,1)^2"},
        {"min-cap", "c=0.5", "min(x1+x2, c) on [0,1]^2"},
        {"constant", "c=0.5,n=2", "constant function"},
        {"min", "n=2", "coordinate minimum"},
        {"max", "n=2", "coordinate maximum"},
        {"arithmetic-mean", "n=2", "coordinate average"},
        {"archimedean", "gen={log|luka|yager},p=2,kind={strict|nilpotent}",
         "generator-based associative conjunction on [0,1]^2"},
        {"remark44-example", "", "0/1 step with one excluded corner point; correction example"},
    };
}

namespace detail {

inline double param_double(const Params& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    try {
        std::size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw InvalidInput("");
        return v;
    } catch (...) {
        throw InvalidInput("catalog parameter '" + key + "' is not a number: " + it->second);
    }
}

inline int param_int(const Params& p, const std::string& key, int fallback) {
    double v = param_double(p, key, double(fallback));
    int i = int(v);
    if (double(i) != v) throw InvalidInput("catalog parameter '" + key + "' must be an integer");
    return i;
}

inline std::string param_str(const Params& p, const std::string& key, std::string fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline void reject_unknown(const Params& p, std::initializer_list<const char*> known,
                           const std::string& family) {
    for (const auto& [k, v] : p) {
        bool ok = false;
        for (const char* kn : known)
            if (k == kn) ok = true;
        if (!ok) throw InvalidInput("unknown parameter '" + k + "' for catalog family " + family);
    }
}

inline std::vector<Permutation> symmetric_group_generators(int n) {
    std::vector<Permutation> out;
    for (int i = 0; i + 1 < n; ++i) out.push_back(Permutation::transposition(n, i, i + 1));
    return out;
}

/// Strictly decreasing additive generator with its pseudo-inverse.
struct ArchGenerator {
    std::function<double(double)> phi;
    std::function<double(double)> psi; ///< pseudo-inverse: psi(u) = phi^{-1}(min(u, phi(0)))
    double phi_at_zero;
};

inline ArchGenerator make_generator(const std::string& gen, double p) {
    if (gen == "log")
        return {[](double t) { return t <= 0.0 ? kInf : -std::log(t); },
                [](double u) { return std::exp(-u); }, kInf};
    if (gen == "luka")
        return {[](double t) { return 1.0 - t; },
                [](double u) { return std::max(0.0, 1.0 - u); }, 1.0};
    if (gen == "yager") {
        if (!(p > 0.0)) throw InvalidInput("yager generator needs p > 0");
        return {[p](double t) { return std::pow(1.0 - t, p); },
                [p](double u) { return 1.0 - std::min(1.0, std::pow(std::max(u, 0.0), 1.0 / p)); },
                1.0};
    }
    throw InvalidInput("unknown archimedean generator: " + gen +
                       " (known: log, luka, yager); a strictly decreasing generator with "
                       "phi(1)=0 is required");
}

} // namespace detail

/// Build a built-in function by name. Every handle carries the exact box,
/// declared symmetries and continuity, the analytic diagonal, and the
/// points where known certificate violations sit.
inline FunctionHandle catalog(std::string_view name, const Params& params = {}) {
    using detail::param_double;
    using detail::param_int;
    using detail::param_str;
    const std::string fam(name);

    if (fam == "nilpotent-min") {
        detail::reject_unknown(params, {}, fam);
        FunctionMeta m;
        m.name = fam;
        m.symmetries = detail::symmetric_group_generators(2);
        m.claims_continuous = false;
        m.monotonicity_verified = true;
        m.analytic_diagonal = [](double t) { return 2.0 * t <= 1.0 ? 0.0 : t; };
        m.critical_points = {{0.5, 0.5}, {0.3, 0.9}, {0.75, 0.25}, {0.25, 0.75}, {0.6, 0.4}};
        return FunctionHandle(Box(Interval::closed(0, 1), 2),
                              [](std::span<const double> x) {
                                  return x[0] + x[1] <= 1.0 ? 0.0 : std::min(x[0], x[1]);
                              },
                              std::move(m));
    }
    if (fam == "lukasiewicz") {
        detail::reject_unknown(params, {}, fam);
        FunctionMeta m;
        m.name = fam;
        m.symmetries = detail::symmetric_group_generators(2);
        m.claims_continuous = true;
        m.monotonicity_verified = true;
        m.analytic_diagonal = [](double t) { return std::max(0.0, 2.0 * t - 1.0); };
        m.critical_points = {{0.5, 0.5}, {0.3, 0.7}, {0.25, 0.75}, {1.0, 0.0}};
        return FunctionHandle(Box(Interval::closed(0, 1), 2),
                              [](std::span<const double> x) {
                                  return std::max(0.0, x[0] + x[1] - 1.0);
                              },
                              std::move(m));
    }
    if (fam == "ordinal-sum-example") {
        detail::reject_unknown(params, {}, fam);
        FunctionMeta m;
        m.name = fam;
        m.symmetries = detail::symmetric_group_generators(2);
        m.claims_continuous = true;
        m.monotonicity_verified = true;
        m.analytic_diagonal = [](double t) {
            return std::min(t, 0.25 + std::max(0.0, 2.0 * t - 1.0));
        };
        m.critical_points = {{0.9, 0.25}, {0.8, 0.25}, {0.25, 0.9}, {0.25, 0.8},
                             {0.3, 0.4},  {0.5, 0.5},  {0.25, 0.25}, {0.75, 0.25}};
        return FunctionHandle(Box(Interval::closed(0, 1), 2),
                              [](std::span<const double> x) {
                                  return std::min(std::min(x[0], x[1]),
                                                  0.25 + std::max(0.0, x[0] + x[1] - 1.0));
                              },
                              std::move(m));
    }
    if (fam == "einstein-sum") {
        detail::reject_unknown(params, {}, fam);
        FunctionMeta m;
        m.name = fam;
        m.symmetries = detail::symmetric_group_generators(2);
        m.claims_continuous = true;
        m.monotonicity_verified = true;
        m.analytic_diagonal = [](double t) { return 2.0 * t / (1.0 + t * t); };
        return FunctionHandle(Box(Interval::open(-1, 1), 2),
                              [](std::span<const double> x) {
                                  return (x[0] + x[1]) / (1.0 + x[0] * x[1]);
                              },
                              std::move(m));
    }
    if (fam == "min-cap") {
        detail::reject_unknown(params, {"c"}, fam);
        double c = param_double(params, "c", 0.5);
        if (!(c > 0.0)) throw InvalidInput("min-cap needs c > 0");
        FunctionMeta m;
        m.name = fam;
        m.symmetries = detail::symmetric_group_generators(2);
        m.claims_continuous = true;
        m.monotonicity_verified = true;
        m.analytic_diagonal = [c](double t) { return std::min(2.0 * t, c); };
        m.critical_points = {{c / 2, c / 2}, {c, 0.0}, {0.0, c}, {0.75 * c, 0.25 * c}};
        return FunctionHandle(Box(Interval::closed(0, 1), 2),
                              [c](std::span<const double> x) { return std::min(x[0] + x[1], c); },
                              std::move(m));
    }
    if (fam == "constant") {
        detail::reject_unknown(params, {"c", "n"}, fam);
        double c = param_double(params, "c", 0.5);
        int n = param_int(params, "n", 2);
        FunctionMeta m;
        m.name = fam;
        m.symmetries = detail::symmetric_group_generators(n);
        m.claims_continuous = true;
        m.monotonicity_verified = true;
        m.analytic_diagonal = [c](double) { return c; };
        return FunctionHandle(Box(Interval::closed(0, 1), n),
                              [c](std::span<const double>) { return c; }, std::move(m));
    }
    if (fam == "min" || fam == "max" || fam == "arithmetic-mean") {
        detail::reject_unknown(params, {"n"}, fam);
        int n = param_int(params, "n", 2);
        FunctionMeta m;
        m.name = fam;
        m.symmetries = detail::symmetric_group_generators(n);
        m.claims_continuous = true;
        m.monotonicity_verified = true;
        m.analytic_diagonal = [](double t) { return t; };
        EvalFn eval;
        if (fam == "min")
            eval = [](std::span<const double> x) { return min_coord(x); };
        else if (fam == "max")
            eval = [](std::span<const double> x) { return max_coord(x); };
        else
            eval = [](std::span<const double> x) {
                double s = 0.0;
                for (double t : x) s += t;
                return s / double(x.size());
            };
        return FunctionHandle(Box(Interval::closed(0, 1), n), std::move(eval), std::move(m));
    }
    if (fam == "archimedean") {
        detail::reject_unknown(params, {"gen", "p", "kind"}, fam);
        std::string gen = param_str(params, "gen", "log");
        double p = param_double(params, "p", 2.0);
        std::string kind = param_str(params, "kind", "");
        detail::ArchGenerator g = detail::make_generator(gen, p);
        bool strict = std::isinf(g.phi_at_zero);
        if (kind.empty()) kind = strict ? "strict" : "nilpotent";
        if ((kind == "strict") != strict)
            throw InvalidInput("generator '" + gen + "' is " +
                               (strict ? "strict" : "nilpotent") + ", not " + kind);
        if (kind != "strict" && kind != "nilpotent")
            throw InvalidInput("archimedean kind must be strict or nilpotent");
        FunctionMeta m;
        m.name = fam + "(" + gen + ")";
        m.symmetries = detail::symmetric_group_generators(2);
        m.claims_continuous = true;
        m.monotonicity_verified = true;
        auto phi = g.phi;
        auto psi = g.psi;
        double phi0 = g.phi_at_zero;
        m.analytic_diagonal = [phi, psi, phi0](double t) {
            return psi(std::min(phi0, 2.0 * phi(t)));
        };
        return FunctionHandle(Box(Interval::closed(0, 1), 2),
                              [phi, psi, phi0](std::span<const double> x) {
                                  return psi(std::min(phi0, phi(x[0]) + phi(x[1])));
                              },
                              std::move(m));
    }
    if (fam == "remark44-example") {
        detail::reject_unknown(params, {}, fam);
        FunctionMeta m;
        m.name = fam;
        m.symmetries = detail::symmetric_group_generators(2);
        m.claims_continuous = false;
        m.monotonicity_verified = true;
        m.analytic_diagonal = [](double t) { return t > 0.5 ? 1.0 : 0.0; };
        m.critical_points = {{0.75, 0.5}, {0.5, 0.75}, {0.5, 0.5},
                             {0.6, 0.5},  {0.5, 0.6},  {0.25, 0.25}, {0.75, 0.75}};
        return FunctionHandle(Box(Interval::closed(0, 1), 2),
                              [](std::span<const double> x) {
                                  bool upper = x[0] >= 0.5 && x[1] >= 0.5 &&
                                               !(x[0] == 0.5 && x[1] == 0.5);
                                  return upper ? 1.0 : 0.0;
                              },
                              std::move(m));
    }
    throw InvalidInput("unknown catalog function: " + fam);
}

/// Closed-form nondecreasing idempotent solution, where one is known.
/// These are test oracles; the solver never consults them.
inline std::optional<double> catalog_mean_closed_form(std::string_view name, const Params& params,
                                                      std::span<const double> x) {
    const std::string fam(name);
    if (fam == "lukasiewicz") return 0.5 * (x[0] + x[1]);
    if (fam == "einstein-sum")
        return std::tanh(0.5 * (std::atanh(x[0]) + std::atanh(x[1])));
    if (fam == "min-cap") {
        double c = detail::param_double(params, "c", 0.5);
        double mn = std::min(x[0], x[1]), mx = std::max(x[0], x[1]);
        return mx - mn <= c ? 0.5 * (x[0] + x[1]) : mx - 0.5 * c;
    }
    if (fam == "min") return min_coord(x);
    if (fam == "max") return max_coord(x);
    if (fam == "arithmetic-mean") {
        double s = 0.0;
        for (double t : x) s += t;
        return s / double(x.size());
    }
    if (fam == "constant") return 0.5 * (min_coord(x) + max_coord(x));
    if (fam == "remark44-example") {
        bool upper = x[0] >= 0.5 && x[1] >= 0.5 && !(x[0] == 0.5 && x[1] == 0.5);
        return upper ? max_coord(x) : min_coord(x);
    }
    if (fam == "archimedean") {
        std::string gen = detail::param_str(params, "gen", "log");
        double p = detail::param_double(params, "p", 2.0);
        if (gen == "log") {
            // quasi-arithmetic mean of the strict family: geometric mean
            return std::sqrt(x[0] * x[1]);
        }
        if (gen == "luka") return 0.5 * (x[0] + x[1]);
        (void)p; // no closed form for the general nilpotent family
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace chisini
