#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "chisini/function.hpp"

namespace chisini {

/// Tabulated nondecreasing function: per-axis sorted knots and a row-major
/// value array (last axis fastest), evaluated by multilinear interpolation.
struct MonotoneGridData {
    std::vector<std::vector<double>> axis_knots;
    std::vector<double> values;

    int arity() const { return int(axis_knots.size()); }

    std::size_t index_of(std::span<const int> idx) const {
        std::size_t flat = 0;
        for (std::size_t a = 0; a < axis_knots.size(); ++a)
            flat = flat * axis_knots[a].size() + std::size_t(idx[a]);
        return flat;
    }
};

/// Plain-text grid format:
///   line 1: n k1 k2 ... kn
///   next n lines: the sorted knot coordinates of each axis
///   then k1*...*kn values in row-major order (last axis fastest)
inline MonotoneGridData parse_monotone_grid(std::istream& in) {
    MonotoneGridData g;
    int n = 0;
    if (!(in >> n) || n < 1) throw InvalidInput("grid file: bad arity");
    std::vector<int> counts(std::size_t(n), 0);
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) {
        if (!(in >> counts[std::size_t(a)]) || counts[std::size_t(a)] < 2)
            throw InvalidInput("grid file: each axis needs at least 2 knots");
        total *= std::size_t(counts[std::size_t(a)]);
        if (total > 50'000'000u) throw InvalidInput("grid file: too many values");
    }
    g.axis_knots.resize(std::size_t(n));
    for (int a = 0; a < n; ++a) {
        auto& ks = g.axis_knots[std::size_t(a)];
        ks.resize(std::size_t(counts[std::size_t(a)]));
        for (double& k : ks)
            if (!(in >> k)) throw InvalidInput("grid file: missing knot coordinate");
        if (!std::is_sorted(ks.begin(), ks.end()) ||
            std::adjacent_find(ks.begin(), ks.end()) != ks.end())
            throw InvalidInput("grid file: knots must be strictly increasing");
    }
    g.values.resize(total);
    for (double& v : g.values)
        if (!(in >> v) || !std::isfinite(v)) throw InvalidInput("grid file: missing or non-finite value");
    return g;
}

inline MonotoneGridData load_monotone_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open grid file: " + path);
    return parse_monotone_grid(in);
}

namespace detail {

/// Validate that the value array is nondecreasing along every axis index.
inline void check_grid_monotone(const MonotoneGridData& g) {
    int n = g.arity();
    std::vector<std::size_t> dims(std::size_t(n), 0), strides(std::size_t(n), 0);
    for (int a = 0; a < n; ++a) dims[std::size_t(a)] = g.axis_knots[std::size_t(a)].size();
    std::size_t s = 1;
    for (int a = n - 1; a >= 0; --a) {
        strides[std::size_t(a)] = s;
        s *= dims[std::size_t(a)];
    }
    const std::size_t total = g.values.size();
    for (int a = 0; a < n; ++a) {
        std::size_t stride = strides[std::size_t(a)], dim = dims[std::size_t(a)];
        for (std::size_t i = 0; i < total; ++i) {
            std::size_t pos = (i / stride) % dim;
            if (pos + 1 < dim && g.values[i] > g.values[i + stride])
                throw NotMonotone("grid values decrease along an axis");
        }
    }
}

inline double interpolate_grid(const MonotoneGridData& g, std::span<const double> x) {
    int n = g.arity();
    // cell index and weight per axis
    std::array<int, 16> cell;
    std::array<double, 16> w;
    for (int a = 0; a < n; ++a) {
        const auto& ks = g.axis_knots[std::size_t(a)];
        double t = std::min(std::max(x[std::size_t(a)], ks.front()), ks.back());
        auto it = std::upper_bound(ks.begin(), ks.end(), t);
        int hi = int(it - ks.begin());
        if (hi <= 0) hi = 1;
        if (hi >= int(ks.size())) hi = int(ks.size()) - 1;
        int lo = hi - 1;
        cell[std::size_t(a)] = lo;
        double denom = ks[std::size_t(hi)] - ks[std::size_t(lo)];
        w[std::size_t(a)] = denom > 0.0 ? (t - ks[std::size_t(lo)]) / denom : 0.0;
    }
    double acc = 0.0;
    std::array<int, 16> idx;
    for (unsigned corner = 0; corner < (1u << n); ++corner) {
        double weight = 1.0;
        for (int a = 0; a < n; ++a) {
            bool upper = (corner >> a) & 1u;
            weight *= upper ? w[std::size_t(a)] : 1.0 - w[std::size_t(a)];
            idx[std::size_t(a)] = cell[std::size_t(a)] + (upper ? 1 : 0);
        }
        if (weight != 0.0)
            acc += weight * g.values[g.index_of(std::span<const int>(idx.data(), std::size_t(n)))];
    }
    return acc;
}

} // namespace detail

/// Wrap grid data as a function handle. Monotonicity of the value array is
/// validated here, so the handle's nondecreasing claim is machine-checked;
/// multilinear interpolation of axiswise-nondecreasing data is itself
/// nondecreasing in each variable.
///
/// All axes must share a common coordinate range, since the domain is a
/// power of a single interval.
inline FunctionHandle make_grid_function(MonotoneGridData g, std::string name = "grid") {
    int n = g.arity();
    if (n > 16) throw InvalidInput("grid functions support arity <= 16");
    detail::check_grid_monotone(g);
    double lo = g.axis_knots[0].front(), hi = g.axis_knots[0].back();
    for (const auto& ks : g.axis_knots)
        if (std::abs(ks.front() - lo) > 1e-12 || std::abs(ks.back() - hi) > 1e-12)
            throw InvalidInput("grid axes must share a common coordinate range");
    FunctionMeta meta;
    meta.name = std::move(name);
    meta.claims_nondecreasing = true;
    meta.monotonicity_verified = true;
    meta.claims_continuous = true; // multilinear interpolants are continuous
    auto data = std::make_shared<const MonotoneGridData>(std::move(g));
    return FunctionHandle(Box(Interval::closed(lo, hi), n),
                          [data](std::span<const double> x) { return detail::interpolate_grid(*data, x); },
                          std::move(meta));
}

} // namespace chisini
