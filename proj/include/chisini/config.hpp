#pragma once

#include <cstdint>

#include "chisini/errors.hpp"

namespace chisini {

/// Numeric tolerances and budgets shared by all solver operations.
///
/// Value comparisons use tol_val, domain-coordinate comparisons tol_dom.
/// Strict inequalities F(x') < F(x) are realized as F(x') < F(x) - tol_val,
/// which makes the level-set distances outer approximations within the
/// modulus of F.
struct SolverConfig {
    double tol_val = 1e-9;   ///< function-value tolerance
    double tol_dom = 1e-10;  ///< domain-coordinate tolerance
    double tol_solve = 1e-6; ///< residual bound for the solve-check |diag(G(x)) - F(x)|
    int max_bisect = 200;    ///< bisection iteration cap
    int oracle_grid = 201;   ///< points per axis for the brute-force distance oracle
    int levelset_scan = 33;  ///< points per axis for level-set existence scans
    std::uint64_t rng_seed = 0x9e3779b97f4a7c15ull;

    /// Open or unbounded intervals are handled by working on an inset
    /// compact sub-interval: open endpoints move inward by inset_rel of the
    /// span, infinite endpoints are capped at +-unbounded_cap.
    double inset_rel = 1e-9;
    double unbounded_cap = 1e9;

    /// Attainment of a level-interval endpoint means the function value at
    /// the located endpoint is within attain_tol() of the target.
    double attain_tol() const { return 10.0 * tol_val; }

    /// Minimal value gap across a tol_dom-wide bracket that is classified
    /// as a jump rather than a steep slope.
    double jump_tol() const {
        double a = 1e3 * tol_val, b = 1e4 * tol_dom;
        return a > b ? a : b;
    }

    void validate() const {
        if (!(tol_val > 0.0) || !(tol_dom > 0.0) || !(tol_solve > 0.0))
            throw InvalidInput("tolerances must be positive");
        if (max_bisect < 1 || oracle_grid < 2 || levelset_scan < 2)
            throw InvalidInput("iteration budget and grid sizes must be >= 2");
    }
};

} // namespace chisini
