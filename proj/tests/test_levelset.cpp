#include <doctest.h>

#include <cmath>

#include "chisini/catalog.hpp"
#include "chisini/level_data.hpp"

using namespace chisini;

namespace {
const SolverConfig cfg{};
} // namespace

TEST_CASE("level_data on the ordinal-sum example") {
    auto f = catalog("ordinal-sum-example");
    Point x{0.3, 0.4};
    LevelData d = level_data(f, x, cfg);
    CHECK(d.value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.level_lo == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(d.level_hi == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(d.dist_below == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(d.dist_above == doctest::Approx(0.15).epsilon(1e-6));
    CHECK(d.in_omega);
    CHECK(d.lo_attained);
    CHECK(d.hi_attained);
}

TEST_CASE("level_data on a constant function") {
    auto f = catalog("constant", {{"c", "0.7"}});
    Point x{0.31, 0.64};
    LevelData d = level_data(f, x, cfg);
    CHECK(std::isinf(d.dist_below));
    CHECK(std::isinf(d.dist_above));
    CHECK(d.in_omega);
    CHECK(d.level_lo == doctest::Approx(0.0));
    CHECK(d.level_hi == doctest::Approx(1.0));
}

TEST_CASE("level_data with clamped probes") {
    auto f = catalog("min-cap"); // min(x1+x2, 1/2) on [0,1]^2
    Point x{0.9, 0.1};
    LevelData d = level_data(f, x, cfg);
    CHECK(d.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.level_lo == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(d.level_hi == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.dist_below == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(std::isinf(d.dist_above));
}

TEST_CASE("level_data rejects out-of-box points") {
    auto f = catalog("lukasiewicz");
    Point x{1.5, 0.5};
    CHECK_THROWS_AS(level_data(f, x, cfg), PointOutOfBox);
}

TEST_CASE("brute-force distance oracle") {
    auto f = catalog("ordinal-sum-example");
    Point x{0.3, 0.4};
    auto [below, above] = brute_force_distances(f, x, cfg);
    double cell = 1.0 / double(cfg.oracle_grid - 1);
    CHECK(std::abs(below - 0.05) <= cell + cfg.tol_dom);
    CHECK(std::abs(above - 0.15) <= cell + cfg.tol_dom);

    auto c = catalog("constant", {{"c", "0.7"}});
    auto [cb, ca] = brute_force_distances(c, x, cfg);
    CHECK(std::isinf(cb));
    CHECK(std::isinf(ca));

    // level 0 of the Lukasiewicz conjunction is the minimum of the range
    auto tl = catalog("lukasiewicz");
    Point z{0.3, 0.3};
    auto [tb, ta] = brute_force_distances(tl, z, cfg);
    CHECK(std::isinf(tb));
    CHECK_FALSE(std::isinf(ta));

    SolverConfig big = cfg;
    big.oracle_grid = 5000;
    CHECK_THROWS_AS(brute_force_distances(tl, z, big), GridTooLarge);
}

TEST_CASE("probe agrees with the oracle on seeded points") {
    for (const char* name :
         {"lukasiewicz", "ordinal-sum-example", "min-cap", "remark44-example", "nilpotent-min"}) {
        CAPTURE(name);
        auto f = catalog(name);
        Box w = f.box().working(cfg);
        OracleTable table(f, cfg);
        const double bound = table.cell_width() + cfg.tol_dom;
        Rng rng(cfg.rng_seed);
        for (int k = 0; k < 60; ++k) {
            Point x{rng.next_in(w.interval.lo, w.interval.hi),
                    rng.next_in(w.interval.lo, w.interval.hi)};
            double y = f.at(x);
            double pb = detail::probe_distance<true>(f, x, y, w, cfg);
            double pa = detail::probe_distance<false>(f, x, y, w, cfg);
            auto [ob, oa] = table.distances(x, y);
            CAPTURE(x[0]);
            CAPTURE(x[1]);
            CHECK(std::isinf(pb) == std::isinf(ob));
            CHECK(std::isinf(pa) == std::isinf(oa));
            if (!std::isinf(pb)) CHECK(std::abs(pb - ob) <= bound);
            if (!std::isinf(pa)) CHECK(std::abs(pa - oa) <= bound);
        }
    }
}

TEST_CASE("distances move the right way along level sets") {
    auto f = catalog("ordinal-sum-example");
    Box w = f.box().working(cfg);
    Rng rng(99);
    int used = 0;
    for (int k = 0; k < 1000; ++k) {
        Point x{rng.next_in(0.0, 1.0), rng.next_in(0.0, 1.0)};
        Point y{std::min(1.0, x[0] + 0.2 * rng.next_unit()),
                std::min(1.0, x[1] + 0.2 * rng.next_unit())};
        double v = f.at(x);
        if (std::abs(f.at(y) - v) > cfg.tol_val) continue;
        ++used;
        double ax = detail::probe_distance<false>(f, x, v, w, cfg);
        double ay = detail::probe_distance<false>(f, y, v, w, cfg);
        double bx = detail::probe_distance<true>(f, x, v, w, cfg);
        double by = detail::probe_distance<true>(f, y, v, w, cfg);
        if (!std::isinf(ax) || !std::isinf(ay)) CHECK(ax >= ay - cfg.tol_dom);
        if (!std::isinf(bx) || !std::isinf(by)) CHECK(bx <= by + cfg.tol_dom);
    }
    CHECK(used > 20); // the flat level sets must actually get sampled
}

TEST_CASE("infinite distance pins the level endpoint to the boundary") {
    // whenever the strictly-lower region is empty, the preimage infimum is
    // the interval infimum (compact-box direction)
    for (const char* name : {"lukasiewicz", "min-cap", "remark44-example", "constant"}) {
        CAPTURE(name);
        auto f = catalog(name);
        Box w = f.box().working(cfg);
        Rng rng(123);
        for (int k = 0; k < 100; ++k) {
            Point x{rng.next_in(0.0, 1.0), rng.next_in(0.0, 1.0)};
            LevelData d = level_data(f, x, cfg);
            if (std::isinf(d.dist_below))
                CHECK(std::abs(d.level_lo - w.interval.lo) <= 1e3 * cfg.tol_dom);
            if (std::isinf(d.dist_above))
                CHECK(std::abs(d.level_hi - w.interval.hi) <= 1e3 * cfg.tol_dom);
        }
    }
}

TEST_CASE("level endpoints are constant across a level set") {
    auto f = catalog("min-cap");
    Rng rng(5);
    MonotoneFn diag = diagonal(f);
    int used = 0;
    for (int k = 0; k < 300; ++k) {
        Point x{rng.next_in(0.0, 1.0), rng.next_in(0.0, 1.0)};
        Point y{rng.next_in(0.0, 1.0), rng.next_in(0.0, 1.0)};
        if (std::abs(f.at(x) - f.at(y)) > cfg.tol_val) continue;
        ++used;
        LevelInterval a = level_interval(diag, f.at(x), cfg);
        LevelInterval b = level_interval(diag, f.at(y), cfg);
        CHECK(std::abs(a.lo - b.lo) <= 10 * cfg.tol_dom);
        CHECK(std::abs(a.hi - b.hi) <= 10 * cfg.tol_dom);
    }
    CHECK(used > 10);
}

TEST_CASE("corrected corner-block distances") {
    Point x{0.75, 0.5};
    auto [below, above] = corrected_distances(x, 0.5, 1.0);
    CHECK(below == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(above == doctest::Approx(0.5).epsilon(1e-15));

    Point diag_pt{0.6, 0.6};
    auto [b2, a2] = corrected_distances(diag_pt, 0.5, 1.0);
    CHECK(b2 == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(a2 == doctest::Approx(0.4).epsilon(1e-12));

    Point at_edge{0.5, 0.25};
    auto [b3, a3] = corrected_distances(at_edge, 0.5, 1.0);
    CHECK(b3 == doctest::Approx(0.0));

    Point below_block{0.3, 0.2};
    auto [b4, a4] = corrected_distances(below_block, 0.5, 1.0);
    CHECK(b4 == 0.0); // clamped, the corner block contains the point
    CHECK(a4 == doctest::Approx(0.8).epsilon(1e-12));
}
