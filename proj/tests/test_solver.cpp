#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "chisini/chisini.hpp"

using namespace chisini;

namespace {

const SolverConfig cfg{};

FunctionHandle sum_function(double lo, double hi) {
    FunctionMeta m;
    m.name = "sum";
    m.symmetries = {Permutation::transposition(2, 0, 1)};
    m.claims_continuous = true;
    m.monotonicity_verified = true;
    m.analytic_diagonal = [](double t) { return 2.0 * t; };
    return FunctionHandle(Box(Interval::closed(lo, hi), 2),
                          [](std::span<const double> x) { return x[0] + x[1]; }, std::move(m));
}

} // namespace

TEST_CASE("configuration is validated") {
    SolverConfig bad;
    bad.tol_val = -1.0;
    CHECK_THROWS_AS(check_solvable(catalog("min"), bad), InvalidInput);
    SolverConfig tiny_grid;
    tiny_grid.oracle_grid = 1;
    CHECK_THROWS_AS(check_solvable(catalog("min"), tiny_grid), InvalidInput);
}

TEST_CASE("check_solvable verdicts") {
    auto nil = check_solvable(catalog("nilpotent-min"), cfg);
    CHECK_FALSE(nil.range_equal);
    REQUIRE(nil.witness.has_value());
    CHECK(nil.witness_value > 0.0);
    CHECK(nil.witness_value <= 0.5 + cfg.tol_val);

    auto tl = check_solvable(catalog("lukasiewicz"), cfg);
    CHECK(tl.range_equal);
    REQUIRE(tl.unique.has_value());
    CHECK_FALSE(*tl.unique); // flat diagonal on [0, 1/2]

    auto es = check_solvable(catalog("einstein-sum"), cfg);
    CHECK(es.range_equal);
    REQUIRE(es.unique.has_value());
    CHECK(*es.unique);
}

TEST_CASE("quasi-inverse solutions") {
    auto f = catalog("lukasiewicz");
    auto g = q_solution(f, QIPolicy::midpoint, cfg);
    CHECK(g({0.3, 0.4}) == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(g({0.9, 0.9}) == doctest::Approx(0.9).epsilon(1e-8));
    // not idempotent: the whole zero level collapses to one value
    CHECK(g({0.3, 0.3}) == doctest::Approx(0.25).epsilon(1e-8));

    CHECK_THROWS_AS(q_solution(catalog("nilpotent-min"), QIPolicy::midpoint, cfg), Unsolvable);
}

TEST_CASE("metric solution reference values") {
    auto ord = metric_solution(catalog("ordinal-sum-example"), cfg);
    CHECK(ord({0.3, 0.4}) == doctest::Approx(0.3125).epsilon(1e-7));

    auto tl = metric_solution(catalog("lukasiewicz"), cfg);
    CHECK(tl({0.3, 0.4}) == doctest::Approx(0.35).epsilon(1e-7));
    CHECK(tl({0.9, 0.9}) == doctest::Approx(0.9).epsilon(1e-8));

    auto rem = metric_solution(catalog("remark44-example"), cfg);
    CHECK(rem({0.75, 0.5}) == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(rem({0.6, 0.9}) == doctest::Approx(0.9).epsilon(1e-10));
    CHECK(rem({0.2, 0.8}) == doctest::Approx(0.2).epsilon(1e-10));

    auto c = metric_solution(catalog("constant", {{"c", "0.7"}}), cfg);
    CHECK(c({0.2, 0.8}) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(metric_solution(catalog("nilpotent-min"), cfg), Unsolvable);

    // a false nondecreasing claim is caught by sampling
    FunctionMeta lying;
    lying.claims_nondecreasing = true;
    FunctionHandle dec(Box(Interval::closed(0, 1), 2),
                       [](std::span<const double> x) { return 2.0 - x[0] - x[1]; },
                       std::move(lying));
    CHECK_THROWS_AS(metric_solution(dec, cfg), NotMonotone);
}

TEST_CASE("correction detection") {
    auto rem = catalog("remark44-example");
    auto corr = detect_correction(rem, 1.0, cfg);
    REQUIRE(corr.has_value());
    CHECK(corr->fix_lower);
    CHECK_FALSE(corr->fix_upper);
    CHECK(corr->level_lo == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(corr->level_hi == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_FALSE(detect_correction(rem, 0.0, cfg).has_value());
    CHECK_FALSE(detect_correction(catalog("ordinal-sum-example"), 0.25, cfg).has_value());
    CHECK_FALSE(detect_correction(catalog("lukasiewicz"), 0.0, cfg).has_value());

    // the dual construction needs the upper-side fix
    auto dual_corr = detect_correction(dualize(rem), 0.0, cfg);
    REQUIRE(dual_corr.has_value());
    CHECK(dual_corr->fix_upper);
    CHECK_FALSE(dual_corr->fix_lower);
}

TEST_CASE("correction path is necessary") {
    auto rem = catalog("remark44-example");
    MonotoneFn diag = diagonal(rem);
    auto without = metric_solution_uncorrected(rem, cfg);
    double u = without({0.75, 0.5});
    double residual = std::abs(diag(u) - rem({0.75, 0.5}));
    CHECK(residual == doctest::Approx(1.0).epsilon(1e-9));

    auto with = metric_solution(rem, cfg);
    CHECK(std::abs(diag(with({0.75, 0.5})) - 1.0) <= cfg.tol_val);
    auto cached = with.correction_for(1.0);
    REQUIRE(cached.has_value());
    CHECK(cached->fix_lower);
}

TEST_CASE("idempotization") {
    auto es = catalog("einstein-sum");
    auto g = idempotize(es, cfg);
    CHECK(g({0.0, 0.6}) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(g({0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-9));

    // algebraic form of the same mean, away from x1 + x2 = 0
    Rng rng(79);
    for (int k = 0; k < 100; ++k) {
        double x1 = rng.next_in(-0.9, 0.9), x2 = rng.next_in(-0.9, 0.9);
        if (std::abs(x1 + x2) < 0.1) continue;
        double algebraic =
            (1.0 + x1 * x2 - std::sqrt((1.0 - x1 * x1) * (1.0 - x2 * x2))) / (x1 + x2);
        Point p{x1, x2};
        CHECK(std::abs(g.at(p) - algebraic) <= 1e-9);
    }

    CHECK_THROWS_AS(idempotize(catalog("lukasiewicz"), cfg), NotIdempotizable);
}

TEST_CASE("conjugated level mean, affine generator") {
    // transporting the mean of the sum through t -> 1-t recovers the
    // arithmetic mean as a level mean of the bounded-sum conjunction
    auto f = sum_function(0.0, 2.0);
    MonotoneFn phi{Interval::closed(0, 1), [](double t) { return 1.0 - t; }};
    auto gp = conjugated_level_mean(f, phi, cfg);
    CHECK(gp({0.7, 0.9}) == doctest::Approx(0.8).epsilon(1e-8));
    CHECK(gp({0.1, 0.5}) == doctest::Approx(0.3).epsilon(1e-8));

    auto tl = catalog("lukasiewicz");
    MonotoneFn tl_diag = diagonal(tl);
    double v = gp({0.7, 0.9});
    CHECK(tl_diag(v) == doctest::Approx(tl({0.7, 0.9})).epsilon(1e-8)); // 0.6

    // the transported solution solves the equation of the transported source
    MonotoneFn src_diag = diagonal(gp.source());
    Rng rng(13);
    for (int k = 0; k < 100; ++k) {
        Point x{rng.next_unit(), rng.next_unit()};
        CHECK(std::abs(src_diag(gp.at(x)) - gp.source().at(x)) <= 1e-7);
    }
    // idempotent by construction
    for (double t : {0.0, 0.3, 0.77, 1.0}) CHECK(gp({t, t}) == doctest::Approx(t).epsilon(1e-7));
}

TEST_CASE("conjugated level mean, identity generator") {
    auto f = catalog("lukasiewicz");
    MonotoneFn id{Interval::closed(0, 1), [](double t) { return t; }};
    auto gp = conjugated_level_mean(f, id, cfg);
    auto m = metric_solution(f, cfg);
    Rng rng(29);
    for (int k = 0; k < 100; ++k) {
        Point x{rng.next_unit(), rng.next_unit()};
        CHECK(std::abs(gp.at(x) - m.at(x)) <= 1e-8);
    }
}

TEST_CASE("conjugated level mean matches idempotization for a strict family") {
    auto f = sum_function(-11.0, 11.0);
    MonotoneFn phi{Interval::open(-1, 1), [](double t) { return std::atanh(t); }};
    auto gp = conjugated_level_mean(f, phi, cfg);
    CHECK(gp({0.0, 0.6}) == doctest::Approx(1.0 / 3.0).epsilon(1e-8));

    auto direct = idempotize(catalog("einstein-sum"), cfg);
    Rng rng(31);
    for (int k = 0; k < 60; ++k) {
        Point x{rng.next_in(-0.95, 0.95), rng.next_in(-0.95, 0.95)};
        CHECK(std::abs(gp.at(x) - direct.at(x)) <= 1e-8);
    }

    MonotoneFn bad{Interval::closed(-1, 1), [](double t) { return t * t; }};
    CHECK_THROWS_AS(conjugated_level_mean(f, bad, cfg), GeneratorNotMonotone);
}

TEST_CASE("restriction changes the mean but not solvability") {
    auto cap_line = rebox(catalog("min-cap"), Interval::whole_line());
    auto m_line = metric_solution(cap_line, cfg);
    CHECK(m_line({0.9, 0.1}) == doctest::Approx(0.5).epsilon(1e-7));

    auto cap_unit = restrict_to(cap_line, Interval::closed(0, 1));
    auto m_unit = metric_solution(cap_unit, cfg);
    CHECK(m_unit({0.9, 0.1}) == doctest::Approx(0.65).epsilon(1e-7));
    CHECK(m_unit({0.2, 0.4}) == doctest::Approx(0.3).epsilon(1e-7));

    // both solve the restricted equation
    MonotoneFn diag = diagonal(cap_unit);
    Rng rng(37);
    for (int k = 0; k < 200; ++k) {
        Point x{rng.next_unit(), rng.next_unit()};
        CHECK(std::abs(diag(m_line.at(x)) - cap_unit.at(x)) <= cfg.tol_solve);
        CHECK(std::abs(diag(m_unit.at(x)) - cap_unit.at(x)) <= cfg.tol_solve);
    }
}

TEST_CASE("strictly increasing value transforms leave the mean unchanged") {
    auto f = catalog("ordinal-sum-example");
    auto m = metric_solution(f, cfg);
    auto mg = metric_solution(compose_value([](double y) { return y * y * y + y; }, f), cfg);
    Rng rng(41);
    for (int k = 0; k < 200; ++k) {
        Point x{rng.next_unit(), rng.next_unit()};
        CHECK(std::abs(mg.at(x) - m.at(x)) <= 1e-8);
    }
}

TEST_CASE("mean commutes with dualization") {
    auto f = catalog("lukasiewicz");
    auto m = metric_solution(f, cfg);
    auto md = metric_solution(dualize(f), cfg);
    Rng rng(43);
    for (int k = 0; k < 200; ++k) {
        Point x{rng.next_unit(), rng.next_unit()};
        Point rx{1.0 - x[0], 1.0 - x[1]};
        CHECK(std::abs(md.at(x) - (1.0 - m.at(rx))) <= 1e-8);
    }
}

TEST_CASE("declared symmetries carry over to the mean") {
    for (const char* name : {"lukasiewicz", "ordinal-sum-example", "remark44-example"}) {
        CAPTURE(name);
        auto f = catalog(name);
        auto m = metric_solution(f, cfg);
        Rng rng(47);
        for (int k = 0; k < 100; ++k) {
            Point x{rng.next_unit(), rng.next_unit()};
            Point sx{x[1], x[0]};
            CHECK(std::abs(m.at(sx) - m.at(x)) <= 1e-8);
        }
    }
}

TEST_CASE("permuted solutions still solve for symmetric sources") {
    auto f = catalog("lukasiewicz");
    auto g = q_solution(f, QIPolicy::midpoint, cfg);
    auto swapped = permute_args(g.as_function(), Permutation::transposition(2, 0, 1));
    MonotoneFn diag = diagonal(f);
    Rng rng(53);
    for (int k = 0; k < 200; ++k) {
        Point x{rng.next_unit(), rng.next_unit()};
        CHECK(std::abs(diag(swapped.at(x)) - f.at(x)) <= cfg.tol_solve);
    }
}

TEST_CASE("one-variable degenerate case") {
    // ramp with a flat stretch: the mean must reproduce the identity
    FunctionMeta meta;
    meta.name = "ramp1d";
    meta.claims_continuous = true;
    meta.monotonicity_verified = true;
    FunctionHandle f(Box(Interval::closed(0, 1), 1),
                     [](std::span<const double> x) {
                         double t = x[0];
                         if (t < 0.25) return t;
                         if (t <= 0.5) return 0.25;
                         return t - 0.25;
                     },
                     std::move(meta));
    auto m = metric_solution(f, cfg);
    Rng rng(59);
    for (int k = 0; k < 200; ++k) {
        double t = rng.next_unit();
        Point x{t};
        CHECK(std::abs(m.at(x) - t) <= 1e-8);
    }
}

TEST_CASE("three-variable mean") {
    auto f = catalog("min", {{"n", "3"}});
    auto m = metric_solution(f, cfg);
    Rng rng(61);
    MonotoneFn diag = diagonal(f);
    for (int k = 0; k < 60; ++k) {
        Point x{rng.next_unit(), rng.next_unit(), rng.next_unit()};
        CHECK(std::abs(diag(m.at(x)) - f.at(x)) <= cfg.tol_solve);
        CHECK(m.at(x) >= min_coord(x) - 1e-9);
        CHECK(m.at(x) <= max_coord(x) + 1e-9);
    }
    Point d{0.4, 0.4, 0.4};
    CHECK(m.at(d) == doctest::Approx(0.4).epsilon(1e-8));
}

TEST_CASE("random monotone tables satisfy the solution contract") {
    // hand-rolled generator: cumulative nonnegative increments along both
    // axes give an arbitrary nondecreasing table
    Rng gen(2024);
    for (int trial = 0; trial < 6; ++trial) {
        CAPTURE(trial);
        const int k = 4 + int(gen.next_below(3));
        MonotoneGridData data;
        data.axis_knots.assign(2, {});
        for (int a = 0; a < 2; ++a)
            for (int i = 0; i < k; ++i)
                data.axis_knots[std::size_t(a)].push_back(double(i) / double(k - 1));
        std::vector<double> row(std::size_t(k), 0.0), prev_row(std::size_t(k), 0.0);
        for (int i = 0; i < k; ++i) {
            double acc = prev_row[0] + (i > 0 ? 0.15 * gen.next_unit() : 0.0);
            for (int j = 0; j < k; ++j) {
                double floor_val = std::max(acc, prev_row[std::size_t(j)]);
                acc = floor_val + 0.1 * gen.next_unit();
                row[std::size_t(j)] = acc;
                data.values.push_back(acc);
            }
            prev_row = row;
        }
        auto f = make_grid_function(std::move(data), "fuzz");
        auto m = metric_solution(f, cfg);
        MonotoneFn diag = diagonal(f);
        Rng rng(500 + std::uint64_t(trial));
        for (int s = 0; s < 80; ++s) {
            Point x{rng.next_unit(), rng.next_unit()};
            CHECK(std::abs(diag(m.at(x)) - f.at(x)) <= cfg.tol_solve);
            CHECK(m.at(x) >= min_coord(x) - 1e-8);
            CHECK(m.at(x) <= max_coord(x) + 1e-8);
        }
        for (int s = 0; s < 20; ++s) {
            double t = rng.next_unit();
            Point d{t, t};
            CHECK(std::abs(m.at(d) - t) <= 1e-8);
        }
    }
}

TEST_CASE("concurrent evaluation agrees with sequential") {
    // the correction cache is the only shared state; hammer it from
    // several threads against fresh sequential values
    auto f = catalog("remark44-example");
    auto m = metric_solution(f, cfg);
    std::vector<Point> pts;
    Rng rng(73);
    for (int k = 0; k < 64; ++k) pts.push_back({rng.next_unit(), rng.next_unit()});
    std::vector<double> expected;
    {
        auto fresh = metric_solution(f, cfg);
        for (const Point& p : pts) expected.push_back(fresh.at(p));
    }
    std::vector<double> got(pts.size(), 0.0);
    {
        std::vector<std::thread> pool;
        for (int t = 0; t < 4; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = std::size_t(t); i < pts.size(); i += 4) got[i] = m.at(pts[i]);
            });
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(got[i] == expected[i]);
}

TEST_CASE("grid-backed functions run through the solver") {
    // tabulated bounded-sum surface on a coarse grid
    MonotoneGridData g;
    g.axis_knots = {{0.0, 0.25, 0.5, 0.75, 1.0}, {0.0, 0.25, 0.5, 0.75, 1.0}};
    for (double a : g.axis_knots[0])
        for (double b : g.axis_knots[1]) g.values.push_back(std::max(0.0, a + b - 1.0));
    auto f = make_grid_function(std::move(g), "tl-table");
    auto m = metric_solution(f, cfg);
    MonotoneFn diag = diagonal(f);
    Rng rng(67);
    for (int k = 0; k < 100; ++k) {
        Point x{rng.next_unit(), rng.next_unit()};
        CHECK(std::abs(diag(m.at(x)) - f.at(x)) <= cfg.tol_solve);
    }
    for (double t : {0.1, 0.5, 0.9}) {
        Point x{t, t};
        CHECK(m.at(x) == doctest::Approx(t).epsilon(1e-7));
    }
}
