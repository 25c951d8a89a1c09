#include <doctest.h>

#include <cmath>
#include <sstream>

#include "chisini/chisini.hpp"
#include "chisini/report_io.hpp"

using namespace chisini;

namespace {

const SolverConfig cfg{};

/// Coordinate minimum overridden by the coordinate maximum on an upper
/// sub-box: idempotent, nondecreasing, and discontinuous at the sub-box
/// boundary. The axis-limit conditions are the only ones it violates.
FunctionHandle min_with_jump() {
    FunctionMeta m;
    m.name = "min-with-jump";
    m.symmetries = {Permutation::transposition(2, 0, 1)};
    m.claims_continuous = false;
    m.monotonicity_verified = true;
    m.analytic_diagonal = [](double t) { return t; };
    m.critical_points = {{0.5, 0.7}, {0.7, 0.5}, {0.5, 0.5}, {0.6, 0.6}};
    return FunctionHandle(Box(Interval::closed(0, 1), 2),
                          [](std::span<const double> x) {
                              if (x[0] >= 0.5 && x[1] >= 0.5) return std::max(x[0], x[1]);
                              return std::min(x[0], x[1]);
                          },
                          std::move(m));
}

bool fails_exactly(const ContinuityCertificate& c, const std::string& condition) {
    int fails = int(!c.pinched_ok) + int(!c.inf_attained_ok) + int(!c.sup_attained_ok) +
                int(!c.left_limit_ok) + int(!c.right_limit_ok);
    if (fails != 1 || !c.range_ok) return false;
    if (condition == "pinched") return !c.pinched_ok;
    if (condition == "inf-attained") return !c.inf_attained_ok;
    if (condition == "sup-attained") return !c.sup_attained_ok;
    if (condition == "left-limit") return !c.left_limit_ok;
    if (condition == "right-limit") return !c.right_limit_ok;
    return false;
}

} // namespace

TEST_CASE("certificate: ordinal-sum example fails only the pinch condition") {
    auto cert = continuity_certificate(catalog("ordinal-sum-example"), cfg);
    CHECK_FALSE(cert.pass());
    CHECK(fails_exactly(cert, "pinched"));

    bool witness_on_segment = false;
    for (const auto& v : cert.violations) {
        if (v.condition != "pinched") continue;
        double x1 = std::max(v.where[0], v.where[1]);
        double x2 = std::min(v.where[0], v.where[1]);
        if (x1 > 0.75 && std::abs(x2 - 0.25) < 1e-6) witness_on_segment = true;
    }
    CHECK(witness_on_segment);
}

TEST_CASE("certificate: the correction example fails only infimum attainment") {
    auto cert = continuity_certificate(catalog("remark44-example"), cfg);
    CHECK_FALSE(cert.pass());
    CHECK(fails_exactly(cert, "inf-attained"));
    CHECK_FALSE(cert.diagonal_continuous);
}

TEST_CASE("certificate: the dual correction example fails only supremum attainment") {
    auto cert = continuity_certificate(dualize(catalog("remark44-example")), cfg);
    CHECK_FALSE(cert.pass());
    CHECK(fails_exactly(cert, "sup-attained"));
}

TEST_CASE("certificate: continuous-solution families pass everything") {
    for (const char* name : {"lukasiewicz", "einstein-sum", "min-cap"}) {
        CAPTURE(name);
        auto cert = continuity_certificate(catalog(name), cfg);
        CHECK(cert.pass());
    }
    auto cert = continuity_certificate(catalog("constant", {{"c", "0.25"}}), cfg);
    CHECK(cert.pass());
    CHECK(cert.off_thick_samples == 0); // everything sits in the thick region
}

TEST_CASE("certificate: idempotent function with a jump fails only the axis limits") {
    auto f = min_with_jump();
    auto cert = continuity_certificate(f, cfg);
    CHECK_FALSE(cert.pass());
    CHECK(cert.range_ok);
    CHECK(cert.pinched_ok);
    CHECK(cert.inf_attained_ok);
    CHECK(cert.sup_attained_ok);
    CHECK_FALSE(cert.left_limit_ok);

    auto dual_cert = continuity_certificate(dualize(f), cfg);
    CHECK_FALSE(dual_cert.pass());
    CHECK(dual_cert.pinched_ok);
    CHECK_FALSE(dual_cert.right_limit_ok);
}

TEST_CASE("certificate unsolvable input") {
    CHECK_THROWS_AS(continuity_certificate(catalog("nilpotent-min"), cfg), Unsolvable);
}

TEST_CASE("certificate verdict matches the sampled modulus of the mean") {
    // pass => adjacent-cell jumps of the mean shrink with the grid
    for (const char* name : {"lukasiewicz", "min-cap"}) {
        CAPTURE(name);
        auto f = catalog(name);
        REQUIRE(continuity_certificate(f, cfg).pass());
        auto m = metric_solution(f, cfg).as_function();
        double coarse = max_adjacent_jump(m, 33, cfg);
        double fine = max_adjacent_jump(m, 65, cfg);
        CHECK(fine <= 0.6 * coarse + 1e-9);
    }
    {
        // open interval: measure on a compact interior sub-box
        auto f = catalog("einstein-sum");
        REQUIRE(continuity_certificate(f, cfg).pass());
        auto m = metric_solution(f, cfg);
        FunctionHandle interior = restrict_to(m.as_function(), Interval::closed(-0.9, 0.9));
        double coarse = max_adjacent_jump(interior, 33, cfg);
        double fine = max_adjacent_jump(interior, 65, cfg);
        CHECK(fine <= 0.6 * coarse + 1e-9);
    }
    {
        // fail => the mean jumps near the witness by half the preimage width
        auto f = catalog("ordinal-sum-example");
        auto cert = continuity_certificate(f, cfg);
        REQUIRE_FALSE(cert.pass());
        REQUIRE_FALSE(cert.violations.empty());
        Point w = cert.violations.front().where;
        auto m = metric_solution(f, cfg);
        double expected_gap = 0.5 * (0.5 - 0.25); // half the preimage width at the witness level
        double seen = 0.0;
        const double eps = 1e-6;
        for (int axis = 0; axis < 2; ++axis) {
            Point lo(w), hi(w);
            lo[std::size_t(axis)] = std::max(0.0, lo[std::size_t(axis)] - eps);
            hi[std::size_t(axis)] = std::min(1.0, hi[std::size_t(axis)] + eps);
            seen = std::max(seen, std::abs(m.at(hi) - m.at(lo)));
        }
        CHECK(seen >= expected_gap - 1e-3);
    }
}

TEST_CASE("property suite: metric solution of the bounded-sum conjunction") {
    auto f = catalog("lukasiewicz");
    auto sol = metric_solution(f, cfg);
    auto reports = run_property_suite(f, sol, cfg);
    for (const auto& r : reports) {
        CAPTURE(r.id);
        CHECK(r.pass);
    }
    for (const auto& r : reports)
        if (r.id == "idempotent") CHECK(r.max_residual <= 1e-9);
}

TEST_CASE("property suite: quasi-inverse solution is range-idempotent but not idempotent") {
    auto f = catalog("lukasiewicz");
    auto sol = q_solution(f, QIPolicy::midpoint, cfg);
    CHECK(std::abs(sol({0.3, 0.3}) - 0.25) <= 1e-8);

    auto reports = run_property_suite(f, sol, cfg);
    bool idem_pass = true, range_idem_pass = false, solves_pass = false;
    for (const auto& r : reports) {
        if (r.id == "idempotent") idem_pass = r.pass;
        if (r.id == "range-idempotent") range_idem_pass = r.pass;
        if (r.id == "solves") solves_pass = r.pass;
    }
    CHECK_FALSE(idem_pass);
    CHECK(range_idem_pass);
    CHECK(solves_pass);
}

TEST_CASE("property suite: constant source") {
    auto f = catalog("constant", {{"c", "0"}});
    auto sol = metric_solution(f, cfg);
    auto reports = run_property_suite(f, sol, cfg);
    for (const auto& r : reports) {
        CAPTURE(r.id);
        CHECK(r.pass);
    }
}

TEST_CASE("level-set monotonicity flags the idempotent patch") {
    // splice the identity onto the diagonal of a quasi-inverse solution:
    // idempotent, still solves, no longer nondecreasing
    auto f = catalog("lukasiewicz");
    auto q = q_solution(f, QIPolicy::midpoint, cfg);
    FunctionHandle patched(Box(Interval::closed(0, 1), 2),
                           [q](std::span<const double> x) {
                               if (x[0] == x[1]) return x[0];
                               Point p(x.begin(), x.end());
                               return q.at(p);
                           });
    auto bad = nondecreasing_on_level_sets(f, patched, cfg);
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.counterexamples.empty());

    auto good = nondecreasing_on_level_sets(f, q.as_function(), cfg);
    CHECK(good.pass);
}

TEST_CASE("reports are reproducible bit for bit") {
    auto f = catalog("min-cap");
    auto sol = metric_solution(f, cfg);
    auto a = run_property_suite(f, sol, cfg);
    auto b = run_property_suite(f, sol, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].pass == b[i].pass);
        CHECK(a[i].max_residual == b[i].max_residual); // bitwise equal
        CHECK(a[i].seed == b[i].seed);
    }

    std::string s1 = to_json(continuity_certificate(f, cfg)).dump();
    std::string s2 = to_json(continuity_certificate(f, cfg)).dump();
    CHECK(s1 == s2);
}

TEST_CASE("factorization through a continuous mean") {
    std::string violated;
    auto tl = factor_through_continuous(catalog("lukasiewicz"), cfg, &violated);
    REQUIRE(tl.has_value());
    Rng rng(71);
    for (int k = 0; k < 200; ++k) {
        Point x{rng.next_unit(), rng.next_unit()};
        CHECK(std::abs(tl->outer(tl->mean.at(x)) - catalog("lukasiewicz").at(x)) <= cfg.tol_solve);
    }

    auto ord = factor_through_continuous(catalog("ordinal-sum-example"), cfg, &violated);
    CHECK_FALSE(ord.has_value());
    CHECK(violated == "pinched");

    auto c = factor_through_continuous(catalog("constant", {{"c", "0.7"}}), cfg, &violated);
    REQUIRE(c.has_value());
    Point x{0.2, 0.8};
    CHECK(c->mean.at(x) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(c->outer(c->mean.at(x)) == doctest::Approx(0.7).epsilon(1e-12));

    auto nil = factor_through_continuous(catalog("nilpotent-min"), cfg, &violated);
    CHECK_FALSE(nil.has_value());
    CHECK(violated == "range");
}

TEST_CASE("report serialization shapes") {
    auto f = catalog("lukasiewicz");
    auto solv = check_solvable(f, cfg);
    std::ostringstream text;
    write_text(text, solv);
    CHECK(text.str().find("solvable.range_equal=1") != std::string::npos);

    auto j = to_json(solv);
    CHECK(j["range_equal"] == true);
    CHECK(j.dump() == to_json(check_solvable(f, cfg)).dump()); // stable key order

    auto cert = continuity_certificate(f, cfg);
    std::ostringstream ct;
    write_text(ct, cert);
    CHECK(ct.str().find("cert.pass=1") != std::string::npos);
}
