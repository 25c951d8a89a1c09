// Command-line front end: evaluate solutions, export contour grids, run
// solvability/continuity checks and property suites, idempotize functions.
//
// Exit codes: 0 ok, 2 unsolvable, 3 property/certificate failure,
// 4 usage/input error. Every nonzero exit prints a one-line
// machine-parsable reason as the last line.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chisini/chisini.hpp"
#include "chisini/report_io.hpp"

using namespace chisini;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnsolvable = 2;
constexpr int kExitPropertyFail = 3;
constexpr int kExitUsage = 4;

struct CliError {
    int code;
    std::string kind;
    std::string detail;
};

[[noreturn]] void fail(int code, const std::string& kind, const std::string& detail) {
    throw CliError{code, kind, detail};
}

struct FunctionSpec {
    std::string text;
    std::string name;   // catalog name, empty for grid files
    Params params;
    bool from_file = false;
};

FunctionSpec parse_spec(const std::string& text) {
    FunctionSpec s;
    s.text = text;
    if (!text.empty() && text[0] == '@') {
        s.from_file = true;
        s.name = text.substr(1);
        return s;
    }
    auto colon = text.find(':');
    s.name = text.substr(0, colon);
    if (colon != std::string::npos) {
        std::stringstream rest(text.substr(colon + 1));
        std::string kv;
        while (std::getline(rest, kv, ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                fail(kExitUsage, "bad-spec", "expected key=val in '" + kv + "'");
            s.params[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
    }
    return s;
}

double parse_coord(const std::string& tok) {
    if (tok == "inf" || tok == "+inf") return kInf;
    if (tok == "-inf") return -kInf;
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (...) {
        fail(kExitUsage, "bad-number", "cannot parse '" + tok + "'");
    }
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_coord(tok));
    return out;
}

struct CommonOpts {
    std::string spec;
    std::string box;
    std::string out;
    std::string format = "text";
    SolverConfig cfg;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_spec = true) {
    if (needs_spec)
        cmd->add_option("spec", o.spec, "catalog name[:k=v,...] or @grid-file")->required();
    cmd->add_option("--box", o.box, "override the domain interval: lo,hi (inf allowed)");
    cmd->add_option("--tol-val", o.cfg.tol_val, "function-value tolerance");
    cmd->add_option("--tol-dom", o.cfg.tol_dom, "domain-coordinate tolerance");
    cmd->add_option("--oracle-grid", o.cfg.oracle_grid, "brute-force oracle resolution");
    cmd->add_option("--scan", o.cfg.levelset_scan, "level-set scan resolution");
    cmd->add_option("--seed", o.cfg.rng_seed, "RNG seed for sampled checks");
    cmd->add_option("--out", o.out, "write output to this file instead of stdout");
    cmd->add_option("--format", o.format, "output format: text | json-text | csv")
        ->check(CLI::IsMember({"text", "json-text", "csv"}));
}

FunctionHandle build_function(const CommonOpts& o) {
    o.cfg.validate();
    FunctionSpec spec = parse_spec(o.spec);
    FunctionHandle f;
    if (spec.from_file) {
        f = make_grid_function(load_monotone_grid(spec.name), spec.name);
    } else {
        f = catalog(spec.name, spec.params);
    }
    if (!o.box.empty()) {
        auto coords = parse_csv_doubles(o.box);
        if (coords.size() != 2) fail(kExitUsage, "bad-box", "--box expects lo,hi");
        bool lo_closed = std::isfinite(coords[0]), hi_closed = std::isfinite(coords[1]);
        f = rebox(f, Interval::make(coords[0], coords[1], lo_closed, hi_closed));
    }
    return f;
}

std::vector<Point> parse_points(const FunctionHandle& f, const std::vector<std::string>& raw,
                                const SolverConfig& cfg) {
    if (raw.empty()) fail(kExitUsage, "no-points", "at least one -p x1,x2,... is required");
    std::vector<Point> pts;
    for (const auto& text : raw) {
        Point p = parse_csv_doubles(text);
        if (int(p.size()) != f.arity())
            fail(kExitUsage, "bad-point",
                 "point '" + text + "' has wrong arity (expected " +
                     std::to_string(f.arity()) + ")");
        if (!f.box().contains(p, cfg.tol_dom))
            fail(kExitUsage, "point-out-of-box", "point '" + text + "' is outside the box");
        pts.push_back(std::move(p));
    }
    return pts;
}

std::ostream& open_sink(const CommonOpts& o, std::ofstream& file) {
    if (o.out.empty()) return std::cout;
    file.open(o.out, std::ios::binary); // binary keeps output byte-identical
    if (!file) fail(kExitUsage, "bad-output", "cannot open " + o.out);
    return file;
}

// ---- subcommands ----------------------------------------------------------

int run_catalog(const CommonOpts& o) {
    std::ofstream file;
    std::ostream& os = open_sink(o, file);
    if (o.format == "json-text") {
        OrderedJson j = OrderedJson::array();
        for (const auto& e : catalog_entries())
            j.push_back({{"name", e.name}, {"params", e.params}, {"brief", e.brief}});
        os << j.dump(2) << "\n";
    } else {
        for (const auto& e : catalog_entries()) {
            os << e.name;
            if (!e.params.empty()) os << ":" << e.params;
            os << "  -  " << e.brief << "\n";
        }
    }
    return kExitOk;
}

int run_eval(const CommonOpts& o, const std::vector<std::string>& raw_points) {
    FunctionHandle f = build_function(o);
    auto pts = parse_points(f, raw_points, o.cfg);
    ChisiniSolution m = metric_solution(f, o.cfg);
    std::ofstream file;
    std::ostream& os = open_sink(o, file);
    OrderedJson arr = OrderedJson::array();
    for (const Point& p : pts) {
        LevelData d = level_data(f, p, o.cfg);
        double mf = m.at(p);
        if (o.format == "json-text") {
            OrderedJson j;
            j["point"] = p;
            j["F"] = d.value;
            j["MF"] = mf;
            j["a"] = d.level_lo;
            j["b"] = d.level_hi;
            j["dlt"] = d.dist_below;
            j["dgt"] = d.dist_above;
            j["in_omega"] = d.in_omega;
            arr.push_back(j);
        } else {
            os << "point=" << format_point(p) << " F=" << format_number(d.value)
               << " MF=" << format_number(mf) << " a=" << format_number(d.level_lo)
               << " b=" << format_number(d.level_hi) << " dlt=" << format_number(d.dist_below)
               << " dgt=" << format_number(d.dist_above) << " in_omega=" << (d.in_omega ? 1 : 0)
               << "\n";
        }
    }
    if (o.format == "json-text") os << arr.dump(2) << "\n";
    return kExitOk;
}

int run_grid(const CommonOpts& o, int resolution, const std::string& which) {
    if (resolution < 2) fail(kExitUsage, "bad-resolution", "-r must be >= 2");
    if (which != "F" && which != "MF" && which != "both")
        fail(kExitUsage, "bad-which", "--which must be F, MF or both");
    FunctionHandle f = build_function(o);
    if (f.arity() != 2) fail(kExitUsage, "bad-arity", "grid export needs a 2-ary function");
    bool want_f = which != "MF", want_m = which != "F";
    std::optional<ChisiniSolution> m;
    if (want_m) m = metric_solution(f, o.cfg);

    Box w = f.box().working(o.cfg);
    const double lo = w.interval.lo, span = w.interval.span();
    std::ofstream file;
    std::ostream& os = open_sink(o, file);
    os << "x1,x2";
    if (want_f) os << ",F";
    if (want_m) os << ",MF";
    os << "\n";
    Point p(2);
    for (int i = 0; i < resolution; ++i) {
        p[0] = lo + span * double(i) / double(resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            p[1] = lo + span * double(j) / double(resolution - 1);
            os << format_number(p[0]) << "," << format_number(p[1]);
            if (want_f) os << "," << format_number(f.at(p));
            if (want_m) os << "," << format_number(m->at(p));
            os << "\n";
        }
    }
    return kExitOk;
}

int run_check(const CommonOpts& o) {
    FunctionHandle f = build_function(o);
    SolvabilityReport solv = check_solvable(f, o.cfg);
    std::ofstream file;
    std::ostream& os = open_sink(o, file);
    if (!solv.range_equal) {
        if (o.format == "json-text")
            os << OrderedJson{{"solvability", to_json(solv)}}.dump(2) << "\n";
        else
            write_text(os, solv);
        std::string detail = "diagonal range misses value " + format_number(solv.witness_value);
        std::cout << "error code=" << kExitUnsolvable << " kind=unsolvable detail=\"" << detail
                  << "\"\n";
        return kExitUnsolvable;
    }
    ContinuityCertificate cert = continuity_certificate(f, o.cfg);
    if (o.format == "json-text") {
        OrderedJson j;
        j["solvability"] = to_json(solv);
        j["certificate"] = to_json(cert);
        os << j.dump(2) << "\n";
    } else {
        write_text(os, solv);
        write_text(os, cert);
    }
    if (!cert.pass()) {
        std::cout << "error code=" << kExitPropertyFail << " kind=certificate-fail detail=\""
                  << "condition " << cert.first_violation() << " violated\"\n";
        return kExitPropertyFail;
    }
    return kExitOk;
}

int run_verify(const CommonOpts& o, const std::string& kind) {
    FunctionHandle f = build_function(o);
    ChisiniSolution sol = [&] {
        if (kind == "metric") return metric_solution(f, o.cfg);
        if (kind == "q-mid") return q_solution(f, QIPolicy::midpoint, o.cfg);
        if (kind == "q-left") return q_solution(f, QIPolicy::leftmost, o.cfg);
        if (kind == "q-right") return q_solution(f, QIPolicy::rightmost, o.cfg);
        fail(kExitUsage, "bad-kind", "--kind must be metric, q-mid, q-left or q-right");
    }();
    auto reports = run_property_suite(f, sol, o.cfg);
    std::ofstream file;
    std::ostream& os = open_sink(o, file);
    bool all_pass = true;
    if (o.format == "json-text") {
        OrderedJson arr = OrderedJson::array();
        for (const auto& r : reports) {
            arr.push_back(to_json(r));
            all_pass = all_pass && r.pass;
        }
        os << arr.dump(2) << "\n";
    } else {
        for (const auto& r : reports) {
            write_text(os, r);
            all_pass = all_pass && r.pass;
        }
    }
    if (!all_pass) {
        std::string first;
        for (const auto& r : reports)
            if (!r.pass) {
                first = r.id;
                break;
            }
        std::cout << "error code=" << kExitPropertyFail << " kind=property-fail detail=\""
                  << first << " failed\"\n";
        return kExitPropertyFail;
    }
    return kExitOk;
}

int run_idempotize(const CommonOpts& o, const std::vector<std::string>& raw_points,
                   bool closed_form_check) {
    FunctionHandle f = build_function(o);
    auto pts = parse_points(f, raw_points, o.cfg);
    ChisiniSolution g = idempotize(f, o.cfg);
    FunctionSpec spec = parse_spec(o.spec);
    std::ofstream file;
    std::ostream& os = open_sink(o, file);
    bool mismatch = false;
    for (const Point& p : pts) {
        double v = g.at(p);
        os << "point=" << format_point(p) << " G=" << format_number(v);
        if (closed_form_check) {
            auto closed = catalog_mean_closed_form(spec.name, spec.params, p);
            if (closed) {
                double diff = std::abs(v - *closed);
                os << " closed_form=" << format_number(*closed)
                   << " diff=" << format_number(diff);
                if (diff > 1e-9) mismatch = true;
            } else {
                os << " closed_form=unavailable";
            }
        }
        os << "\n";
    }
    if (mismatch) {
        std::cout << "error code=" << kExitPropertyFail
                  << " kind=closed-form-mismatch detail=\"idempotization disagrees with "
                     "closed form\"\n";
        return kExitPropertyFail;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equalizer-equation toolkit: means, level-set solutions, certificates"};
    app.require_subcommand(1);

    CommonOpts opt_catalog, opt_eval, opt_grid, opt_check, opt_verify, opt_idem;
    std::vector<std::string> eval_points, idem_points;
    int grid_res = 101;
    std::string grid_which = "both";
    std::string verify_kind = "metric";
    bool closed_form_check = false;

    auto* c_catalog = app.add_subcommand("catalog", "list built-in functions");
    add_common(c_catalog, opt_catalog, false);

    auto* c_eval = app.add_subcommand("eval", "evaluate F, its mean solution and level data");
    add_common(c_eval, opt_eval);
    c_eval->add_option("-p,--point", eval_points, "evaluation point x1,x2,...")->required();

    auto* c_grid = app.add_subcommand("grid", "export an evenly spaced value grid as CSV");
    add_common(c_grid, opt_grid);
    c_grid->add_option("-r,--resolution", grid_res, "points per axis (corners included)");
    c_grid->add_option("--which", grid_which, "columns to export: F | MF | both");

    auto* c_check = app.add_subcommand("check", "solvability report and continuity certificate");
    add_common(c_check, opt_check);

    auto* c_verify = app.add_subcommand("verify", "run the property suite for a solution");
    add_common(c_verify, opt_verify);
    c_verify->add_option("--kind", verify_kind, "solution kind: metric | q-mid | q-left | q-right");

    auto* c_idem = app.add_subcommand("idempotize", "invert the diagonal along F");
    add_common(c_idem, opt_idem);
    c_idem->add_option("-p,--point", idem_points, "evaluation point x1,x2,...")->required();
    c_idem->add_flag("--closed-form-check", closed_form_check,
                     "cross-check against catalog closed forms when available");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        std::cout << "error code=" << kExitUsage << " kind=usage detail=\"" << e.what() << "\"\n";
        return kExitUsage;
    }

    try {
        if (c_catalog->parsed()) return run_catalog(opt_catalog);
        if (c_eval->parsed()) return run_eval(opt_eval, eval_points);
        if (c_grid->parsed()) return run_grid(opt_grid, grid_res, grid_which);
        if (c_check->parsed()) return run_check(opt_check);
        if (c_verify->parsed()) return run_verify(opt_verify, verify_kind);
        if (c_idem->parsed()) return run_idempotize(opt_idem, idem_points, closed_form_check);
    } catch (const CliError& e) {
        std::cout << "error code=" << e.code << " kind=" << e.kind << " detail=\"" << e.detail
                  << "\"\n";
        return e.code;
    } catch (const Unsolvable& e) {
        std::cout << "error code=" << kExitUnsolvable << " kind=unsolvable detail=\"" << e.what()
                  << "\"\n";
        return kExitUnsolvable;
    } catch (const InvalidInput& e) {
        std::cout << "error code=" << kExitUsage << " kind=invalid-input detail=\"" << e.what()
                  << "\"\n";
        return kExitUsage;
    } catch (const NotIdempotizable& e) {
        std::cout << "error code=" << kExitUsage << " kind=not-idempotizable detail=\"" << e.what()
                  << "\"\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cout << "error code=" << kExitUsage << " kind=error detail=\"" << e.what() << "\"\n";
        return kExitUsage;
    }
    return kExitOk;
}
