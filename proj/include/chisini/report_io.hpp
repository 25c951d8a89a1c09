#pragma once

#include <ostream>
#include <sstream>

#include "chisini/format.hpp"
#include "chisini/verify.hpp"

#include <json.hpp>

namespace chisini {

using OrderedJson = nlohmann::ordered_json;

inline std::string format_point(const Point& p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ",";
        out += format_number(p[i]);
    }
    return out + ")";
}

// --- line-oriented plain text -------------------------------------------

inline void write_text(std::ostream& os, const SolvabilityReport& r) {
    os << "solvable.range_equal=" << (r.range_equal ? 1 : 0) << "\n";
    os << "solvable.ran_diag=[" << format_number(r.ran_diag.lo) << ","
       << format_number(r.ran_diag.hi) << "]\n";
    os << "solvable.ran_f=[" << format_number(r.ran_f.lo) << "," << format_number(r.ran_f.hi)
       << "]\n";
    if (r.witness)
        os << "solvable.witness=" << format_point(*r.witness)
           << " solvable.witness_value=" << format_number(r.witness_value) << "\n";
    if (r.unique) os << "solvable.unique=" << (*r.unique ? 1 : 0) << " (sampled evidence)\n";
    os << "solvable.samples=" << r.samples << "\n";
    os << "solvable.monotone=" << (r.monotonicity_ok ? 1 : 0) << "\n";
}

inline void write_text(std::ostream& os, const ContinuityCertificate& c) {
    auto flag = [&](const char* name, bool v) { os << "cert." << name << "=" << (v ? 1 : 0) << "\n"; };
    flag("range", c.range_ok);
    flag("pinched", c.pinched_ok);
    flag("inf-attained", c.inf_attained_ok);
    flag("sup-attained", c.sup_attained_ok);
    flag("left-limit", c.left_limit_ok);
    flag("right-limit", c.right_limit_ok);
    flag("pass", c.pass());
    os << "cert.diagonal_continuous=" << (c.diagonal_continuous ? 1 : 0) << "\n";
    os << "cert.samples=" << c.samples << " cert.off_thick_samples=" << c.off_thick_samples
       << "\n";
    os << "cert.sample_plan=\"" << c.sample_plan << "\"\n";
    for (const auto& v : c.violations)
        os << "cert.violation condition=" << v.condition << " at=" << format_point(v.where)
           << " note=\"" << v.note << "\"\n";
}

inline void write_text(std::ostream& os, const PropertyReport& r) {
    os << "prop." << r.id << " pass=" << (r.pass ? 1 : 0)
       << " max_residual=" << format_number(r.max_residual) << " samples=" << r.samples_used
       << " seed=" << r.seed;
    if (!r.counterexamples.empty()) os << " counterexample=" << format_point(r.counterexamples[0]);
    if (!r.note.empty()) os << " note=\"" << r.note << "\"";
    os << "\n";
}

// --- structured json-text (stable key order) ------------------------------

inline OrderedJson to_json(const SolvabilityReport& r) {
    OrderedJson j;
    j["range_equal"] = r.range_equal;
    j["ran_diag"] = {r.ran_diag.lo, r.ran_diag.hi};
    j["ran_f"] = {r.ran_f.lo, r.ran_f.hi};
    if (r.witness) {
        j["witness"] = *r.witness;
        j["witness_value"] = r.witness_value;
    }
    if (r.unique) j["unique"] = *r.unique;
    j["samples"] = r.samples;
    j["monotone"] = r.monotonicity_ok;
    return j;
}

inline OrderedJson to_json(const ContinuityCertificate& c) {
    OrderedJson j;
    j["range"] = c.range_ok;
    j["pinched"] = c.pinched_ok;
    j["inf_attained"] = c.inf_attained_ok;
    j["sup_attained"] = c.sup_attained_ok;
    j["left_limit"] = c.left_limit_ok;
    j["right_limit"] = c.right_limit_ok;
    j["pass"] = c.pass();
    j["diagonal_continuous"] = c.diagonal_continuous;
    j["samples"] = c.samples;
    j["off_thick_samples"] = c.off_thick_samples;
    j["sample_plan"] = c.sample_plan;
    j["violations"] = OrderedJson::array();
    for (const auto& v : c.violations) {
        OrderedJson jv;
        jv["condition"] = v.condition;
        jv["at"] = v.where;
        jv["note"] = v.note;
        j["violations"].push_back(jv);
    }
    return j;
}

inline OrderedJson to_json(const PropertyReport& r) {
    OrderedJson j;
    j["id"] = r.id;
    j["pass"] = r.pass;
    j["max_residual"] = r.max_residual;
    j["samples"] = r.samples_used;
    j["seed"] = r.seed;
    if (!r.counterexamples.empty()) j["counterexample"] = r.counterexamples[0];
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

} // namespace chisini
