#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace chisini {

/// Locale-independent decimal rendering: the shortest form that parses back
/// to the same double, capped at 12 significant digits.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    for (int prec = 1; prec <= 12; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace chisini
