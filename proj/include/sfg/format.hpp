#pragma once

#include <cstdio>
#include <string>

namespace sfg {

// 9 significant digits: stable regression diffs in reports and CSV output
inline std::string fmt_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// shortest round-trippable form, for file formats that must reparse exactly
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace sfg
