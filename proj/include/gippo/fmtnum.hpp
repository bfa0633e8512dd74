#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace gippo {

// All emitted files must be byte-stable: same values in, same bytes out,
// independent of locale or platform printf quirks beyond IEEE doubles.

// Up to 9 significant digits, trailing-zero free ("%.9g"), -0 normalized.
inline std::string fmt_g9(double v) {
    if (v == 0.0) v = 0.0;  // collapse -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// Fixed decimals (coordinates, E values).
inline std::string fmt_fixed(double v, int decimals) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    // "-0.00000" can appear when v is a tiny negative; normalize it.
    for (const char* c = buf; *c; ++c) {
        if (*c >= '1' && *c <= '9') return buf;
    }
    if (buf[0] == '-') return buf + 1;
    return buf;
}

// Snap to the nearest value fmt_g9 can represent. Idempotent (9 significant
// digits round-trip exactly through a double), so a value that already came
// out of a file stays put. Geometry producers snap their outputs with this;
// that way a pipeline run in memory and one run through files sees
// bit-identical coordinates, and edge weights compare equal instead of
// differing by serialization rounding.
inline double quantize_g9(double v) {
    return std::strtod(fmt_g9(v).c_str(), nullptr);
}

// Shortest natural form for feeds and temperatures ("%g").
inline std::string fmt_g(double v) {
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace gippo
