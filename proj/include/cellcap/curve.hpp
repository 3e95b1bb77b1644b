// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellcap {

inline constexpr char const* kArtifactVersion = "cellcap 0.1.0";

/// One (x, y) sample curve; the universal output of sweeps and PDF grids.
struct CurveData {
    std::string series;
    std::vector<double> x;
    std::vector<double> y;
};

/// Shortest exact decimal form with 17 significant digits; locale-free, so
/// CSV bytes are reproducible.
inline std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Writes curves as CSV: `# key=value` comment lines (sorted keys, always
/// including the artifact version), a `x,y,series` header, then one row per
/// sample in curve order. LF line endings, UTF-8, 17 significant digits.
inline void write_curves_csv(std::string const& path, std::vector<CurveData> const& curves,
                             std::map<std::string, std::string> const& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "# artifact=" << kArtifactVersion << "\n";
    for (auto const& [k, v] : params) out << "# " << k << "=" << v << "\n";
    out << "x,y,series\n";
    for (auto const& c : curves) {
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            out << format_double(c.x[i]) << ',' << format_double(c.y[i]) << ',' << c.series
                << "\n";
        }
    }
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace cellcap
