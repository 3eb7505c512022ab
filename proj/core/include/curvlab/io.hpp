#pragma once

#include <string>
#include <vector>

#include "curvlab/grid.hpp"

namespace curvlab::io {

using CsvTable = std::vector<std::vector<std::string>>;

/// RFC 4180 CSV: fields containing comma, quote or newline are quoted,
/// embedded quotes doubled, rows end with \r\n.
std::string csv_format(const CsvTable& table);
void csv_write(const std::string& path, const CsvTable& table);

/// Full CSV parser (quoted fields, escaped quotes, embedded newlines, CRLF).
CsvTable csv_parse(const std::string& text);
CsvTable csv_read(const std::string& path);

/// Shortest decimal form that round-trips through strtod bit-identically.
std::string format_double(double x);

/// Binary metric snapshot. Layout, little endian:
///   8-byte magic "CVLSNAP1", int32 n, int32 res, float64 side, float64 t,
///   then res^n * n(n+1)/2 float64 values, point-major (x fastest), packed
///   upper-triangle components contiguous per point.
void snapshot_write(const std::string& path, const flows::GridSym& g, double t);
struct Snapshot {
  flows::GridSym g;
  double t = 0.0;
};
Snapshot snapshot_read(const std::string& path);

/// Minimal SVG 1.1 polyline plot: one polyline per series, light axes.
void svg_plot(const std::string& path, const std::vector<double>& x,
              const std::vector<std::vector<double>>& series,
              const std::vector<std::string>& labels, const std::string& title);

}  // namespace curvlab::io
