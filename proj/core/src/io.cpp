#include "curvlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace curvlab::io {

namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string csv_format(const CsvTable& table) {
  std::string out;
  for (const auto& row : table) {
    for (size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += needs_quoting(row[k]) ? quote(row[k]) : row[k];
    }
    out += "\r\n";
  }
  return out;
}

void csv_write(const std::string& path, const CsvTable& table) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw validation_error("csv_write: cannot open " + path);
  f << csv_format(table);
}

CsvTable csv_parse(const std::string& text) {
  CsvTable table;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;
  size_t k = 0;
  while (k < text.size()) {
    const char c = text[k];
    if (in_quotes) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field += '"';
          ++k;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
      row_has_content = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      row_has_content = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && k + 1 < text.size() && text[k + 1] == '\n') ++k;
      if (row_has_content || !field.empty()) {
        row.push_back(std::move(field));
        field.clear();
        table.push_back(std::move(row));
        row.clear();
        row_has_content = false;
      }
    } else {
      field += c;
      row_has_content = true;
    }
    ++k;
  }
  if (row_has_content || !field.empty()) {
    row.push_back(std::move(field));
    table.push_back(std::move(row));
  }
  return table;
}

CsvTable csv_read(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw validation_error("csv_read: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return csv_parse(ss.str());
}

std::string format_double(double x) {
  char buf[40];
  // try increasing precision until the value round-trips exactly
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

namespace {
constexpr char kMagic[8] = {'C', 'V', 'L', 'S', 'N', 'A', 'P', '1'};
}

void snapshot_write(const std::string& path, const flows::GridSym& g, double t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw validation_error("snapshot_write: cannot open " + path);
  const int32_t n = g.grid.n, res = g.grid.res;
  const double side = g.grid.side;
  f.write(kMagic, 8);
  f.write(reinterpret_cast<const char*>(&n), 4);
  f.write(reinterpret_cast<const char*>(&res), 4);
  f.write(reinterpret_cast<const char*>(&side), 8);
  f.write(reinterpret_cast<const char*>(&t), 8);
  f.write(reinterpret_cast<const char*>(g.v.data()),
          static_cast<std::streamsize>(g.v.size() * sizeof(double)));
}

Snapshot snapshot_read(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw validation_error("snapshot_read: cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kMagic, 8) != 0)
    throw validation_error("snapshot_read: bad magic in " + path);
  int32_t n = 0, res = 0;
  double side = 0.0, t = 0.0;
  f.read(reinterpret_cast<char*>(&n), 4);
  f.read(reinterpret_cast<char*>(&res), 4);
  f.read(reinterpret_cast<char*>(&side), 8);
  f.read(reinterpret_cast<char*>(&t), 8);
  Snapshot snap;
  snap.t = t;
  snap.g.grid = flows::PeriodicGrid{n, res, side};
  snap.g.grid.validate();
  snap.g.v.resize(snap.g.grid.points() * flows::sym_size(n));
  f.read(reinterpret_cast<char*>(snap.g.v.data()),
         static_cast<std::streamsize>(snap.g.v.size() * sizeof(double)));
  if (!f) throw validation_error("snapshot_read: truncated file " + path);
  return snap;
}

void svg_plot(const std::string& path, const std::vector<double>& x,
              const std::vector<std::vector<double>>& series,
              const std::vector<std::string>& labels, const std::string& title) {
  if (x.empty() || series.empty()) throw validation_error("svg_plot: empty data");
  for (const auto& s : series)
    if (s.size() != x.size()) throw validation_error("svg_plot: series length mismatch");

  const double width = 720, height = 480, margin = 56;
  double xmin = x.front(), xmax = x.front();
  for (double v : x) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  double ymin = series[0][0], ymax = series[0][0];
  for (const auto& s : series)
    for (double v : s) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  auto px = [&](double v) { return margin + (v - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto py = [&](double v) { return height - margin - (v - ymin) / (ymax - ymin) * (height - 2 * margin); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n"
      << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double tx = xmin + (xmax - xmin) * tick / 4.0;
    const double ty = ymin + (ymax - ymin) * tick / 4.0;
    svg << "<text x=\"" << px(tx) << "\" y=\"" << height - margin + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(tx).substr(0, 9)
        << "</text>\n";
    svg << "<text x=\"" << margin - 6 << "\" y=\"" << py(ty) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(ty).substr(0, 9)
        << "</text>\n";
  }
  for (size_t s = 0; s < series.size(); ++s) {
    svg << "<polyline fill=\"none\" stroke=\"" << colors[s % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (size_t k = 0; k < x.size(); ++k) svg << px(x[k]) << "," << py(series[s][k]) << " ";
    svg << "\"/>\n";
    const std::string label = s < labels.size() ? labels[s] : "series";
    svg << "<text x=\"" << width - margin - 6 << "\" y=\"" << margin + 16 * (s + 1)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[s % 6] << "\">" << label
        << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw validation_error("svg_plot: cannot open " + path);
  f << svg.str();
}

}  // namespace curvlab::io
