#include "curvlab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace curvlab::flows {

void PeriodicGrid::validate() const {
  if (n != 2 && n != 3) throw validation_error("PeriodicGrid: n must be 2 or 3");
  if (res < 16) throw validation_error("PeriodicGrid: res must be >= 16");
  if (res % 2 != 0) throw validation_error("PeriodicGrid: res must be even");
  if (!(side > 0.0)) throw validation_error("PeriodicGrid: side must be positive");
}

namespace {

struct AxisOffsets {
  long m2, m1, p1, p2;  // flat-index offsets of the +-1, +-2 neighbours
};

// Neighbour offsets along `axis` for a point with coordinates c, handling wrap.
inline AxisOffsets offsets(const PeriodicGrid& g, const std::array<int, 3>& c, int axis) {
  auto at = [&](int shift) {
    std::array<int, 3> q = c;
    q[axis] = g.wrap(q[axis] + shift);
    return g.index(q[0], q[1], q[2]);
  };
  return {at(-2), at(-1), at(1), at(2)};
}

}  // namespace

void d1_axis(const PeriodicGrid& grid, const std::vector<double>& fld, int stride, int comp,
             int axis, std::vector<double>& out) {
  const long npts = grid.points();
  out.resize(npts);
  const double inv = 1.0 / (12.0 * grid.h());
  for (long p = 0; p < npts; ++p) {
    const auto c = grid.coords(p);
    const AxisOffsets o = offsets(grid, c, axis);
    out[p] = (fld[o.m2 * stride + comp] - 8.0 * fld[o.m1 * stride + comp] +
              8.0 * fld[o.p1 * stride + comp] - fld[o.p2 * stride + comp]) *
             inv;
  }
}

void d2_axis(const PeriodicGrid& grid, const std::vector<double>& fld, int stride, int comp,
             int axis, std::vector<double>& out) {
  const long npts = grid.points();
  out.resize(npts);
  const double inv = 1.0 / (12.0 * grid.h() * grid.h());
  for (long p = 0; p < npts; ++p) {
    const auto c = grid.coords(p);
    const AxisOffsets o = offsets(grid, c, axis);
    out[p] = (-fld[o.m2 * stride + comp] + 16.0 * fld[o.m1 * stride + comp] -
              30.0 * fld[p * stride + comp] + 16.0 * fld[o.p1 * stride + comp] -
              fld[o.p2 * stride + comp]) *
             inv;
  }
}

double sym_det(const double* c, int n) {
  if (n == 2) return c[0] * c[2] - c[1] * c[1];
  // packed order: 00 01 02 11 12 22
  return c[0] * (c[3] * c[5] - c[4] * c[4]) - c[1] * (c[1] * c[5] - c[4] * c[2]) +
         c[2] * (c[1] * c[4] - c[3] * c[2]);
}

void sym_inverse(const double* c, int n, double* out) {
  const double det = sym_det(c, n);
  if (!(std::abs(det) > 0.0) || !std::isfinite(det))
    throw state_error("sym_inverse: singular metric");
  if (n == 2) {
    out[0] = c[2] / det;
    out[1] = -c[1] / det;
    out[2] = c[0] / det;
    return;
  }
  out[0] = (c[3] * c[5] - c[4] * c[4]) / det;
  out[1] = (c[2] * c[4] - c[1] * c[5]) / det;
  out[2] = (c[1] * c[4] - c[2] * c[3]) / det;
  out[3] = (c[0] * c[5] - c[2] * c[2]) / det;
  out[4] = (c[1] * c[2] - c[0] * c[4]) / det;
  out[5] = (c[0] * c[3] - c[1] * c[1]) / det;
}

double sym_min_eigenvalue(const double* c, int n) {
  if (n == 2) {
    const double tr = c[0] + c[2];
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * sym_det(c, 2)));
    return 0.5 * (tr - disc);
  }
  // trigonometric closed form for symmetric 3x3
  const double p1 = c[1] * c[1] + c[2] * c[2] + c[4] * c[4];
  const double q = (c[0] + c[3] + c[5]) / 3.0;
  if (p1 < 1e-30) return std::min({c[0], c[3], c[5]});
  const double p2 = (c[0] - q) * (c[0] - q) + (c[3] - q) * (c[3] - q) + (c[5] - q) * (c[5] - q) +
                    2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  double b[6];
  for (int k = 0; k < 6; ++k) b[k] = c[k];
  b[0] -= q;
  b[3] -= q;
  b[5] -= q;
  for (int k = 0; k < 6; ++k) b[k] /= p;
  const double r = std::clamp(sym_det(b, 3) / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
}

bool sym_positive_definite(const double* c, int n) {
  if (!(c[0] > 0.0)) return false;
  if (n == 2) return sym_det(c, 2) > 0.0;
  if (!(c[0] * c[3] - c[1] * c[1] > 0.0)) return false;
  return sym_det(c, 3) > 0.0;
}

}  // namespace curvlab::flows
