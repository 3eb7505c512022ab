#pragma once

#include <array>
#include <vector>

#include "curvlab/errors.hpp"

namespace curvlab::flows {

/// Uniform periodic grid on the flat torus [0, side)^n, n in {2, 3}.
struct PeriodicGrid {
  int n = 2;
  int res = 32;
  double side = 1.0;

  void validate() const;
  double h() const { return side / res; }
  long points() const {
    long p = 1;
    for (int k = 0; k < n; ++k) p *= res;
    return p;
  }
  int wrap(int k) const {
    k %= res;
    return k < 0 ? k + res : k;
  }
  long index(int x, int y, int z = 0) const {
    return (n == 3) ? (static_cast<long>(z) * res + y) * res + x
                    : static_cast<long>(y) * res + x;
  }
  std::array<int, 3> coords(long p) const {
    std::array<int, 3> c{0, 0, 0};
    c[0] = static_cast<int>(p % res);
    c[1] = static_cast<int>((p / res) % res);
    if (n == 3) c[2] = static_cast<int>(p / (static_cast<long>(res) * res));
    return c;
  }
  bool compatible(const PeriodicGrid& o) const {
    return n == o.n && res == o.res && side == o.side;
  }
};

/// Number of independent components of a symmetric n x n matrix.
inline int sym_size(int n) { return n * (n + 1) / 2; }

/// Index of component (i, j), i <= j after swap, in packed symmetric storage.
inline int sym_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * (2 * n - i - 1) / 2 + j;
}

struct GridScalar {
  PeriodicGrid grid;
  std::vector<double> v;

  GridScalar() = default;
  explicit GridScalar(const PeriodicGrid& g) : grid(g), v(g.points(), 0.0) {}
  double& at(long p) { return v[p]; }
  double at(long p) const { return v[p]; }
};

/// Symmetric 2-tensor field, packed components per grid point.
struct GridSym {
  PeriodicGrid grid;
  std::vector<double> v;

  GridSym() = default;
  explicit GridSym(const PeriodicGrid& g)
      : grid(g), v(g.points() * sym_size(g.n), 0.0) {}
  int ncomp() const { return sym_size(grid.n); }
  double& at(long p, int c) { return v[p * ncomp() + c]; }
  double at(long p, int c) const { return v[p * ncomp() + c]; }
  double at(long p, int i, int j) const { return v[p * ncomp() + sym_index(grid.n, i, j)]; }
};

/// Vector field, n components per grid point.
struct GridVec {
  PeriodicGrid grid;
  std::vector<double> v;

  GridVec() = default;
  explicit GridVec(const PeriodicGrid& g) : grid(g), v(g.points() * g.n, 0.0) {}
  double& at(long p, int c) { return v[p * grid.n + c]; }
  double at(long p, int c) const { return v[p * grid.n + c]; }
};

/// 4th-order centered first derivative of one packed component along an axis.
void d1_axis(const PeriodicGrid& grid, const std::vector<double>& fld, int stride, int comp,
             int axis, std::vector<double>& out);

/// 4th-order centered second derivative (single axis).
void d2_axis(const PeriodicGrid& grid, const std::vector<double>& fld, int stride, int comp,
             int axis, std::vector<double>& out);

// Pointwise symmetric linear algebra on packed components (n <= 3).
double sym_det(const double* c, int n);
void sym_inverse(const double* c, int n, double* out);  // throws state_error when singular
double sym_min_eigenvalue(const double* c, int n);
bool sym_positive_definite(const double* c, int n);

}  // namespace curvlab::flows
