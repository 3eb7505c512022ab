#pragma once

#include <optional>

#include "curvlab/grid.hpp"

namespace curvlab::flows {

struct CurvatureFields {
  GridSym ricci;
  GridScalar scalar;
};

/// Christoffel symbols, Ricci tensor and scalar curvature from a metric field
/// by 4th-order centered differences with periodic wrap. The two ambiguous
/// derivative terms are symmetrized so the discrete Ricci tensor is exactly
/// symmetric. Throws state_error if positive definiteness is lost.
CurvatureFields curvature_from_grid(const GridSym& g);

/// X^i = g^{ij} g^{pq} ( -d_p h_{qj} + 1/2 d_j h_{pq} ) with h = g - gbar and
/// flat background covariant derivatives reducing to partials.
GridVec bianchi_vector(const GridSym& g, const GridSym& background);

/// (L_X g)_{ab} = X^c d_c g_{ab} + g_{cb} d_a X^c + g_{ac} d_b X^c.
GridSym lie_derivative(const GridVec& x, const GridSym& g);

struct FlowState {
  double t = 0.0;
  GridSym g;
  std::optional<GridScalar> f;  // weight for the weighted total
  GridSym background;           // reference metric for the DeTurck vector
  double lambda = 0.0;          // soliton constant (0 on flat tori)
};

FlowState make_flow_state(const GridSym& g, std::optional<GridScalar> f = std::nullopt);

/// Largest stable explicit step: cfl_factor * h^2 / max(1, sup eig g^{-1}).
double cfl_dt(const GridSym& g, double cfl_factor = 0.1);
void check_cfl(const GridSym& g, double dt);    // throws config_error
void check_positive(const GridSym& g);          // throws state_error

/// One explicit RK4 step of d/dt g = -2 Ric(g) - L_{X(g - gbar)} g.
FlowState rde_step(const FlowState& s, double dt);

/// One explicit RK4 step of d/dt g = -2 Ric(g).
FlowState ricci_flow_step(const FlowState& s, double dt);

/// Joint RK4 step of the Ricci flow coupled with d/dt f = Laplace_{g_t} f.
FlowState coupled_ricci_heat_step(const FlowState& s, double dt);

/// Scalar 2-D reduction d/dt u = e^{-u} Laplace u for g = e^u g_flat.
GridScalar conformal_ricci_flow_2d_step(const GridScalar& u, double dt);

/// One RK4 step of d/dt f = Laplace_g f against a static metric.
GridScalar heat_flow_step(const GridScalar& f, const GridSym& g, double dt);

/// Laplace-Beltrami of f in flux form, 4th-order stencils.
GridScalar laplace_beltrami(const GridScalar& f, const GridSym& g);

/// Metric from a conformal scalar field: g = e^{u} delta (n = 2 convention)
/// or g = u^{4/(n-2)} delta for n >= 3.
GridSym conformal_metric_from_scalar(const GridScalar& u, bool exponential);

double total_scalar(const GridSym& g);
double weighted_total(const FlowState& s);  // int R e^{-f} dvol (f absent => plain total)

/// Analytic right side of d/dt int R e^{-f} dvol along Ricci flow + heat flow:
///   int (2|Ric|^2 - R^2) e^{-f} dvol - int (2 Lap f - |grad f|^2) R e^{-f} dvol.
double evolution_identity_rhs(const FlowState& s);

/// |centered-difference d/dt of the weighted total - analytic RHS| / (|RHS|+1),
/// with the derivative probed across two forward windows of length `window`.
double evolution_identity_residual(const FlowState& s, double window);

/// min over the grid of n |Ric|^2 - R^2 (Cauchy-Schwarz says >= 0).
double cauchy_schwarz_check(const GridSym& g);

/// total0 * (1 - 2 lambda t)^{n/2 - 1}; throws past the extinction time.
double soliton_total_scaling(double total0, double lambda, double t, int n);

/// Sample points advected by the DeTurck vector field; one point per node.
struct DiffeoTrack {
  PeriodicGrid grid;
  std::vector<double> pos;  // npts * n, wrapped into [0, side)
};

DiffeoTrack identity_track(const PeriodicGrid& grid);

/// Advect the track through the frozen Bianchi field of s (one RK4 step).
DiffeoTrack deturck_diffeo_step(const DiffeoTrack& track, const FlowState& s, double dt);

/// Advance metric and track together with one joint RK4 step of the RDE and
/// the advection ODE (keeps the pair 4th-order consistent).
void advance_rde_with_track(FlowState& s, DiffeoTrack& track, double dt);

/// Pulled-back metric (Phi* g)(p) = J^T g(Phi(p)) J with J estimated by
/// 4th-order differences of the particle displacement field.
GridSym pullback_metric(const DiffeoTrack& track, const GridSym& g);

/// Compose a scalar field with the track: (f o Phi)(p) = f(Phi(p)).
GridScalar compose_with_track(const DiffeoTrack& track, const GridScalar& f);

/// Periodic cubic-Lagrange interpolation of one packed component.
double interpolate(const PeriodicGrid& grid, const std::vector<double>& fld, int stride, int comp,
                   const double* point);

/// Flat metric plus a smooth symmetric mode-k perturbation (SPD for moderate
/// amplitudes; check_positive guards the rest).
GridSym perturbed_flat_metric(const PeriodicGrid& grid, double amplitude, int k = 1);

/// amplitude * cos(2 pi k x_axis / side).
GridScalar cosine_field(const PeriodicGrid& grid, double amplitude, int axis, int k = 1);

struct CauchySchwarzAudit {
  double min_value = 0.0;   // min over grid of n |Ric|^2 - R^2
  double max_ric_sq = 0.0;  // scale for the tolerance
};
CauchySchwarzAudit cauchy_schwarz_audit(const GridSym& g);

}  // namespace curvlab::flows
