/// @file lagrangian.hpp
/// @brief Flow maps of time-dependent velocity fields and the change of
///        coordinates that turns the moving-domain problem into a fixed-grid
///        one.
///
/// For a velocity field u(t,x) the flow map is X(t,y) = y + int_0^t
/// u(s, X(s,y)) ds.  With J = dX/dy and E = I - J^{-1}, space derivatives
/// transform as grad_x f = (I - E)^T-contracted grad_y of the composed field,
/// and the compressible system in the new coordinates keeps a fixed-grid
/// principal part plus right-hand sides G (mass) and F (momentum) collecting
/// every coordinate-change correction.
#pragma once

#include <vector>

#include "tns/constitutive.hpp"
#include "tns/field.hpp"
#include "tns/grid.hpp"
#include "tns/models.hpp"
#include "tns/norms.hpp"

namespace tns {

/// Discrete flow map sampled on the frames of a velocity series.
struct FlowMap {
  TimeGrid tg;
  std::vector<Field> disp;     ///< displacement X(t_i, y) - y (vector)
  std::vector<Field> jac;      ///< J = I + grad disp (matrix)
  std::vector<Field> defect;   ///< E = I - J^{-1} (matrix)
  std::vector<Field> det_jac;  ///< det J (scalar)
  std::vector<real> sigma;     ///< max_y | int_0^{t_i} grad u(s, X(s,y)) ds |_F
  real sigma_threshold = 0.5;
  bool sigma_ok = true;        ///< all sigma[i] <= sigma_threshold
};

/// Integrate the flow map of a sampled velocity with the implicit trapezoid
/// rule, solving each step by Picard iteration (predictor: explicit Euler).
/// Velocity values between grid points come from Fourier evaluation.  Use
/// this when u(t,x) gives the velocity at the current position x.
FlowMap flow_map(const Grid& g, const Series& u, real sigma_threshold = 0.5,
                 int max_picard = 25, real picard_tol = 1e-12);

/// Map of a velocity sampled in particle labels: w(t,y) is the velocity of
/// the particle that started at y, so its trajectory is the plain time
/// integral X(t,y) = y + int_0^t w(s,y) ds (trapezoid rule, no composition).
/// This is the map that matches the transformed system's right-hand sides:
/// the fixed-point iterate is a label-wise velocity, and tracing it through
/// flow_map instead would misplace particles by O(|grad w| |disp|), leaving
/// the recovered Eulerian fields with a persistent quadratic-in-amplitude
/// defect.  sigma tracks the Frobenius norm of int_0^t grad w(s,y) ds, which
/// bounds the Jacobian J = I + int grad w away from singularity.
FlowMap material_map(const Grid& g, const Series& w, real sigma_threshold = 0.5);

/// Fourier evaluation of a grid field at one point per node.
Field evaluate_at(const Grid& g, const Field& f, const Field& pts);

/// pts = y + disp (the mapped grid positions).
Field map_points(const Grid& g, const Field& disp);

/// Grid preimages X^{-1}(x) for every node x, by the fixed-point iteration
/// y <- x - disp(y) (converges while the displacement is contractive, which
/// the sigma check guarantees).  Max-norm stopping tolerance `tol`.
Field inverse_map_points(const Grid& g, const Field& disp, real tol = 1e-10, int maxit = 200);

/// Right-hand sides of the exact transformed system for state (rho, u) in
/// flow-map coordinates with Jacobian defect E = I - J^{-1}:
///   strain_t = sym(grad u (I - E))          (true strain seen on the fixed grid)
///   div_t    = tr(grad u (I - E))           (true divergence)
///   stress_t = S(strain_t)
///   G        = rho * tr(grad u  E)
///   F        = (grad pi(rho)) E + div stress_t - Xi - div S(Du),
///   Xi_j     = sum_{k,l} d_l stress_t_{jk} E_{lk},
/// so that the system reads  d_t rho + rho div u = G  and
/// rho d_t u + grad pi(rho) - div S(Du) = F  with plain fixed-grid operators.
struct TransformedRhs {
  Field strain_t;  ///< matrix
  Field div_t;     ///< scalar
  Field stress_t;  ///< matrix
  Field G;         ///< scalar
  Field F;         ///< vector
};
TransformedRhs transformed_rhs(const Grid& g, const ViscosityModel& mod, const PressureLaw& pres,
                               const Field& rho, const Field& u, const Field& E);

/// Right-hand sides for the linear step of the fixed-point iteration.  The
/// linear unknowns (theta, v) are increments from the initial data
/// (rho0 = rho_ref + theta0, u0), marching the constant-coefficient system
///   d_t theta + rho0 div v = G,
///   rho0 d_t v + pi'(rho0) grad theta - A(D u0) : grad^2 v = F.
/// Given the current iterate (vartheta = rho - rho0, w = full velocity) with
/// time derivative dt_w and Jacobian defect E of the flow of w,
///   G = G_exact(rho0+vartheta, w) - vartheta div w - rho0 div u0,
///   F = F_exact(rho0+vartheta, w) - vartheta dt_w + div S(Dw)
///       - A(D u0) : grad^2 (w - u0) - pi'(rho0) grad theta0
///       - (pi'(rho0+vartheta) - pi'(rho0)) grad(theta0 + vartheta).
/// At a fixed point (theta = vartheta, v = w - u0) the linear system is the
/// exact transformed system, identically in (vartheta, w).
struct LinearizedRhs {
  Field G;  ///< scalar
  Field F;  ///< vector
};
LinearizedRhs linearized_rhs(const Grid& g, const ViscosityModel& mod, const PressureLaw& pres,
                             real rho_ref, const Field& rho0, const Field& u0,
                             const Field& vartheta, const Field& w, const Field& dt_w,
                             const Field& E);

}  // namespace tns
