/// @file fixedpoint.hpp
/// @brief The nonlinear solver: a Banach-style fixed-point iteration on the
///        flow-map form of the compressible system, its contraction
///        diagnostics, and the mapping of solutions back to the fixed grid.
///
/// State: (theta, w), where theta(t) is the density increment in flow-map
/// coordinates (theta(0) = 0) and w(t) the full velocity there (w(0) = u0).
/// One application of the map Phi:
///   1. integrate the flow map of w; reject if the deformation bound sigma
///      is exceeded;
///   2. evaluate the linearized right-hand sides at (theta, w);
///   3. march the linear system implicitly from (0, 0);
///   4. return the marched increments as the new state.
/// A fixed point of Phi satisfies the discrete transformed system exactly.
#pragma once

#include <cstdint>
#include <vector>

#include "tns/field.hpp"
#include "tns/grid.hpp"
#include "tns/lagrangian.hpp"
#include "tns/models.hpp"
#include "tns/norms.hpp"
#include "tns/resolvent.hpp"

namespace tns {

/// Full problem description (grid is owned by the caller).
struct Problem {
  const Grid* grid = nullptr;
  ViscosityModel mod;
  PressureLaw pres;
  real rho_ref = 1.0;     ///< constant reference density rho*
  Field rho0;             ///< initial density rho* + theta0 (scalar)
  Field u0;               ///< initial velocity (vector)
  TimeGrid tg;            ///< horizon T and frame count
  real p = 2.0;           ///< time integrability exponent of the gauge
  real q = 4.0;           ///< space integrability exponent of the gauge
  real sigma_threshold = 0.5;
  RichardsonOptions rich;
};

struct FixedPointState {
  Series theta;  ///< scalar frames
  Series w;      ///< vector frames (full velocity)
};

/// theta = 0, w = u0 on every frame.
FixedPointState zero_state(const Problem& pb);

/// Solution-space gauge of a state relative to the rest state (0, u0):
///   |theta|_{W^{1,p}(0,T; W^{1,q})} + |w - u0|_{L^p W^{2,q}} + |w - u0|_{W^{1,p} L^q}.
real gauge(const Problem& pb, const FixedPointState& s);

/// Same gauge applied to the difference of two states.
real state_distance(const Problem& pb, const FixedPointState& a, const FixedPointState& b);

/// Band-limited random state with prescribed gauge: smoothstep-in-time
/// profiles (vanishing at t = 0) times seeded low-mode random fields.
FixedPointState random_state(const Problem& pb, real target_gauge, std::uint64_t seed);

struct PhiInfo {
  real sigma_max = 0.0;
  int richardson_iterations = 0;
  real max_residual = 0.0;
};

/// One application of the fixed-point map.  Throws sigma_violation when the
/// flow map of w leaves the admissible range, solver_failure when the linear
/// march fails.  Optionally returns diagnostics and the flow map of w.
FixedPointState phi_map(const Problem& pb, const FixedPointState& s, PhiInfo* info = nullptr,
                        FlowMap* flow_out = nullptr);

/// Contraction diagnostics: gauge ratio of image distance to preimage
/// distance over seeded random pairs in a ball sized by the first iterate.
struct ContractionReport {
  real T = 0.0;
  real ball_gauge = 0.0;           ///< radius M = 2 * gauge(Phi(rest state))
  real first_iterate_gauge = 0.0;
  std::vector<real> ratios;
  real max_ratio = 0.0;
};
ContractionReport contraction_study(const Problem& pb, int npairs, std::uint64_t seed);

/// Solution mapped back to the fixed grid: rho(t,x) = (rho0+theta)(t, X^{-1}(x)),
/// u(t,x) = w(t, X^{-1}(x)).
struct MappedTrajectory {
  Series rho;
  Series u;
  std::vector<real> mass;  ///< rectangle-rule mass per frame
};
MappedTrajectory map_back(const Problem& pb, const FixedPointState& s, const FlowMap& fm);

struct NonlinearSolveReport {
  FixedPointState state;   ///< flow-map coordinates
  FlowMap flow;            ///< flow map of the converged velocity
  MappedTrajectory euler;  ///< solution on the fixed grid
  std::vector<real> update_history;  ///< gauge distance per iteration
  int iterations = 0;
  bool converged = false;
  real T_used = 0.0;       ///< horizon after any halvings
  int halvings = 0;
  /// Mass carried by the discretely compatible volume element
  /// Jdet^{n+1} = Jdet^n (1 + dt Dtrans^{n+1}); constant at a fixed point.
  std::vector<real> mass_compatible;
};

/// Fixed-point iteration from the rest state; on sigma violations or linear
/// solver failures the horizon is halved (up to max_halvings).
NonlinearSolveReport solve_nonlinear(const Problem& pb, real tol = 1e-8, int max_iter = 60,
                                     int max_halvings = 8);

/// Residuals of the original fixed-grid system along a trajectory,
///   mass:     d_t rho + div(rho u),
///   momentum: rho d_t u + rho (u.grad) u + grad pi(rho) - div S(Du),
/// measured per time interval at its midpoint: the exact discrete time
/// difference of the frames plus the average of the spatial terms (spectral
/// derivatives) at the two bracketing frames.  The stencil is second-order
/// accurate at t_{n+1/2}, so the reported numbers track the trajectory's own
/// defect instead of the measurement's.  Arrays have nt-1 entries.
struct ResidualReport {
  std::vector<real> mass_residual;
  std::vector<real> momentum_residual;
  real max_mass = 0.0;
  real max_momentum = 0.0;
  real combined = 0.0;  ///< max of the two maxima
};
ResidualReport residual_check(const Grid& g, const ViscosityModel& mod, const PressureLaw& pres,
                              const Series& rho, const Series& u);

}  // namespace tns
