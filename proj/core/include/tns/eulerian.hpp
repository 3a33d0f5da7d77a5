/// @file eulerian.hpp
/// @brief Independent reference integrator on the fixed Eulerian grid and
///        exact per-mode solutions of the constant-coefficient linear system.
///
/// The reference path never touches flow maps or resolvent solves: the full
/// nonlinear system
///   d_t rho = -div(rho u),
///   d_t u   = ( div S(Du) - grad pi(rho) ) / rho - (u . grad) u
/// is integrated with classical RK4 and pseudo-spectral space derivatives.
/// The per-mode helpers give closed-form solutions z(t) = e^{tA} z0 +
/// t phi1(tA) b of the frozen-coefficient linear system for cross-checking
/// the implicit Euler march.
#pragma once

#include <functional>

#include <Eigen/Dense>

#include "tns/field.hpp"
#include "tns/grid.hpp"
#include "tns/models.hpp"
#include "tns/norms.hpp"
#include "tns/symbol.hpp"

namespace tns {

/// Optional manufactured forcing: add_source(t, frho, fu) accumulates into
/// the two right-hand sides.
using SourceFn = std::function<void(real, Field&, Field&)>;

struct EulerianOptions {
  int substeps = 1;          ///< RK4 sub-intervals per output frame interval
  bool dealias_rhs = true;   ///< 2/3-rule filter on the assembled right-hand sides
  real growth_limit = 1e3;   ///< abort when max|state| exceeds this times its start value
  real rho_min = 1e-8;       ///< abort when the density drops below this
};

struct EulerianRhs {
  Field drho;  ///< scalar
  Field du;    ///< vector
};

/// Right-hand sides at one state (no forcing, no dealiasing).
EulerianRhs eulerian_rhs(const Grid& g, const ViscosityModel& mod, const PressureLaw& pres,
                         const Field& rho, const Field& u);

struct EulerianTrajectory {
  Series rho;              ///< scalar frames
  Series u;                ///< vector frames
  std::vector<real> mass;  ///< int rho dx per frame (rectangle rule)
};

/// RK4 march of the full nonlinear system from (rho0, u0) over the time
/// grid, with optional forcing.  Throws instability_detected on blow-up or
/// vanishing density (instability guard).
EulerianTrajectory rk4_march(const Grid& g, const ViscosityModel& mod, const PressureLaw& pres,
                             const Field& rho0, const Field& u0, const TimeGrid& tg,
                             const SourceFn& source = nullptr,
                             const EulerianOptions& opt = {});

/// Frozen-coefficient per-mode system matrix for the state z = (theta, u):
///   A(xi) = [ 0,                 -gamma1 i xi^T ]
///           [ -(mhat/gamma1) i xi,   -E(xi)     ],   mhat = gamma2/gamma1,
/// of size (1+d) x (1+d).
Eigen::MatrixXcd mode_matrix(const FrozenSymbol& fs, const real* xi);

/// Matrix exponential by scaling-and-squaring with a Taylor kernel
/// (intended for the tiny mode matrices, size <= 4).
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& A);

/// Exact solution at time t of z' = A z + b, z(0) = z0, constant b, via the
/// augmented exponential  exp(t [[A, b], [0, 0]]).
Eigen::VectorXcd expm_inhomogeneous(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& z0,
                                    const Eigen::VectorXcd& b, real t);

}  // namespace tns
