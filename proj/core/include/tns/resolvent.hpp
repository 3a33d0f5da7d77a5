/// @file resolvent.hpp
/// @brief Linear solves for the coupled (density, velocity) system: exact
///        reduction to a velocity-only resolvent problem, a cached
///        constant-coefficient per-mode solver, a shifted Richardson
///        iteration for variable coefficients, and the implicit Euler march.
///
/// The linear system marched in time is
///   d_t theta + rho div v                         = G,
///   d_t v + pihat grad theta - (1/rho) A0 : grad^2 v = F   (momentum already
/// divided by rho), with rho = rho0 fixed in time, pihat = pi'(rho0)/rho0 and
/// A0 the quasilinear coefficient tensor frozen at the initial strain D u0.
/// Implicit Euler with lambda = 1/dt eliminates theta^{n+1} exactly:
///   G' = G^{n+1} + lambda theta^n,   F' = F^{n+1} + lambda v^n,
///   F_lambda = F' - pihat (1/lambda) grad G',
///   lambda v^{n+1} - B_lambda v^{n+1} = F_lambda,
///   theta^{n+1} = (1/lambda) (G' - rho div v^{n+1}),
/// where  B_lambda v = (1/rho) A0 : grad^2 v + pihat (1/lambda) grad(rho div v).
#pragma once

#include <vector>

#include "tns/constitutive.hpp"
#include "tns/field.hpp"
#include "tns/grid.hpp"
#include "tns/models.hpp"
#include "tns/norms.hpp"
#include "tns/symbol.hpp"

namespace tns {

/// Velocity-only right-hand side of the reduced problem,
/// F_lambda = F - coeff * (1/lambda) grad G.
Field reduce_resolvent(const Grid& g, const Field& G, const Field& F, real lambda,
                       real coeff = 1.0);
/// Same with a pointwise weight (the exact march uses coeff = pihat).
Field reduce_resolvent(const Grid& g, const Field& G, const Field& F, real lambda,
                       const Field& coeff);

/// Variable-coefficient data of the linearized operator plus its frozen
/// (spatial-mean) symbol used as preconditioner.
struct LinearizedOperator {
  const Grid* grid = nullptr;
  ViscosityModel mod;
  PressureLaw pres;
  Field rho;     ///< rho0 (scalar)
  Field pihat;   ///< pi'(rho0) / rho0 (scalar)
  Field acoef;   ///< coefficient tensor at D u0 (d^4 components)
  FrozenSymbol frozen;  ///< gamma1 = mean rho0, gamma2 = gamma1 * mean pi'(rho0),
                        ///< abar at the mean strain of u0
};

LinearizedOperator build_linearized_operator(const Grid& g, const ViscosityModel& mod,
                                             const PressureLaw& pres, const Field& rho0,
                                             const Field& u0);

/// lambda v - B_lambda v  for the variable-coefficient operator.
Field apply_shifted_operator(const LinearizedOperator& op, real lambda, const Field& v);

/// Frozen-coefficient version  lambda v - Bbar_lambda v,
/// Bbar_lambda v = (1/gamma1) abar : grad^2 v + (gamma2/gamma1)(1/lambda) grad div v.
Field apply_shifted_operator_frozen(const LinearizedOperator& op, real lambda, const Field& v);

/// Cached per-mode inverses of  sigma I + E(xi) + (gamma2/(lambda_p gamma1)) xi xi^T
/// (the k = 0 mode reduces to sigma I).  sigma and the pressure parameter
/// lambda_p may differ, which the shifted Richardson iteration exploits.
class ConstantSolver {
 public:
  ConstantSolver(const Grid& g, const FrozenSymbol& fs, real sigma, real lambda_p);
  Field apply(const Field& F) const;
  void apply(SpectralField& F) const;  ///< in place on spectral data
  real sigma() const { return sigma_; }

 private:
  const Grid* g_;
  int d_;
  real sigma_;
  std::vector<real> inv_;  ///< npts * d * d row-major inverse per mode
};

struct RichardsonOptions {
  real tol = 1e-10;          ///< relative residual |lambda v - B v - F| / |F|
  int max_iter = 200;
  int divergence_window = 5; ///< stop the current shift after this many
                             ///< iterations without a new best residual
  int max_shift_tries = 3;   ///< shifts nu = 0, lambda, 2 lambda
};

struct ResolventResult {
  Field v;
  int iterations = 0;
  real residual = 0.0;
  real shift = 0.0;
  bool converged = false;
};

/// Solve  lambda v - B_lambda v = F  by preconditioned Richardson iteration
///   v_{m+1} = [(lambda+nu) - Bbar_lambda]^{-1} (F + nu v_m + (B_lambda - Bbar_lambda) v_m),
/// whose fixed point is the exact variable-coefficient solution.
ResolventResult variable_resolvent_solve(const LinearizedOperator& op, real lambda,
                                         const Field& F, const RichardsonOptions& opt = {});

/// theta^{n+1} = (1/lambda) (G' - rho div v^{n+1}).
Field recover_theta(const LinearizedOperator& op, real lambda, const Field& Gprime,
                    const Field& vnew);

struct MarchResult {
  Series theta;  ///< scalar frames, theta(0) = 0
  Series v;      ///< vector frames, v(0) = 0
  int total_iterations = 0;
  real max_residual = 0.0;
  bool converged = true;
};

/// Implicit Euler march of the linearized system from (0, 0), with
/// right-hand-side series G (scalar) and F (vector, momentum already divided
/// by rho) sampled on the same time grid.
MarchResult time_march(const LinearizedOperator& op, const Series& G, const Series& F,
                       const RichardsonOptions& opt = {});

}  // namespace tns
