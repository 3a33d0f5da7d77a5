/// @file symbol.hpp
/// @brief Frozen-coefficient Fourier symbol of the momentum operator and the
///        numerical checks built on it: positivity, sector geometry,
///        resolvent-norm scans, multiplier derivative bounds and a
///        randomized R-bound estimate.
///
/// For a frozen coefficient tensor abar, reference density gamma1 and
/// pressure coupling gamma2, the per-mode matrix of the reduced resolvent
/// problem at frequency xi and spectral parameter lambda is
///   M(lambda, xi) = lambda I + E(xi) + (gamma2 / (lambda gamma1)) xi xi^T,
///   E(xi)_{jk}    = (1/gamma1) sum_{l,m} abar_{jk}^{lm} xi_l xi_m.
/// E(xi) is real symmetric by the tensor symmetries and satisfies
///   min eig E(xi) >= c_ell |xi|^2 / (2 gamma1).
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tns/constitutive.hpp"
#include "tns/field.hpp"
#include "tns/grid.hpp"
#include "tns/models.hpp"

namespace tns {

/// Sector  Sigma_{beta,nu} = { lambda : |arg(lambda - nu)| <= pi - beta }.
struct Sector {
  real beta = 0.5;  ///< opening defect, 0 < beta < pi
  real nu = 0.0;    ///< vertex shift
};

/// Uniform-in-angle, log-uniform-in-radius sample from the sector.
complex sample_sector(const Sector& sec, real radius_min, real radius_max,
                      std::mt19937_64& rng);

/// Frozen-coefficient data extracted at a reference state.
struct FrozenSymbol {
  int dim = 0;
  real gamma1 = 1.0;         ///< reference density
  real gamma2 = 1.0;         ///< pressure coupling (e.g. gamma1 * mean pi')
  std::vector<real> abar;    ///< coefficient tensor, d^4 entries
};

/// Build the frozen symbol from a model at a reference strain Dbar.
FrozenSymbol frozen_symbol(const ViscosityModel& mod, int d, const real* Dbar, real gamma1,
                           real gamma2);

/// Second-order part E(xi) (real symmetric d x d).
Eigen::MatrixXd symbol_second_order(const FrozenSymbol& fs, const real* xi);

/// Pressure part (gamma2 / (lambda gamma1)) xi xi^T.
Eigen::MatrixXcd symbol_pressure(const FrozenSymbol& fs, const real* xi, complex lambda);

/// Full per-mode matrix  lambda I + E(xi) + pressure part.
Eigen::MatrixXcd symbol_matrix(const FrozenSymbol& fs, const real* xi, complex lambda);

/// Smallest eigenvalue of E(xi).
real symbol_min_eigenvalue(const FrozenSymbol& fs, const real* xi);

/// Monte-Carlo verification of  |lambda + t| >= sin(beta/2) (|lambda| + t)
/// for lambda in Sigma_{beta,0} and t >= 0.
struct SectorCheckResult {
  index_t samples = 0;
  index_t violations = 0;   ///< margin below -1e-12 relative
  real worst_margin = 0.0;  ///< min of (|lambda+t| - sin(beta/2)(|lambda|+t)) / (|lambda|+t)
};
SectorCheckResult sector_inequality_check(real beta, index_t nsamples, std::uint64_t seed);

/// Deterministic scan of the resolvent bound
///   sup (|lambda| + |xi|^2) * ||M(lambda,xi)^{-1}||_2
/// over lambda on log-spaced magnitudes x sector angles and xi over
/// directions x log-spaced magnitudes.
struct ResolventScan {
  real sup_ratio = 0.0;
  complex lambda_at_sup;
  real xi_abs_at_sup = 0.0;
};
ResolventScan resolvent_bound_scan(const FrozenSymbol& fs, const Sector& sec, int nlambda,
                                   int nxi, real lambda_min, real lambda_max, real xi_max);

/// sup over the same scan of ||(E_pert(xi) - E_base(xi)) M_base(lambda,xi)^{-1}||_2;
/// measures how strongly a coefficient perturbation acts relative to the
/// base resolvent (the contraction number of a frozen-coefficient
/// preconditioner iteration).
real perturbation_ratio(const FrozenSymbol& base, const FrozenSymbol& pert, const Sector& sec,
                        int nlambda, int nxi, real lambda_min, real lambda_max, real xi_max);

/// Scaled multiplier derivative bounds (Mikhlin-type):
///   c_alpha = sup_xi prod_a |xi_a|^{alpha_a} * ||d^alpha_xi m(xi)||_2
/// over all multi-indices 1 <= |alpha| <= d for the families
///   m0 = lambda M^{-1},  m1_j = |lambda|^{1/2} xi_j M^{-1},  m2_jk = xi_j xi_k M^{-1}.
/// Derivatives by nested central differences with h = fd_scale * max(1,|xi|);
/// fd_instability is the relative change of c_max when h is halved.
struct MultiplierCheck {
  real c_max = 0.0;          ///< worst scaled derivative over families and alpha
  real c_zero = 0.0;         ///< worst plain norm (alpha = 0)
  real fd_instability = 0.0;
};
MultiplierCheck multiplier_derivative_check(const FrozenSymbol& fs, complex lambda, int nxi,
                                            real xi_max, real fd_scale = 1e-4,
                                            std::uint64_t seed = 12345);

/// Apply the per-mode multiplier lambda M(lambda, pi k)^{-1} to a velocity
/// field in the spectral domain (the k = 0 mode is multiplied by the limit
/// value I, since M(lambda, 0) = lambda I).
void apply_resolvent_multiplier(const Grid& g, const FrozenSymbol& fs, complex lambda,
                                SpectralField& u);

/// Randomized R-bound estimate for the family { lambda M(lambda,xi)^{-1} } at
/// exponent 2: Rademacher averages of randomized sums of multiplier images
/// against the same sums of inputs,
///   ratio = sqrt( E || sum_j r_j T_j f_j ||^2 / E || sum_j r_j f_j ||^2 ).
struct RBoundEstimate {
  real ratio = 0.0;
  int noperators = 0;
  int nsignsets = 0;
};
RBoundEstimate rbound_estimate(const Grid& g, const FrozenSymbol& fs, const Sector& sec,
                               int noperators, int nsignsets, std::uint64_t seed);

}  // namespace tns
