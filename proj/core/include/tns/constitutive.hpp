/// @file constitutive.hpp
/// @brief Nonlinear stress, its quasilinear coefficient tensor, ellipticity
///        scans, and mean-value (secant) identities.
///
/// Stress convention (d x d symmetric strain D, deviator D^dev, r = tr D):
///   S(D) = 2 mu(|D^dev|^2) D^dev + lam(r) r I.
/// The quasilinear coefficient tensor a is defined so that for any velocity
/// field u,  [div S(Du)]_j = sum_{k,l,m} a_{jk}^{lm}(Du) d_l d_m u_k
/// pointwise (chain rule; S has no explicit space dependence):
///   a_{jk}^{lm}(D) = mu (delta_jk delta_lm + delta_jm delta_kl)
///                  + 4 mu' D^dev_jl D^dev_km
///                  + (lam + lam' r - (2/d) mu) delta_km delta_jl,
/// with mu, mu' at s = |D^dev|^2 and lam, lam' at r.  Entries are stored
/// flat at tensor_index(d, j, k, l, m) = ((j*d + k)*d + l)*d + m.
#pragma once

#include <vector>

#include "tns/field.hpp"
#include "tns/grid.hpp"
#include "tns/models.hpp"

namespace tns {

/// Flat index of a_{jk}^{lm} in a d^4 buffer.
inline int tensor_index(int d, int j, int k, int l, int m) {
  return ((j * d + k) * d + l) * d + m;
}

/// out = M - (tr M / d) I   (row-major d x d buffers; out may alias M).
void deviatoric_point(int d, const real* M, real* out);

/// S(D) for one symmetric strain matrix D (row-major, d x d).
void stress_point(const ViscosityModel& mod, int d, const real* D, real* S);

/// Quasilinear coefficient tensor at one strain matrix; fills d^4 entries.
/// The deviator is stored exactly symmetrically and every entry is assembled
/// with the same operation order, so the tensor satisfies bit-for-bit
///   a[j][k][l][m] == a[k][j][m][l] == a[l][m][j][k]
///                 == a[l][k][j][m] == a[j][m][l][k].
void coefficient_tensor_point(const ViscosityModel& mod, int d, const real* D, real* a);

/// Closed form of the quadratic form  sum a_{jk}^{lm} xi_jl xi_km  for a
/// symmetric d x d matrix xi:
///   2 mu |xi^dev|^2 + 4 mu' (D^dev : xi^dev)^2 + (lam + lam' r) (tr xi)^2.
real quadratic_form_point(const ViscosityModel& mod, int d, const real* D, const real* xi);

/// Same quadratic form by brute-force contraction of the assembled tensor;
/// independent check of quadratic_form_point.
real quadratic_form_contract(const ViscosityModel& mod, int d, const real* D, const real* xi);

/// Ellipticity of the quadratic form over the scan box
/// s in [0, s_max], r in [-r_max, r_max]:
///   mu_part  = 2 * min_s min( mu(s), mu(s) + 2 mu'(s) s ),
///   lam_part =     min_r ( lam(r) + lam'(r) r ),
///   c_ell    = min(mu_part, lam_part).
struct EllipticityReport {
  real c_ell = 0.0;
  real mu_part = 0.0;
  real lam_part = 0.0;
  real s_argmin = 0.0;
  real r_argmin = 0.0;
  bool positive = false;
};
EllipticityReport ellipticity_constant(const ViscosityModel& mod, real s_max, real r_max,
                                       int nscan = 2048);

/// Residual of the secant identity for the deviatoric stress part,
///   2 mu(s1) D1^dev - 2 mu(s2) D2^dev
///     = int_0^1 [ 4 mu'(s_t) (D_t^dev : dD^dev) D_t^dev + 2 mu(s_t) dD^dev ] dt,
/// D_t = D2 + t (D1 - D2), dD = D1 - D2, via 32-point Gauss-Legendre.
real mu_difference_residual(const ViscosityModel& mod, int d, const real* D1, const real* D2);

/// Residual of  lam(r1) r1 - lam(r2) r2 = int_0^1 (lam + lam' r_t) dt (r1 - r2).
real lambda_difference_residual(const ViscosityModel& mod, real r1, real r2);

/// Residual of the full matrix secant identity S(D1) - S(D2) = int_0^1
/// dS/dD(D_t) : (D1 - D2) dt (max over entries).
real stress_mean_value_residual(const ViscosityModel& mod, int d, const real* D1,
                                const real* D2);

/// Symmetric gradient  D u = (grad u + grad u^T)/2  as a matrix field.
Field strain(const Grid& g, const Field& u);

/// Pointwise stress S(D) of a matrix strain field.
Field stress(const Grid& g, const ViscosityModel& mod, const Field& strain_field);

/// Pointwise coefficient tensor of a matrix strain field (ncomp = d^4).
Field coefficient_tensor(const Grid& g, const ViscosityModel& mod, const Field& strain_field);

/// v_j = sum_{k,l,m} a_{jk}^{lm}(y) d_l d_m u_k with spectral second
/// derivatives; acoef has ncomp = d^4.
Field apply_quasilinear(const Grid& g, const Field& acoef, const Field& u);

/// Same with a single frozen tensor abar (size d^4) for all points.
Field apply_quasilinear(const Grid& g, const std::vector<real>& abar, const Field& u);

/// div S(Du) through the quasilinear form a(Du) : grad^2 u (pointwise exact
/// chain rule; spectral derivatives of u only).
Field stress_divergence(const Grid& g, const ViscosityModel& mod, const Field& u);

/// div S(Du) by building the stress field and taking its spectral
/// divergence; agrees with stress_divergence up to aliasing error.
Field stress_divergence_direct(const Grid& g, const ViscosityModel& mod, const Field& u);

}  // namespace tns
