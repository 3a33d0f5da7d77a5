#include "tns/constitutive.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "tns/spectral.hpp"

namespace tns {

namespace {

/// Deviator with exactly symmetric storage: both (j,l) and (l,j) slots are
/// assigned the same computed double, so products taken across transposed
/// slots are bit-identical.
void symmetric_deviator(int d, const real* M, real* T) {
  real tr = 0.0;
  for (int j = 0; j < d; ++j) tr += M[j * d + j];
  const real diag = tr / d;
  for (int j = 0; j < d; ++j)
    for (int l = j; l < d; ++l) {
      real v = 0.5 * (M[j * d + l] + M[l * d + j]);
      if (j == l) v -= diag;
      T[j * d + l] = v;
      T[l * d + j] = v;
    }
}

real frobenius2(int d, const real* T) {
  real s = 0.0;
  for (int i = 0; i < d * d; ++i) s += T[i] * T[i];
  return s;
}

real trace(int d, const real* M) {
  real t = 0.0;
  for (int j = 0; j < d; ++j) t += M[j * d + j];
  return t;
}

using gauss32 = boost::math::quadrature::gauss<real, 32>;

}  // namespace

void deviatoric_point(int d, const real* M, real* out) {
  const real diag = trace(d, M) / d;
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l) out[j * d + l] = M[j * d + l] - (j == l ? diag : 0.0);
}

void stress_point(const ViscosityModel& mod, int d, const real* D, real* S) {
  std::array<real, 9> T{};
  symmetric_deviator(d, D, T.data());
  const real s = frobenius2(d, T.data());
  const real r = trace(d, D);
  const real two_mu = 2.0 * mod.mu(s);
  const real lam_r = mod.lam(r) * r;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      S[j * d + k] = two_mu * T[j * d + k] + (j == k ? lam_r : 0.0);
}

void coefficient_tensor_point(const ViscosityModel& mod, int d, const real* D, real* a) {
  std::array<real, 9> T{};
  symmetric_deviator(d, D, T.data());
  const real s = frobenius2(d, T.data());
  const real r = trace(d, D);
  const real mu = mod.mu(s);
  const real mu1 = mod.mu.d1(s);
  const real c = mod.lam(r) + mod.lam.d1(r) * r - (2.0 / d) * mu;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m) {
          const int deltas = static_cast<int>(j == k && l == m) + static_cast<int>(j == m && k == l);
          real v = mu * deltas;
          v += 4.0 * mu1 * (T[j * d + l] * T[k * d + m]);
          if (k == m && j == l) v += c;
          a[tensor_index(d, j, k, l, m)] = v;
        }
}

real quadratic_form_point(const ViscosityModel& mod, int d, const real* D, const real* xi) {
  std::array<real, 9> T{}, X{};
  symmetric_deviator(d, D, T.data());
  deviatoric_point(d, xi, X.data());
  const real s = frobenius2(d, T.data());
  const real r = trace(d, D);
  real dot = 0.0;
  for (int i = 0; i < d * d; ++i) dot += T[i] * X[i];
  const real trxi = trace(d, xi);
  return 2.0 * mod.mu(s) * frobenius2(d, X.data()) + 4.0 * mod.mu.d1(s) * dot * dot +
         (mod.lam(r) + mod.lam.d1(r) * r) * trxi * trxi;
}

real quadratic_form_contract(const ViscosityModel& mod, int d, const real* D, const real* xi) {
  std::array<real, 81> a{};
  coefficient_tensor_point(mod, d, D, a.data());
  real acc = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m)
          acc += a[tensor_index(d, j, k, l, m)] * xi[j * d + l] * xi[k * d + m];
  return acc;
}

EllipticityReport ellipticity_constant(const ViscosityModel& mod, real s_max, real r_max,
                                       int nscan) {
  if (!(s_max >= 0.0) || !(r_max >= 0.0) || nscan < 1)
    throw invalid_parameter("ellipticity_constant: bad scan box");
  EllipticityReport rep;
  rep.mu_part = std::numeric_limits<real>::infinity();
  rep.lam_part = std::numeric_limits<real>::infinity();
  for (int i = 0; i <= nscan; ++i) {
    const real s = s_max * static_cast<real>(i) / nscan;
    const real v = 2.0 * std::min(mod.mu(s), mod.mu(s) + 2.0 * mod.mu.d1(s) * s);
    if (v < rep.mu_part) {
      rep.mu_part = v;
      rep.s_argmin = s;
    }
  }
  for (int i = 0; i <= nscan; ++i) {
    const real r = -r_max + 2.0 * r_max * static_cast<real>(i) / nscan;
    const real v = mod.lam(r) + mod.lam.d1(r) * r;
    if (v < rep.lam_part) {
      rep.lam_part = v;
      rep.r_argmin = r;
    }
  }
  rep.c_ell = std::min(rep.mu_part, rep.lam_part);
  rep.positive = rep.c_ell > 0.0;
  return rep;
}

real mu_difference_residual(const ViscosityModel& mod, int d, const real* D1, const real* D2) {
  std::array<real, 9> T1{}, T2{}, dT{};
  symmetric_deviator(d, D1, T1.data());
  symmetric_deviator(d, D2, T2.data());
  for (int i = 0; i < d * d; ++i) dT[i] = T1[i] - T2[i];
  real worst = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      auto integrand = [&](real t) {
        std::array<real, 9> Tt{};
        for (int i = 0; i < d * d; ++i) Tt[i] = T2[i] + t * (T1[i] - T2[i]);
        const real st = frobenius2(d, Tt.data());
        real dot = 0.0;
        for (int i = 0; i < d * d; ++i) dot += Tt[i] * dT[i];
        return 4.0 * mod.mu.d1(st) * dot * Tt[j * d + k] + 2.0 * mod.mu(st) * dT[j * d + k];
      };
      const real rhs = gauss32::integrate(integrand, 0.0, 1.0);
      const real lhs = 2.0 * mod.mu(frobenius2(d, T1.data())) * T1[j * d + k] -
                       2.0 * mod.mu(frobenius2(d, T2.data())) * T2[j * d + k];
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

real lambda_difference_residual(const ViscosityModel& mod, real r1, real r2) {
  auto integrand = [&](real t) {
    const real rt = r2 + t * (r1 - r2);
    return mod.lam(rt) + mod.lam.d1(rt) * rt;
  };
  const real rhs = gauss32::integrate(integrand, 0.0, 1.0) * (r1 - r2);
  const real lhs = mod.lam(r1) * r1 - mod.lam(r2) * r2;
  return std::abs(lhs - rhs);
}

real stress_mean_value_residual(const ViscosityModel& mod, int d, const real* D1,
                                const real* D2) {
  std::array<real, 9> S1{}, S2{}, dD{};
  stress_point(mod, d, D1, S1.data());
  stress_point(mod, d, D2, S2.data());
  for (int i = 0; i < d * d; ++i) dD[i] = D1[i] - D2[i];
  const real tr_dD = trace(d, dD.data());
  std::array<real, 9> dDdev{};
  deviatoric_point(d, dD.data(), dDdev.data());
  real worst = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      auto integrand = [&](real t) {
        std::array<real, 9> Dt{}, Tt{};
        for (int i = 0; i < d * d; ++i) Dt[i] = D2[i] + t * dD[i];
        symmetric_deviator(d, Dt.data(), Tt.data());
        const real st = frobenius2(d, Tt.data());
        const real rt = trace(d, Dt.data());
        real dot = 0.0;
        for (int i = 0; i < d * d; ++i) dot += Tt[i] * dD[i];
        real v = 4.0 * mod.mu.d1(st) * dot * Tt[j * d + k] + 2.0 * mod.mu(st) * dDdev[j * d + k];
        if (j == k) v += (mod.lam(rt) + mod.lam.d1(rt) * rt) * tr_dD;
        return v;
      };
      const real rhs = gauss32::integrate(integrand, 0.0, 1.0);
      worst = std::max(worst, std::abs(S1[j * d + k] - S2[j * d + k] - rhs));
    }
  return worst;
}

Field strain(const Grid& g, const Field& u) {
  if (u.ncomp != g.dim()) throw invalid_parameter("strain: expected a velocity field");
  const int d = g.dim();
  Field J = jacobian(g, u);
  Field D = Field::matrix(g);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      auto out = D.comp(i * d + j);
      auto a = J.comp(i * d + j);
      auto b = J.comp(j * d + i);
      for (index_t p = 0; p < g.size(); ++p) out[p] = 0.5 * (a[p] + b[p]);
    }
  return D;
}

Field stress(const Grid& g, const ViscosityModel& mod, const Field& strain_field) {
  const int d = g.dim();
  if (strain_field.ncomp != d * d) throw invalid_parameter("stress: expected a matrix field");
  Field S = Field::matrix(g);
  std::array<real, 9> Dp{}, Sp{};
  for (index_t p = 0; p < g.size(); ++p) {
    for (int c = 0; c < d * d; ++c) Dp[c] = strain_field.at(c, p);
    stress_point(mod, d, Dp.data(), Sp.data());
    for (int c = 0; c < d * d; ++c) S.at(c, p) = Sp[c];
  }
  return S;
}

Field coefficient_tensor(const Grid& g, const ViscosityModel& mod, const Field& strain_field) {
  const int d = g.dim();
  if (strain_field.ncomp != d * d)
    throw invalid_parameter("coefficient_tensor: expected a matrix field");
  Field A(d * d * d * d, g.size());
  std::array<real, 9> Dp{};
  std::array<real, 81> ap{};
  for (index_t p = 0; p < g.size(); ++p) {
    for (int c = 0; c < d * d; ++c) Dp[c] = strain_field.at(c, p);
    coefficient_tensor_point(mod, d, Dp.data(), ap.data());
    for (int c = 0; c < d * d * d * d; ++c) A.at(c, p) = ap[c];
  }
  return A;
}

namespace {

/// Second derivative fields d_l d_m u (one vector field per unordered pair).
std::vector<Field> hessian_fields(const Grid& g, const Field& u, int pid[3][3]) {
  const int d = g.dim();
  SpectralField su = to_spectral(g, u);
  std::vector<Field> hess;
  for (int l = 0; l < d; ++l)
    for (int m = l; m < d; ++m) {
      SpectralField t = derivative(g, derivative(g, su, l, 1), m, 1);
      pid[l][m] = pid[m][l] = static_cast<int>(hess.size());
      hess.push_back(to_physical(g, t));
    }
  return hess;
}

}  // namespace

Field apply_quasilinear(const Grid& g, const Field& acoef, const Field& u) {
  const int d = g.dim();
  if (u.ncomp != d) throw invalid_parameter("apply_quasilinear: expected a velocity field");
  if (acoef.ncomp != d * d * d * d)
    throw invalid_parameter("apply_quasilinear: coefficient field must have d^4 components");
  int pid[3][3] = {};
  std::vector<Field> hess = hessian_fields(g, u, pid);
  Field v = Field::vector(g);
  for (index_t p = 0; p < g.size(); ++p)
    for (int j = 0; j < d; ++j) {
      real acc = 0.0;
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          for (int m = 0; m < d; ++m)
            acc += acoef.at(tensor_index(d, j, k, l, m), p) * hess[pid[l][m]].at(k, p);
      v.at(j, p) = acc;
    }
  return v;
}

Field apply_quasilinear(const Grid& g, const std::vector<real>& abar, const Field& u) {
  const int d = g.dim();
  if (u.ncomp != d) throw invalid_parameter("apply_quasilinear: expected a velocity field");
  if (static_cast<int>(abar.size()) != d * d * d * d)
    throw invalid_parameter("apply_quasilinear: frozen tensor must have d^4 entries");
  int pid[3][3] = {};
  std::vector<Field> hess = hessian_fields(g, u, pid);
  Field v = Field::vector(g);
  for (index_t p = 0; p < g.size(); ++p)
    for (int j = 0; j < d; ++j) {
      real acc = 0.0;
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          for (int m = 0; m < d; ++m)
            acc += abar[tensor_index(d, j, k, l, m)] * hess[pid[l][m]].at(k, p);
      v.at(j, p) = acc;
    }
  return v;
}

Field stress_divergence(const Grid& g, const ViscosityModel& mod, const Field& u) {
  return apply_quasilinear(g, coefficient_tensor(g, mod, strain(g, u)), u);
}

Field stress_divergence_direct(const Grid& g, const ViscosityModel& mod, const Field& u) {
  return divergence_matrix(g, stress(g, mod, strain(g, u)));
}

}  // namespace tns
