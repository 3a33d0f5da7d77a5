/// @file test_constitutive.cpp
/// @brief Stress law, coefficient tensor and ellipticity: exact symmetries,
///        closed-form cross checks, secant identities and the two equivalent
///        assemblies of the stress divergence.

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_helpers.hpp"
#include "tns/constitutive.hpp"
#include "tns/models.hpp"
#include "tns/spectral.hpp"

using namespace tns;
using namespace tns::test;

namespace {

/// Random symmetric d x d matrix with entries in [-scale, scale].
void random_symmetric(std::mt19937_64& rng, int d, real scale, real* M) {
  std::uniform_real_distribution<real> dist(-scale, scale);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const real v = dist(rng);
      M[i * d + j] = v;
      M[j * d + i] = v;
    }
}

std::vector<ViscosityModel> sample_models() {
  return {newtonian(1.0, 1.0), power_law(1.3, 1.8, 0.9), quadratic(0.7, 0.25, 0.6, 0.1),
          poly_viscosity({1.0, -0.05, 0.01}, {0.8, 0.1})};
}

}  // namespace

TEST_CASE("tensor_index is row-major over (j,k,l,m)") {
  CHECK(tensor_index(2, 0, 0, 0, 0) == 0);
  CHECK(tensor_index(2, 0, 0, 0, 1) == 1);
  CHECK(tensor_index(2, 1, 1, 1, 1) == 15);
  CHECK(tensor_index(3, 1, 2, 0, 2) == ((1 * 3 + 2) * 3 + 0) * 3 + 2);
}

TEST_CASE("deviatoric projection removes the trace") {
  const real M[4] = {0.3, -0.2, -0.2, 0.1};
  real D[4];
  deviatoric_point(2, M, D);
  CHECK(D[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(D[1] == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(D[2] == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(D[3] == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(std::abs(D[0] + D[3]) <= 1e-16);
}

TEST_CASE("stress values against an independent reference computation") {
  // D = [[0.3,-0.2],[-0.2,0.1]], power_law(1.3, 1.8, 0.9):
  // s = |D^dev|^2 = 0.1, S = 2 mu(s) D^dev + lam tr(D) I.
  ViscosityModel m = power_law(1.3, 1.8, 0.9);
  const real D[4] = {0.3, -0.2, -0.2, 0.1};
  real S[4];
  stress_point(m, 2, D, S);
  CHECK(S[0] == doctest::Approx(0.6175337071357756).epsilon(1e-15));
  CHECK(S[1] == doctest::Approx(-0.51506741427155134).epsilon(1e-15));
  CHECK(S[2] == doctest::Approx(-0.51506741427155134).epsilon(1e-15));
  CHECK(S[3] == doctest::Approx(0.10246629286422437).epsilon(1e-15));
}

TEST_CASE("coefficient tensor symmetry chain holds bit-exactly") {
  std::mt19937_64 rng(2024);
  auto models = sample_models();
  index_t checked = 0;
  for (int trial = 0; trial < 2500; ++trial) {
    const int d = (trial % 2 == 0) ? 2 : 3;
    const ViscosityModel& m = models[trial % models.size()];
    real D[9];
    random_symmetric(rng, d, 1.5, D);
    std::vector<real> a(static_cast<std::size_t>(d) * d * d * d);
    coefficient_tensor_point(m, d, D, a.data());
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          for (int m2 = 0; m2 < d; ++m2) {
            const real v = a[tensor_index(d, j, k, l, m2)];
            // All four companion slots carry the identical double.
            CHECK(v == a[tensor_index(d, k, j, m2, l)]);
            CHECK(v == a[tensor_index(d, l, m2, j, k)]);
            CHECK(v == a[tensor_index(d, l, k, j, m2)]);
            CHECK(v == a[tensor_index(d, j, m2, l, k)]);
            ++checked;
          }
  }
  CHECK(checked >= 10000);
}

TEST_CASE("quadratic form: closed form equals the full contraction") {
  std::mt19937_64 rng(99);
  auto models = sample_models();
  std::uniform_real_distribution<real> dist(-1.0, 1.0);
  real worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int d = (trial % 2 == 0) ? 2 : 3;
    const ViscosityModel& m = models[trial % models.size()];
    real D[9], xi[9];
    random_symmetric(rng, d, 1.5, D);
    for (int i = 0; i < d * d; ++i) xi[i] = dist(rng);  // non-symmetric test matrix
    real xs[9];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) xs[i * d + j] = 0.5 * (xi[i * d + j] + xi[j * d + i]);

    // The contraction sees only the symmetric part of xi; the closed form
    // takes that symmetric part as its input.
    const real qc = quadratic_form_contract(m, d, D, xi);
    const real qf = quadratic_form_point(m, d, D, xs);
    const real rel = std::abs(qc - qf) / std::max(1.0, std::abs(qf));
    worst = std::max(worst, rel);
    CHECK(std::abs(quadratic_form_contract(m, d, D, xs) - qc) <=
          1e-12 * std::max(1.0, std::abs(qc)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("Newtonian coefficient tensor closed form") {
  const real mu0 = 1.3, lam0 = 0.7;
  for (int d : {2, 3}) {
    ViscosityModel m = newtonian(mu0, lam0);
    real D[9] = {0.0};
    D[0] = 0.4;  // value is irrelevant for constant viscosities
    std::vector<real> a(static_cast<std::size_t>(d) * d * d * d);
    coefficient_tensor_point(m, d, D, a.data());
    real worst = 0.0;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          for (int mm = 0; mm < d; ++mm) {
            const real want = mu0 * ((j == k && l == mm) + (j == mm && k == l)) +
                              (lam0 - 2.0 * mu0 / d) * (k == mm && j == l);
            worst = std::max(worst,
                             std::abs(a[tensor_index(d, j, k, l, mm)] - want));
          }
    CHECK(worst <= 1e-15);
  }
}

TEST_CASE("ellipticity constants of the reference models") {
  // Newtonian mu0 = lam0 = 1: mu_part = 2, lam_part = 1, c_ell = 1.
  EllipticityReport newt = ellipticity_constant(newtonian(1.0, 1.0), 4.0, 4.0);
  CHECK(newt.c_ell == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(newt.mu_part == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(newt.positive);

  // mu(s) = 1 + s, lam = 3: mu branch minimized at s = 0, c_ell = 2.
  EllipticityReport grow = ellipticity_constant(quadratic(1.0, 1.0, 3.0, 0.0), 4.0, 4.0);
  CHECK(grow.c_ell == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(grow.s_argmin == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(grow.positive);

  // Shear thinning mu(s) = 1/(1+s) degenerates at s = 1:
  // mu + 2 mu' s = (1-s)/(1+s)^2 hits zero there.
  EllipticityReport thin = ellipticity_constant(inverse_linear(1.0, 1.0), 1.0, 4.0);
  CHECK_FALSE(thin.positive);
  CHECK(std::abs(thin.c_ell) <= 1e-12);
  CHECK(thin.s_argmin == doctest::Approx(1.0).epsilon(1e-12));

  // lam(r) = 1 + 0.1 r: lam + lam' r minimized at r = -4 as 0.2.
  EllipticityReport lamvar = ellipticity_constant(quadratic(1.0, 0.0, 1.0, 0.1), 4.0, 4.0);
  CHECK(lamvar.c_ell == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(lamvar.r_argmin == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("secant (mean value) identities hold to quadrature accuracy") {
  std::mt19937_64 rng(5150);
  auto models = sample_models();
  std::uniform_real_distribution<real> dist(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = (trial % 2 == 0) ? 2 : 3;
    const ViscosityModel& m = models[trial % models.size()];
    real D1[9], D2[9];
    random_symmetric(rng, d, 1.0, D1);
    random_symmetric(rng, d, 1.0, D2);
    CHECK(mu_difference_residual(m, d, D1, D2) <= 1e-12);
    CHECK(stress_mean_value_residual(m, d, D1, D2) <= 1e-12);
    CHECK(lambda_difference_residual(m, dist(rng), dist(rng)) <= 1e-12);
  }
}

TEST_CASE("strain is the symmetric part of the jacobian") {
  Grid g(2, 32);
  Field u = random_trig(g, 2, 3, 21, 0.5);
  Field J = jacobian(g, u);
  Field E = strain(g, u);
  real worst = 0.0;
  for (index_t p = 0; p < g.size(); ++p) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const real want = 0.5 * (J.at(i * 2 + j, p) + J.at(j * 2 + i, p));
        worst = std::max(worst, std::abs(E.at(i * 2 + j, p) - want));
      }
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("stress divergence: quasilinear route equals the direct route") {
  // For a polynomial model and band-limited velocity both routes are exact:
  // div S(Du) = a(Du) : grad^2 u pointwise (chain rule with no explicit y).
  Grid g(2, 32);
  ViscosityModel m = quadratic(0.7, 0.25, 0.6, 0.1);
  Field u = random_trig(g, 2, 2, 33, 0.3);
  Field quasi = stress_divergence(g, m, u);
  Field direct = stress_divergence_direct(g, m, u);
  CHECK(max_abs_diff(quasi, direct) <= 1e-10);
}

TEST_CASE("Newtonian stress divergence equals mu Lap u + (mu+lam-2mu/d) grad div u") {
  Grid g(2, 32);
  const real mu0 = 1.3, lam0 = 0.7;
  ViscosityModel m = newtonian(mu0, lam0);
  Field u = random_trig(g, 2, 3, 44, 0.5);

  Field want = Field::vector(g);
  for (int j = 0; j < 2; ++j) {
    Field uj(1, g.size());
    std::copy(u.comp(j).begin(), u.comp(j).end(), uj.comp(0).begin());
    Field lap = axpy(partial(g, uj, {2, 0}), 1.0, partial(g, uj, {0, 2}));
    for (index_t p = 0; p < g.size(); ++p) want.at(j, p) += mu0 * lap.at(0, p);
  }
  Field divu = divergence(g, u);
  Field gdiv = gradient(g, divu);
  add_scaled(want, mu0 + lam0 - mu0, gdiv);  // d = 2
  CHECK(max_abs_diff(stress_divergence_direct(g, m, u), want) <= 1e-10);
  CHECK(max_abs_diff(stress_divergence(g, m, u), want) <= 1e-10);
}

TEST_CASE("constant-coefficient quasilinear application matches the frozen overload") {
  Grid g(2, 32);
  ViscosityModel m = newtonian(1.1, 0.8);
  Field u = random_trig(g, 2, 3, 55, 0.5);
  Field D0 = strain(g, u);
  Field acoef = coefficient_tensor(g, m, D0);  // constant in space for Newtonian
  std::vector<real> abar(16);
  for (int c = 0; c < 16; ++c) abar[c] = acoef.at(c, 0);
  Field via_field = apply_quasilinear(g, acoef, u);
  Field via_const = apply_quasilinear(g, abar, u);
  CHECK(max_abs_diff(via_field, via_const) <= 1e-11);
}
