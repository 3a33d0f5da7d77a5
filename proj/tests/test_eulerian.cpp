/// @file test_eulerian.cpp
/// @brief Fixed-grid reference solver: right-hand sides against forward-mode
///        jets, RK4 order, mass conservation, guards, matrix exponentials.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "jets.hpp"
#include "test_helpers.hpp"
#include "tns/eulerian.hpp"
#include "tns/spectral.hpp"
#include "tns/symbol.hpp"

using namespace tns;
using namespace tns::test;

namespace {

using J2 = Jet2<3>;  // variables (t, y1, y2)
using J1 = Jet1<3>;

// Viscosity of the manufactured problem.  Kept small so that explicit RK4 has
// an accuracy-limited regime below its diffusive stability bound; the
// manufactured source balances the equations for any positive choice.
constexpr real kMu0 = 0.02, kMu1 = 0.008, kLam0 = 0.016, kLam1 = 0.004;

/// Manufactured positive density, band-limited with per-axis frequency 1.
J2 rho_mms(const J2& t, const J2& x, const J2& y) {
  J2 a = cos(pi * x + J2::constant(0.4));
  J2 b = cos(pi * y - J2::constant(0.2));
  J2 ramp = J2::constant(0.5) + 0.3 * sin(pi * t);
  return J2::constant(1.0) + 0.25 * (a * (b * ramp));
}

std::array<J2, 2> u_mms(const J2& t, const J2& x, const J2& y) {
  J2 u1 = 0.2 * (sin(pi * x) * (cos(pi * y) * cos(pi * t)));
  J2 u2 = 0.15 * (cos(pi * x + J2::constant(0.1)) *
                  (sin(pi * y) * (J2::constant(1.0) - 0.4 * t)));
  return {u1, u2};
}

struct MmsPoint {
  real rho, u[2];
  real drho_rhs, du_rhs[2];  // right-hand sides of the evolution equations
  real drho_t, du_t[2];      // time derivatives of the manufactured fields
};

/// Everything the tests need about the manufactured solution at one point,
/// derived with jets only (no spectral machinery): quadratic viscosity
/// mu = kMu0 + kMu1 s, lam = kLam0 + kLam1 r, pressure pi = rho^2.
MmsPoint mms_point(real tval, real y1, real y2) {
  const J2 t = J2::variable(tval, 0);
  const J2 x = J2::variable(y1, 1);
  const J2 y = J2::variable(y2, 2);
  const J2 rho = rho_mms(t, x, y);
  const std::array<J2, 2> u = u_mms(t, x, y);

  MmsPoint out;
  out.rho = rho.v;
  out.u[0] = u[0].v;
  out.u[1] = u[1].v;
  out.drho_t = rho.g[0];
  out.du_t[0] = u[0].g[0];
  out.du_t[1] = u[1].g[0];

  // Mass: -div(rho u), in divergence form.
  const J2 m1 = rho * u[0];
  const J2 m2 = rho * u[1];
  out.drho_rhs = -(m1.g[1] + m2.g[2]);

  // Strain (gradient variables 1,2 are the spatial axes) as first-order jets.
  J1 D[2][2];
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      J1 a = u[j].partial(k + 1);
      J1 b = u[k].partial(j + 1);
      D[j][k] = 0.5 * (a + b);
    }
  const J1 divu = u[0].partial(1) + u[1].partial(2);
  J1 Dd[2][2];
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      Dd[j][k] = D[j][k];
      if (j == k) Dd[j][k] = Dd[j][k] - 0.5 * divu;
    }
  J1 s = J1::constant(0.0);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) s = s + Dd[j][k] * Dd[j][k];
  const J1 mu = chain(s, kMu0 + kMu1 * s.v, kMu1);
  const J1 lam = chain(divu, kLam0 + kLam1 * divu.v, kLam1);
  const J1 lam_div = lam * divu;
  J1 S[2][2];
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      S[j][k] = 2.0 * (mu * Dd[j][k]);
      if (j == k) S[j][k] = S[j][k] + lam_div;
    }

  const J2 pressure = rho * rho;  // pi(rho) = rho^2
  for (int j = 0; j < 2; ++j) {
    const real divS = S[j][0].g[1] + S[j][1].g[2];
    const real conv = u[0].v * u[j].g[1] + u[1].v * u[j].g[2];
    out.du_rhs[j] = (divS - pressure.g[j + 1]) / rho.v - conv;
  }
  return out;
}

void mms_fields(const Grid& g, real t, Field& rho, Field& u) {
  rho = Field::scalar(g);
  u = Field::vector(g);
  int ij[2];
  for (index_t p = 0; p < g.size(); ++p) {
    g.unflat(p, ij);
    MmsPoint mp = mms_point(t, g.coord(ij[0]), g.coord(ij[1]));
    rho.at(0, p) = mp.rho;
    u.at(0, p) = mp.u[0];
    u.at(1, p) = mp.u[1];
  }
}

}  // namespace

TEST_CASE("right-hand sides match the forward-mode jet reference pointwise") {
  Grid g(2, 32);
  ViscosityModel mod = quadratic(kMu0, kMu1, kLam0, kLam1);
  PressureLaw pres = power_pressure(1.0, 2.0);
  const real t = 0.37;
  Field rho, u;
  mms_fields(g, t, rho, u);
  EulerianRhs rhs = eulerian_rhs(g, mod, pres, rho, u);

  int ij[2];
  real worst = 0.0;
  for (index_t p = 0; p < g.size(); ++p) {
    g.unflat(p, ij);
    MmsPoint mp = mms_point(t, g.coord(ij[0]), g.coord(ij[1]));
    worst = std::max(worst, std::abs(rhs.drho.at(0, p) - mp.drho_rhs));
    worst = std::max(worst, std::abs(rhs.du.at(0, p) - mp.du_rhs[0]));
    worst = std::max(worst, std::abs(rhs.du.at(1, p) - mp.du_rhs[1]));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("RK4 with a manufactured source converges at fourth order") {
  Grid g(2, 16);
  ViscosityModel mod = quadratic(kMu0, kMu1, kLam0, kLam1);
  PressureLaw pres = power_pressure(1.0, 2.0);
  const real T = 0.2;

  SourceFn source = [&](real t, Field& drho, Field& du) {
    int ij[2];
    for (index_t p = 0; p < g.size(); ++p) {
      g.unflat(p, ij);
      MmsPoint mp = mms_point(t, g.coord(ij[0]), g.coord(ij[1]));
      drho.at(0, p) += mp.drho_t - mp.drho_rhs;
      du.at(0, p) += mp.du_t[0] - mp.du_rhs[0];
      du.at(1, p) += mp.du_t[1] - mp.du_rhs[1];
    }
  };

  Field rho0, u0, rhoT, uT;
  mms_fields(g, 0.0, rho0, u0);
  mms_fields(g, T, rhoT, uT);

  std::vector<real> errs, dts;
  for (int sub : {4, 8, 16, 32}) {
    EulerianOptions opt;
    opt.substeps = sub;
    opt.dealias_rhs = false;  // keep the pointwise-exact manufactured balance
    TimeGrid tg{T, 3};
    EulerianTrajectory traj = rk4_march(g, mod, pres, rho0, u0, tg, source, opt);
    const real e = std::max(max_abs_diff(traj.rho.frames.back(), rhoT),
                            max_abs_diff(traj.u.frames.back(), uT));
    errs.push_back(e);
    dts.push_back(tg.dt() / sub);
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const real order = std::log(errs[i - 1] / errs[i]) / std::log(dts[i - 1] / dts[i]);
    CHECK(order == doctest::Approx(4.0).epsilon(0.12));
  }
}

TEST_CASE("free evolution conserves total mass to rounding") {
  Grid g(2, 16);
  ViscosityModel mod = power_law(1.0, 1.8, 1.0);
  PressureLaw pres = power_pressure(1.0, 2.0);
  Field rho0 = Field::scalar(g);
  for (real& v : rho0.comp(0)) v = 1.0;
  add_cosine(g, rho0, 0, 0.05, {1, 1}, 0.3);
  Field u0 = random_trig(g, 2, 2, 81, 0.1);
  TimeGrid tg{0.1, 9};
  EulerianOptions opt;
  opt.substeps = 32;  // diffusive stability of the explicit stages
  EulerianTrajectory traj = rk4_march(g, mod, pres, rho0, u0, tg, nullptr, opt);
  REQUIRE(traj.mass.size() == 9);
  for (real m : traj.mass) CHECK(std::abs(m - traj.mass[0]) <= 1e-12 * std::abs(traj.mass[0]));
}

TEST_CASE("instability guards fire") {
  Grid g(2, 16);
  ViscosityModel mod = newtonian(1.0, 1.0);
  PressureLaw pres = power_pressure(1.0, 2.0);

  // Nonpositive density is rejected on evaluation.
  Field bad = Field::scalar(g);
  for (real& v : bad.comp(0)) v = 0.5;
  add_cosine(g, bad, 0, 0.6, {1, 0}, 0.0);
  CHECK_THROWS_AS(eulerian_rhs(g, mod, pres, bad, Field::vector(g)), instability_detected);

  // Forced blow-up trips the growth limit.
  Field rho0 = Field::scalar(g);
  for (real& v : rho0.comp(0)) v = 1.0;
  SourceFn pump = [&](real, Field&, Field& du) {
    for (real& v : du.comp(0)) v += 50.0;
  };
  EulerianOptions opt;
  opt.growth_limit = 2.0;
  TimeGrid tg{1.0, 11};
  CHECK_THROWS_AS(rk4_march(g, mod, pres, rho0, Field::vector(g), tg, pump, opt),
                  instability_detected);
}

TEST_CASE("matrix exponential against an independent high-precision reference") {
  using C = complex;
  // 4x4 random complex matrix and its exponential, both computed externally
  // with 40-digit arithmetic.
  const std::vector<C> Adata = {
      C(0.0012301533574825742, -1.3442145472850819),  C(0.29874553750846988, -0.45761576104021817),
      C(-0.27413785536221758, -1.9012227398008441),   C(-0.89059183875727421, -1.2895377397849761),
      C(-0.45467078517172255, -1.8417350377917323),   C(-0.99164655499646237, -0.23509113107468127),
      C(0.060143602597438485, -1.2674464814437032),   C(1.3402152455545335, 0.27126435882170152),
      C(-0.49220651855132963, 0.15675108662422516),   C(-0.62047489981994042, -0.18693094462995438),
      C(0.48984205018519822, -2.5167597108205131),    C(0.35688700816006075, -0.5386928958466366),
      C(0.10541424899789856, -0.048500945401071985),  C(-0.93046804470820466, 0.11330898600330756),
      C(-0.029251822463273489, -1.5301357655053935),  C(0.69530319445828781, -0.47775327603393064)};
  const std::vector<C> Edata = {
      C(-0.10854691796669186, -1.8981026453568892),   C(1.0170758600805687, -0.54466790497482498),
      C(-1.6168456988124238, 2.516598746353663),      C(-1.9910531144360046, 0.76305766005844278),
      C(-0.66093314234610778, -0.45774263505085488),  C(0.06515928572540225, -0.26002351455783029),
      C(-0.48935084107397764, 0.55356517955129325),   C(0.6986438191560177, 1.1537118190830853),
      C(0.89822224953164198, 0.34409231208525987),    C(0.16913203216316697, 0.70085774460569095),
      C(-1.0815492566670233, -1.2736867231795861),    C(-0.70900369190738932, -0.90932618069310234),
      C(1.1337853525380972, -0.17711846505624368),    C(-0.048997828942409796, 0.54500329806069381),
      C(-1.8828854513148052, -0.37255918658312787),   C(0.30180934783720603, -0.80495947548980151)};
  Eigen::MatrixXcd A(4, 4), E(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      A(i, j) = Adata[i * 4 + j];
      E(i, j) = Edata[i * 4 + j];
    }
  CHECK((matrix_exponential(A) - E).cwiseAbs().maxCoeff() <= 1e-13);

  // Exact small cases: nilpotent shift and a rotation block.
  Eigen::MatrixXcd N = Eigen::MatrixXcd::Zero(2, 2);
  N(0, 1) = 1.0;
  Eigen::MatrixXcd eN = matrix_exponential(N);
  CHECK(std::abs(eN(0, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(eN(0, 1) - 1.0) <= 1e-15);
  CHECK(std::abs(eN(1, 0)) <= 1e-15);

  const real a = 0.7;
  Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(2, 2);
  R(0, 1) = -a;
  R(1, 0) = a;
  Eigen::MatrixXcd eR = matrix_exponential(R);
  CHECK(std::abs(eR(0, 0) - std::cos(a)) <= 1e-14);
  CHECK(std::abs(eR(1, 0) - std::sin(a)) <= 1e-14);
}

TEST_CASE("inhomogeneous exponential step solves dz/dt = A z + b") {
  // Scalar closed form.
  Eigen::MatrixXcd A(1, 1);
  A(0, 0) = complex(-0.8, 0.3);
  Eigen::VectorXcd z0(1), b(1);
  z0(0) = complex(0.4, -0.1);
  b(0) = complex(1.2, 0.5);
  const real t = 0.7;
  Eigen::VectorXcd z = expm_inhomogeneous(A, z0, b, t);
  const complex ea = std::exp(A(0, 0) * t);
  const complex want = ea * z0(0) + (ea - complex(1.0)) / A(0, 0) * b(0);
  CHECK(std::abs(z(0) - want) <= 1e-14);

  // Matrix case against the variation-of-constants formula with a dense solve.
  Eigen::MatrixXcd B(3, 3);
  B << complex(-1.0, 0.2), complex(0.3, 0.0), complex(0.0, -0.4),
      complex(0.1, 0.1), complex(-0.5, 0.0), complex(0.2, 0.0),
      complex(0.0, 0.3), complex(-0.2, 0.1), complex(-0.9, -0.3);
  Eigen::VectorXcd w0(3), c(3);
  w0 << complex(1.0, 0.0), complex(0.0, 1.0), complex(0.5, -0.5);
  c << complex(0.2, 0.1), complex(-0.3, 0.0), complex(0.0, 0.4);
  Eigen::MatrixXcd eB = matrix_exponential(B * t);
  Eigen::VectorXcd ref =
      eB * w0 + B.fullPivLu().solve((eB - Eigen::MatrixXcd::Identity(3, 3)) * c);
  CHECK((expm_inhomogeneous(B, w0, c, t) - ref).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("per-mode evolution matrix couples density and velocity correctly") {
  FrozenSymbol fs;
  fs.dim = 2;
  fs.gamma1 = 1.2;
  fs.gamma2 = 0.9;
  std::vector<real> Dbar(4, 0.0);
  fs = frozen_symbol(newtonian(1.0, 1.0), 2, Dbar.data(), 1.2, 0.9);
  const real xi[2] = {1.7, -0.6};
  Eigen::MatrixXcd A = mode_matrix(fs, xi);
  Eigen::MatrixXd E = symbol_second_order(fs, xi);
  CHECK(std::abs(A(0, 0)) <= 1e-15);
  for (int a = 0; a < 2; ++a) {
    CHECK(std::abs(A(0, 1 + a) - complex(0.0, -1.2 * xi[a])) <= 1e-14);
    const real mhat = 0.9 / 1.2;
    CHECK(std::abs(A(1 + a, 0) - complex(0.0, -mhat / 1.2 * xi[a])) <= 1e-14);
    for (int b = 0; b < 2; ++b) CHECK(std::abs(A(1 + a, 1 + b) + E(a, b)) <= 1e-13);
  }
}
