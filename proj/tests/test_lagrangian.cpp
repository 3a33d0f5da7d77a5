/// @file test_lagrangian.cpp
/// @brief Flow-map integration, its inverse, and the transformed right-hand
///        sides in the moving frame.

#include <cmath>
#include <vector>

#include "doctest.h"
#include "test_helpers.hpp"
#include "tns/constitutive.hpp"
#include "tns/lagrangian.hpp"
#include "tns/norms.hpp"
#include "tns/spectral.hpp"

using namespace tns;
using namespace tns::test;

namespace {

Series constant_series(const Field& u, const TimeGrid& tg) {
  Series s;
  s.tg = tg;
  s.frames.assign(tg.nt, u);
  return s;
}

}  // namespace

TEST_CASE("constant velocity integrates to X = y + t c exactly") {
  Grid g(2, 16);
  TimeGrid tg{0.3, 7};
  Field c = Field::vector(g);
  for (real& v : c.comp(0)) v = 0.4;
  for (real& v : c.comp(1)) v = -0.15;
  FlowMap fm = flow_map(g, constant_series(c, tg));

  real worst = 0.0, jworst = 0.0;
  for (int i = 0; i < tg.nt; ++i) {
    const real t = tg.time(i);
    for (index_t p = 0; p < g.size(); ++p) {
      worst = std::max(worst, std::abs(fm.disp[i].at(0, p) - 0.4 * t));
      worst = std::max(worst, std::abs(fm.disp[i].at(1, p) + 0.15 * t));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          jworst = std::max(jworst,
                            std::abs(fm.jac[i].at(a * 2 + b, p) - (a == b ? 1.0 : 0.0)));
      jworst = std::max(jworst, std::abs(fm.det_jac[i].at(0, p) - 1.0));
    }
    CHECK(std::abs(fm.sigma[i]) <= 1e-13);
  }
  CHECK(worst <= 1e-13);
  CHECK(jworst <= 1e-12);
  CHECK(fm.sigma_ok);
}

TEST_CASE("pull-back / push-forward round trip") {
  Grid g(2, 32);
  TimeGrid tg{0.1, 9};
  Field u = random_trig(g, 2, 2, 71, 0.25);
  FlowMap fm = flow_map(g, constant_series(u, tg));
  REQUIRE(fm.sigma_ok);

  const Field& disp = fm.disp.back();
  Field pre = inverse_map_points(g, disp);  // X^{-1}(x) per node x
  // Composing X with X^{-1} must land back on the node.
  Field comp = evaluate_at(g, disp, pre);   // disp at the preimage
  int ij[2];
  real worst = 0.0;
  for (index_t p = 0; p < g.size(); ++p) {
    g.unflat(p, ij);
    for (int a = 0; a < 2; ++a) {
      const real xa = g.coord(ij[a]);
      worst = std::max(worst, std::abs(pre.at(a, p) + comp.at(a, p) - xa));
    }
  }
  CHECK(worst <= 1e-8);

  // A scalar transported back and forth returns to itself.
  Field f = Field::scalar(g);
  add_cosine(g, f, 0, 0.7, {2, 1}, 0.2);
  Field fwd = evaluate_at(g, f, map_points(g, disp));
  Field back = evaluate_at(g, fwd, pre);
  CHECK(max_abs_diff(back, f) <= 1e-8);
}

TEST_CASE("jacobian and defect are consistent: J (I - E) = I") {
  Grid g(2, 32);
  TimeGrid tg{0.12, 7};
  Field u = random_trig(g, 2, 2, 72, 0.3);
  FlowMap fm = flow_map(g, constant_series(u, tg));
  REQUIRE(fm.sigma_ok);
  const Field& J = fm.jac.back();
  const Field& E = fm.defect.back();
  real worst = 0.0;
  for (index_t p = 0; p < g.size(); ++p)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        real sum = 0.0;
        for (int c = 0; c < 2; ++c)
          sum += J.at(a * 2 + c, p) * ((c == b ? 1.0 : 0.0) - E.at(c * 2 + b, p));
        worst = std::max(worst, std::abs(sum - (a == b ? 1.0 : 0.0)));
      }
  CHECK(worst <= 1e-12);
  for (index_t p = 0; p < g.size(); ++p) CHECK(fm.det_jac.back().at(0, p) > 0.0);
}

TEST_CASE("sigma threshold violations are detected") {
  Grid g(2, 32);
  // Steep enough to leave the admissible deformation ball over the horizon,
  // but with dt |grad u| < 1 so each Picard step still contracts.
  TimeGrid tg{0.5, 17};
  Field u = random_trig(g, 2, 2, 73, 0.35);
  FlowMap fm = flow_map(g, constant_series(u, tg), 0.5);
  CHECK_FALSE(fm.sigma_ok);
  CHECK(fm.sigma.back() > 0.5);
  // sigma accumulates monotonically for this flow.
  CHECK(fm.sigma.front() == 0.0);
}

TEST_CASE("non-contractive step makes the Picard iteration fail loudly") {
  Grid g(2, 16);
  TimeGrid tg{0.5, 2};  // one huge step
  Field u = random_trig(g, 2, 2, 74, 50.0);
  CHECK_THROWS_AS(flow_map(g, constant_series(u, tg)), solver_failure);
}

TEST_CASE("material map of a constant label velocity is X = y + t w(y)") {
  Grid g(2, 32);
  TimeGrid tg{0.15, 9};
  Field w = random_trig(g, 2, 2, 81, 0.15);
  FlowMap fm = material_map(g, constant_series(w, tg));
  REQUIRE(fm.sigma_ok);
  real worst = 0.0;
  for (int i = 0; i < tg.nt; ++i) {
    const real t = tg.time(i);
    for (index_t p = 0; p < g.size(); ++p)
      for (int a = 0; a < 2; ++a)
        worst = std::max(worst, std::abs(fm.disp[i].at(a, p) - t * w.at(a, p)));
  }
  CHECK(worst <= 1e-13);
  // sigma grows linearly for a constant integrand.
  CHECK(fm.sigma[1] > 0.0);
  CHECK(std::abs(fm.sigma.back() - 4.0 * fm.sigma[2]) <= 1e-12 * fm.sigma.back());
}

TEST_CASE("material map trapezoid rule is exact for velocities linear in time") {
  Grid g(2, 16);
  TimeGrid tg{0.3, 7};
  Field a = random_trig(g, 2, 2, 82, 0.2);
  Field b = random_trig(g, 2, 2, 83, 0.4);
  Series s;
  s.tg = tg;
  for (int i = 0; i < tg.nt; ++i) {
    Field f(a);
    add_scaled(f, tg.time(i) / tg.T, b);
    s.frames.push_back(std::move(f));
  }
  FlowMap fm = material_map(g, s);
  real worst = 0.0;
  for (int i = 0; i < tg.nt; ++i) {
    const real t = tg.time(i);
    for (index_t p = 0; p < g.size(); ++p)
      for (int c = 0; c < 2; ++c) {
        const real want = t * a.at(c, p) + 0.5 * t * t / tg.T * b.at(c, p);
        worst = std::max(worst, std::abs(fm.disp[i].at(c, p) - want));
      }
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("material map Jacobian and defect match the closed form for one mode") {
  // w = A cos(pi k.y + phi) e_0 held constant in time: X = y + t w(y), so
  //   J = I + t grad w,  det J = 1 - t A pi k_0 sin(pi k.y + phi),
  // and E = I - J^{-1} follows from the 2x2 adjugate formula.
  Grid g(2, 32);
  TimeGrid tg{0.15, 6};
  const real A = 0.35, phi = 0.4;
  const int k0 = 2, k1 = 1;
  Field w = Field::vector(g);
  add_cosine(g, w, 0, A, {k0, k1}, phi);
  FlowMap fm = material_map(g, constant_series(w, tg));
  REQUIRE(fm.sigma_ok);
  const real t = tg.time(tg.nt - 1);
  int ij[2];
  real worst = 0.0;
  for (index_t p = 0; p < g.size(); ++p) {
    g.unflat(p, ij);
    const real arg = pi * (k0 * g.coord(ij[0]) + k1 * g.coord(ij[1])) + phi;
    const real g00 = -t * A * pi * k0 * std::sin(arg);
    const real g01 = -t * A * pi * k1 * std::sin(arg);
    const real J[4] = {1.0 + g00, g01, 0.0, 1.0};
    const real det = J[0] * J[3] - J[1] * J[2];
    const real Jinv[4] = {J[3] / det, -J[1] / det, -J[2] / det, J[0] / det};
    worst = std::max(worst, std::abs(fm.det_jac.back().at(0, p) - det));
    for (int c = 0; c < 4; ++c) {
      worst = std::max(worst, std::abs(fm.jac.back().at(c, p) - J[c]));
      const real Ewant = (c == 0 || c == 3 ? 1.0 : 0.0) - Jinv[c];
      worst = std::max(worst, std::abs(fm.defect.back().at(c, p) - Ewant));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("material map reports sigma violations") {
  Grid g(2, 32);
  TimeGrid tg{0.5, 17};
  Field w = random_trig(g, 2, 2, 84, 0.35);
  FlowMap fm = material_map(g, constant_series(w, tg), 0.5);
  CHECK_FALSE(fm.sigma_ok);
  CHECK(fm.sigma.back() > 0.5);
  CHECK(fm.sigma.front() == 0.0);
}

TEST_CASE("Fourier evaluation at mapped points matches the closed form") {
  Grid g(2, 32);
  Field f = Field::scalar(g);
  add_cosine(g, f, 0, 0.9, {2, 5}, 0.35);
  Field disp = Field::vector(g);
  for (real& v : disp.comp(0)) v = 0.31;  // rigid shift keeps band limits
  for (real& v : disp.comp(1)) v = -0.043;
  Field moved = evaluate_at(g, f, map_points(g, disp));
  int ij[2];
  real worst = 0.0;
  for (index_t p = 0; p < g.size(); ++p) {
    g.unflat(p, ij);
    const real y1 = g.coord(ij[0]) + 0.31, y2 = g.coord(ij[1]) - 0.043;
    const real want = 0.9 * std::cos(pi * (2.0 * y1 + 5.0 * y2) + 0.35);
    worst = std::max(worst, std::abs(moved.at(0, p) - want));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("transformed right-hand sides vanish in the flat frame") {
  // With zero Jacobian defect the transformed quantities reduce to the flat
  // ones: strain_t = D u, div_t = div u, G = 0, and F, which subtracts the
  // flat stress divergence, cancels.
  Grid g(2, 32);
  ViscosityModel m = quadratic(0.7, 0.25, 0.6, 0.1);
  PressureLaw pres = power_pressure(1.0, 2.0);
  Field u = random_trig(g, 2, 2, 75, 0.3);
  Field rho = Field::scalar(g);
  for (real& v : rho.comp(0)) v = 1.0;
  add_cosine(g, rho, 0, 0.1, {1, 1}, 0.0);
  Field E = Field::matrix(g);  // zero

  TransformedRhs tr = transformed_rhs(g, m, pres, rho, u, E);
  CHECK(max_abs_diff(tr.strain_t, strain(g, u)) <= 1e-12);
  CHECK(max_abs_diff(tr.div_t, divergence(g, u)) <= 1e-12);
  CHECK(max_abs(tr.G) <= 1e-13);
  CHECK(max_abs(tr.F) <= 1e-9);
  CHECK(max_abs_diff(tr.stress_t, stress(g, m, strain(g, u))) <= 1e-12);
}

TEST_CASE("rest state linearized right-hand sides vanish identically") {
  Grid g(2, 16);
  ViscosityModel m = power_law(1.0, 1.8, 1.0);
  PressureLaw pres = power_pressure(1.0, 2.0);
  Field rho0 = Field::scalar(g);
  for (real& v : rho0.comp(0)) v = 1.3;
  Field u0 = Field::vector(g);
  Field vartheta = Field::scalar(g);
  Field w = Field::vector(g);
  Field dt_w = Field::vector(g);
  Field E = Field::matrix(g);
  LinearizedRhs lr = linearized_rhs(g, m, pres, 1.3, rho0, u0, vartheta, w, dt_w, E);
  CHECK(max_abs(lr.G) <= 1e-13);
  CHECK(max_abs(lr.F) <= 1e-13);
}
