#include "tns/models.hpp"

#include <cmath>

namespace tns {

namespace {

MaterialFunction constant_fn(real c) {
  return {[c](real) { return c; }, [](real) { return 0.0; }, [](real) { return 0.0; }};
}

MaterialFunction linear_fn(real c0, real c1) {
  return {[c0, c1](real x) { return c0 + c1 * x; }, [c1](real) { return c1; },
          [](real) { return 0.0; }};
}

real horner(const std::vector<real>& c, real x) {
  real acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

std::vector<real> poly_derivative(const std::vector<real>& c) {
  std::vector<real> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<real>(i) * c[i]);
  return d;
}

MaterialFunction poly_fn(std::vector<real> c) {
  std::vector<real> c1 = poly_derivative(c);
  std::vector<real> c2 = poly_derivative(c1);
  return {[c](real x) { return horner(c, x); }, [c1](real x) { return horner(c1, x); },
          [c2](real x) { return horner(c2, x); }};
}

}  // namespace

ViscosityModel newtonian(real mu0, real lam0) {
  if (!(mu0 > 0.0)) throw invalid_parameter("newtonian: mu0 must be positive");
  ViscosityModel m;
  m.name = "newtonian";
  m.mu_params = {mu0};
  m.lam_params = {lam0};
  m.mu = constant_fn(mu0);
  m.lam = constant_fn(lam0);
  return m;
}

ViscosityModel power_law(real mu0, real p, real lam0) {
  if (!(mu0 > 0.0)) throw invalid_parameter("power_law: mu0 must be positive");
  if (!(p > 1.0)) throw invalid_parameter("power_law: exponent p must exceed 1");
  ViscosityModel m;
  m.name = "power_law";
  m.mu_params = {mu0, p};
  m.lam_params = {lam0};
  const real a = 0.5 * (p - 2.0);
  m.mu = {[mu0, a](real s) { return mu0 * std::pow(1.0 + s, a); },
          [mu0, a](real s) { return mu0 * a * std::pow(1.0 + s, a - 1.0); },
          [mu0, a](real s) { return mu0 * a * (a - 1.0) * std::pow(1.0 + s, a - 2.0); }};
  m.lam = constant_fn(lam0);
  return m;
}

ViscosityModel quadratic(real mu0, real mu_s, real lam0, real lam_r) {
  if (!(mu0 > 0.0)) throw invalid_parameter("quadratic: mu0 must be positive");
  ViscosityModel m;
  m.name = "quadratic";
  m.mu_params = {mu0, mu_s};
  m.lam_params = {lam0, lam_r};
  m.mu = linear_fn(mu0, mu_s);
  m.lam = linear_fn(lam0, lam_r);
  return m;
}

ViscosityModel poly_viscosity(std::vector<real> mu_c, std::vector<real> lam_c) {
  if (mu_c.empty() || lam_c.empty())
    throw invalid_parameter("poly_viscosity: empty coefficient list");
  ViscosityModel m;
  m.name = "poly";
  m.mu_params = mu_c;
  m.lam_params = lam_c;
  m.mu = poly_fn(std::move(mu_c));
  m.lam = poly_fn(std::move(lam_c));
  return m;
}

ViscosityModel inverse_linear(real mu0, real lam0) {
  if (!(mu0 > 0.0)) throw invalid_parameter("inverse_linear: mu0 must be positive");
  ViscosityModel m;
  m.name = "inverse_linear";
  m.mu_params = {mu0};
  m.lam_params = {lam0};
  m.mu = {[mu0](real s) { return mu0 / (1.0 + s); },
          [mu0](real s) { real t = 1.0 + s; return -mu0 / (t * t); },
          [mu0](real s) { real t = 1.0 + s; return 2.0 * mu0 / (t * t * t); }};
  m.lam = constant_fn(lam0);
  return m;
}

PressureLaw power_pressure(real coef, real gamma) {
  if (!(coef > 0.0)) throw invalid_parameter("power_pressure: coefficient must be positive");
  if (!(gamma >= 1.0)) throw invalid_parameter("power_pressure: gamma must be >= 1");
  PressureLaw p;
  p.name = "power";
  p.params = {coef, gamma};
  p.pi = {[coef, gamma](real r) { return coef * std::pow(r, gamma); },
          [coef, gamma](real r) { return coef * gamma * std::pow(r, gamma - 1.0); },
          [coef, gamma](real r) { return coef * gamma * (gamma - 1.0) * std::pow(r, gamma - 2.0); }};
  return p;
}

PressureLaw poly_pressure(std::vector<real> c) {
  if (c.empty()) throw invalid_parameter("poly_pressure: empty coefficient list");
  PressureLaw p;
  p.name = "poly";
  p.params = c;
  p.pi = poly_fn(std::move(c));
  return p;
}

ViscosityModel make_viscosity(const std::string& name, const std::vector<real>& mu_params,
                              const std::vector<real>& lam_params) {
  auto need = [&](std::size_t nmu, std::size_t nlam) {
    if (mu_params.size() != nmu || lam_params.size() != nlam)
      throw invalid_parameter("make_viscosity: wrong parameter count for family '" + name + "'");
  };
  if (name == "newtonian") {
    need(1, 1);
    return newtonian(mu_params[0], lam_params[0]);
  }
  if (name == "power_law") {
    need(2, 1);
    return power_law(mu_params[0], mu_params[1], lam_params[0]);
  }
  if (name == "quadratic") {
    need(2, 2);
    return quadratic(mu_params[0], mu_params[1], lam_params[0], lam_params[1]);
  }
  if (name == "poly") return poly_viscosity(mu_params, lam_params);
  if (name == "inverse_linear") {
    need(1, 1);
    return inverse_linear(mu_params[0], lam_params[0]);
  }
  throw invalid_parameter("make_viscosity: unknown family '" + name + "'");
}

PressureLaw make_pressure(const std::string& name, const std::vector<real>& params) {
  if (name == "power") {
    if (params.size() != 2) throw invalid_parameter("make_pressure: power law takes 2 parameters");
    return power_pressure(params[0], params[1]);
  }
  if (name == "poly") return poly_pressure(params);
  throw invalid_parameter("make_pressure: unknown family '" + name + "'");
}

}  // namespace tns
