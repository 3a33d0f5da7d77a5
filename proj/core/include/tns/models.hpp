/// @file models.hpp
/// @brief Material model families: shear/bulk viscosity functions and
///        barotropic pressure laws, with analytic first and second
///        derivatives.
///
/// The shear viscosity mu is a function of s = |sym-grad-deviator|^2 >= 0;
/// the bulk coefficient lam is a function of r = div u; the pressure pi is a
/// function of the density rho > 0.  All families store plain coefficient
/// data so a model can be rebuilt exactly from a run manifest.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tns/common.hpp"

namespace tns {

/// Scalar material function with analytic derivatives.
struct MaterialFunction {
  std::function<real(real)> value;
  std::function<real(real)> d1;
  std::function<real(real)> d2;

  real operator()(real x) const { return value(x); }
};

/// Pair (mu, lam) of viscosity functions.
struct ViscosityModel {
  std::string name;        ///< family tag, e.g. "newtonian"
  std::vector<real> mu_params;
  std::vector<real> lam_params;
  MaterialFunction mu;     ///< shear viscosity mu(s)
  MaterialFunction lam;    ///< bulk coefficient lam(r)
};

/// Barotropic pressure law pi(rho) with derivative dpi = pi'.
struct PressureLaw {
  std::string name;
  std::vector<real> params;
  MaterialFunction pi;
};

/// Constant mu and lam (classical compressible Newtonian fluid).
ViscosityModel newtonian(real mu0, real lam0);

/// mu(s) = mu0 * (1 + s)^{(p-2)/2}, lam constant.  p < 2 is shear-thinning,
/// p > 2 shear-thickening, p = 2 recovers the Newtonian case.
ViscosityModel power_law(real mu0, real p, real lam0);

/// mu(s) = mu0 + mu_s * s,  lam(r) = lam0 + lam_r * r.
ViscosityModel quadratic(real mu0, real mu_s, real lam0, real lam_r);

/// mu(s) = sum_i mu_c[i] s^i,  lam(r) = sum_i lam_c[i] r^i (Horner form).
ViscosityModel poly_viscosity(std::vector<real> mu_c, std::vector<real> lam_c);

/// mu(s) = mu0 / (1 + s), lam constant; loses ellipticity at s = 1.
ViscosityModel inverse_linear(real mu0, real lam0);

/// pi(rho) = coef * rho^gamma (gamma >= 1).
PressureLaw power_pressure(real coef, real gamma);

/// pi(rho) = sum_i c[i] rho^i.
PressureLaw poly_pressure(std::vector<real> c);

/// Rebuild a viscosity model from its (name, mu_params, lam_params) triple.
ViscosityModel make_viscosity(const std::string& name, const std::vector<real>& mu_params,
                              const std::vector<real>& lam_params);

/// Rebuild a pressure law from its (name, params) pair.
PressureLaw make_pressure(const std::string& name, const std::vector<real>& params);

}  // namespace tns
