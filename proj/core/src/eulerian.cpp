#include "tns/eulerian.hpp"

#include <algorithm>
#include <cmath>

#include "tns/constitutive.hpp"
#include "tns/spectral.hpp"

namespace tns {

EulerianRhs eulerian_rhs(const Grid& g, const ViscosityModel& mod, const PressureLaw& pres,
                         const Field& rho, const Field& u) {
  const int d = g.dim();
  if (rho.ncomp != 1 || u.ncomp != d) throw invalid_parameter("eulerian_rhs: bad field shapes");

  EulerianRhs out;
  // Mass: -div(rho u) in divergence form keeps the k = 0 mode exactly.
  Field momentum = Field::vector(g);
  auto r = rho.comp(0);
  for (int a = 0; a < d; ++a) {
    auto m = momentum.comp(a);
    auto ua = u.comp(a);
    for (index_t p = 0; p < g.size(); ++p) m[p] = r[p] * ua[p];
  }
  out.drho = divergence(g, momentum);
  for (real& v : out.drho.data) v = -v;

  // Momentum: (div S(Du) - grad pi(rho)) / rho - (u . grad) u.
  Field divS = stress_divergence(g, mod, u);
  Field pi_field = Field::scalar(g);
  {
    auto o = pi_field.comp(0);
    for (index_t p = 0; p < g.size(); ++p) {
      if (!(r[p] > 0.0)) throw instability_detected("eulerian_rhs: nonpositive density");
      o[p] = pres.pi(r[p]);
    }
  }
  Field grad_pi = gradient(g, pi_field);
  Field gradu = jacobian(g, u);

  out.du = Field::vector(g);
  for (int j = 0; j < d; ++j) {
    auto o = out.du.comp(j);
    auto s = divS.comp(j);
    auto gp = grad_pi.comp(j);
    for (index_t p = 0; p < g.size(); ++p) o[p] = (s[p] - gp[p]) / r[p];
    for (int a = 0; a < d; ++a) {
      auto ua = u.comp(a);
      auto dj = gradu.comp(j * d + a);
      for (index_t p = 0; p < g.size(); ++p) o[p] -= ua[p] * dj[p];
    }
  }
  return out;
}

namespace {

real grid_cell(const Grid& g) {
  real cell = 1.0;
  for (int a = 0; a < g.dim(); ++a) cell *= g.spacing();
  return cell;
}

real field_sum(const Field& f) {
  real acc = 0.0;
  for (real v : f.comp(0)) acc += v;
  return acc;
}

}  // namespace

EulerianTrajectory rk4_march(const Grid& g, const ViscosityModel& mod, const PressureLaw& pres,
                             const Field& rho0, const Field& u0, const TimeGrid& tg,
                             const SourceFn& source, const EulerianOptions& opt) {
  if (opt.substeps < 1) throw invalid_parameter("rk4_march: substeps must be >= 1");
  const real cell = grid_cell(g);
  const real baseline = std::max({1.0, max_abs(rho0), max_abs(u0)});

  auto rhs = [&](real t, const Field& rho, const Field& u) {
    EulerianRhs f = eulerian_rhs(g, mod, pres, rho, u);
    if (source) source(t, f.drho, f.du);
    if (opt.dealias_rhs) {
      f.drho = dealias(g, f.drho);
      f.du = dealias(g, f.du);
    }
    return f;
  };

  EulerianTrajectory traj;
  traj.rho.tg = tg;
  traj.u.tg = tg;
  traj.rho.frames.push_back(rho0);
  traj.u.frames.push_back(u0);
  traj.mass.push_back(field_sum(rho0) * cell);

  Field rho = rho0, u = u0;
  const real h = tg.dt() / opt.substeps;
  for (int i = 0; i + 1 < tg.nt; ++i) {
    for (int s = 0; s < opt.substeps; ++s) {
      const real t = tg.time(i) + s * h;
      EulerianRhs k1 = rhs(t, rho, u);
      Field rho2 = axpy(rho, 0.5 * h, k1.drho), u2 = axpy(u, 0.5 * h, k1.du);
      EulerianRhs k2 = rhs(t + 0.5 * h, rho2, u2);
      Field rho3 = axpy(rho, 0.5 * h, k2.drho), u3 = axpy(u, 0.5 * h, k2.du);
      EulerianRhs k3 = rhs(t + 0.5 * h, rho3, u3);
      Field rho4 = axpy(rho, h, k3.drho), u4 = axpy(u, h, k3.du);
      EulerianRhs k4 = rhs(t + h, rho4, u4);

      add_scaled(rho, h / 6.0, k1.drho);
      add_scaled(rho, h / 3.0, k2.drho);
      add_scaled(rho, h / 3.0, k3.drho);
      add_scaled(rho, h / 6.0, k4.drho);
      add_scaled(u, h / 6.0, k1.du);
      add_scaled(u, h / 3.0, k2.du);
      add_scaled(u, h / 3.0, k3.du);
      add_scaled(u, h / 6.0, k4.du);

      if (max_abs(u) > opt.growth_limit * baseline || max_abs(rho) > opt.growth_limit * baseline)
        throw instability_detected("rk4_march: unbounded growth");
      for (real v : rho.comp(0))
        if (!(v > opt.rho_min))
          throw instability_detected("rk4_march: density fell below the floor");
    }
    traj.rho.frames.push_back(rho);
    traj.u.frames.push_back(u);
    traj.mass.push_back(field_sum(rho) * cell);
  }
  return traj;
}

Eigen::MatrixXcd mode_matrix(const FrozenSymbol& fs, const real* xi) {
  const int d = fs.dim;
  const complex im(0.0, 1.0);
  const real mhat = fs.gamma2 / fs.gamma1;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(1 + d, 1 + d);
  const Eigen::MatrixXd E = symbol_second_order(fs, xi);
  for (int a = 0; a < d; ++a) {
    A(0, 1 + a) = -fs.gamma1 * im * xi[a];
    A(1 + a, 0) = -(mhat / fs.gamma1) * im * xi[a];
    for (int b = 0; b < d; ++b) A(1 + a, 1 + b) = -E(a, b);
  }
  return A;
}

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& A) {
  const auto n = A.rows();
  const real norm = A.cwiseAbs().rowwise().sum().maxCoeff();  // induced inf-norm
  int squarings = 0;
  if (norm > 0.5) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
  Eigen::MatrixXcd B = A / std::pow(2.0, squarings);

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k <= 60; ++k) {
    term = (term * B) / static_cast<real>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-20 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Eigen::VectorXcd expm_inhomogeneous(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& z0,
                                    const Eigen::VectorXcd& b, real t) {
  const auto n = A.rows();
  Eigen::MatrixXcd aug = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = t * A;
  aug.topRightCorner(n, 1) = t * b;
  const Eigen::MatrixXcd E = matrix_exponential(aug);
  return E.topLeftCorner(n, n) * z0 + E.topRightCorner(n, 1);
}

}  // namespace tns
