#include "tns/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "tns/constitutive.hpp"
#include "tns/spectral.hpp"

namespace tns {

namespace {

real l2(const Field& f) {
  real acc = 0.0;
  for (real v : f.data) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace

Field reduce_resolvent(const Grid& g, const Field& G, const Field& F, real lambda, real coeff) {
  if (G.ncomp != 1 || F.ncomp != g.dim())
    throw invalid_parameter("reduce_resolvent: bad field shapes");
  Field out(F);
  add_scaled(out, -coeff / lambda, gradient(g, G));
  return out;
}

Field reduce_resolvent(const Grid& g, const Field& G, const Field& F, real lambda,
                       const Field& coeff) {
  if (G.ncomp != 1 || F.ncomp != g.dim() || coeff.ncomp != 1)
    throw invalid_parameter("reduce_resolvent: bad field shapes");
  Field out(F);
  Field gradG = gradient(g, G);
  auto c = coeff.comp(0);
  for (int j = 0; j < g.dim(); ++j) {
    auto o = out.comp(j);
    auto gg = gradG.comp(j);
    for (index_t p = 0; p < g.size(); ++p) o[p] -= c[p] * gg[p] / lambda;
  }
  return out;
}

LinearizedOperator build_linearized_operator(const Grid& g, const ViscosityModel& mod,
                                             const PressureLaw& pres, const Field& rho0,
                                             const Field& u0) {
  const int d = g.dim();
  if (rho0.ncomp != 1 || u0.ncomp != d)
    throw invalid_parameter("build_linearized_operator: bad field shapes");
  for (real r : rho0.comp(0))
    if (!(r > 0.0))
      throw invalid_parameter("build_linearized_operator: density must be positive");

  LinearizedOperator op;
  op.grid = &g;
  op.mod = mod;
  op.pres = pres;
  op.rho = rho0;
  op.pihat = Field::scalar(g);
  real mean_dpi = 0.0;
  {
    auto r = rho0.comp(0);
    auto ph = op.pihat.comp(0);
    for (index_t p = 0; p < g.size(); ++p) {
      const real dpi = pres.pi.d1(r[p]);
      ph[p] = dpi / r[p];
      mean_dpi += dpi;
    }
    mean_dpi /= static_cast<real>(g.size());
  }

  Field D0 = strain(g, u0);
  op.acoef = coefficient_tensor(g, mod, D0);

  std::vector<real> Dbar(d * d, 0.0);
  for (int c = 0; c < d * d; ++c) Dbar[c] = mean(D0, c);
  const real gamma1 = mean(rho0, 0);
  op.frozen = frozen_symbol(mod, d, Dbar.data(), gamma1, gamma1 * mean_dpi);
  return op;
}

Field apply_shifted_operator(const LinearizedOperator& op, real lambda, const Field& v) {
  const Grid& g = *op.grid;
  const int d = g.dim();
  if (v.ncomp != d) throw invalid_parameter("apply_shifted_operator: expected a velocity field");
  Field quasi = apply_quasilinear(g, op.acoef, v);

  Field rdiv = divergence(g, v);
  {
    auto o = rdiv.comp(0);
    auto r = op.rho.comp(0);
    for (index_t p = 0; p < g.size(); ++p) o[p] *= r[p];
  }
  Field grad_rdiv = gradient(g, rdiv);

  Field out = Field::vector(g);
  auto r = op.rho.comp(0);
  auto ph = op.pihat.comp(0);
  for (int j = 0; j < d; ++j) {
    auto o = out.comp(j);
    auto vv = v.comp(j);
    auto q = quasi.comp(j);
    auto gr = grad_rdiv.comp(j);
    for (index_t p = 0; p < g.size(); ++p)
      o[p] = lambda * vv[p] - q[p] / r[p] - ph[p] * gr[p] / lambda;
  }
  return out;
}

Field apply_shifted_operator_frozen(const LinearizedOperator& op, real lambda, const Field& v) {
  const Grid& g = *op.grid;
  const int d = g.dim();
  if (v.ncomp != d)
    throw invalid_parameter("apply_shifted_operator_frozen: expected a velocity field");
  Field quasi = apply_quasilinear(g, op.frozen.abar, v);
  Field grad_div = gradient(g, divergence(g, v));
  const real g1 = op.frozen.gamma1;
  const real pcoef = op.frozen.gamma2 / (op.frozen.gamma1 * lambda);
  Field out = Field::vector(g);
  for (int j = 0; j < d; ++j) {
    auto o = out.comp(j);
    auto vv = v.comp(j);
    auto q = quasi.comp(j);
    auto gd = grad_div.comp(j);
    for (index_t p = 0; p < g.size(); ++p)
      o[p] = lambda * vv[p] - q[p] / g1 - pcoef * gd[p];
  }
  return out;
}

ConstantSolver::ConstantSolver(const Grid& g, const FrozenSymbol& fs, real sigma, real lambda_p)
    : g_(&g), d_(g.dim()), sigma_(sigma) {
  if (fs.dim != d_) throw invalid_parameter("ConstantSolver: symbol/grid dimension mismatch");
  if (!(sigma > 0.0) || !(lambda_p > 0.0))
    throw invalid_parameter("ConstantSolver: parameters must be positive");
  inv_.assign(static_cast<std::size_t>(g.size()) * d_ * d_, 0.0);
  std::vector<int> ij(d_);
  std::vector<real> xi(d_);
  std::vector<char> nyq(d_);
  Eigen::MatrixXd M(d_, d_), Minv(d_, d_);
  const real pc = fs.gamma2 / (fs.gamma1 * lambda_p);
  for (index_t p = 0; p < g.size(); ++p) {
    g.unflat(p, ij.data());
    for (int a = 0; a < d_; ++a) {
      xi[a] = g.wavenumber(ij[a]);
      nyq[a] = (2 * std::abs(g.freq(ij[a])) == g.n()) ? 1 : 0;
    }
    // Per-bin matrix of the frozen operator exactly as the grid realizes it.
    // Taking the real part after an inverse transform zeroes coefficient
    // patterns that are odd across the unpaired Nyquist bins, so the realized
    // symbol deviates from the raw wavenumber products there:
    //  - second derivatives composed in spectral space (the a-term) lose a
    //    mixed product xi_l xi_m exactly when one of the two axes sits at
    //    Nyquist (the i*i factor is then imaginary); with zero or two Nyquist
    //    axes the factor is real and survives;
    //  - grad(div v) makes a physical-space round trip between its two first
    //    derivatives, so every product with a Nyquist axis drops, the
    //    diagonal ones included.
    // Anything else leaves the iteration a defective component on the
    // Nyquist bins that no number of sweeps can remove.
    for (int r = 0; r < d_; ++r)
      for (int c = 0; c < d_; ++c) {
        real acc = 0.0;
        for (int l = 0; l < d_; ++l)
          for (int m = 0; m < d_; ++m) {
            const real prod = (nyq[l] != nyq[m]) ? 0.0 : xi[l] * xi[m];
            acc += fs.abar[tensor_index(d_, r, c, l, m)] * prod;
          }
        real v = acc / fs.gamma1;
        if (!nyq[r] && !nyq[c]) v += pc * xi[r] * xi[c];
        if (r == c) v += sigma;
        M(r, c) = v;
      }
    Minv = M.inverse();
    for (int r = 0; r < d_; ++r)
      for (int c = 0; c < d_; ++c)
        inv_[(static_cast<std::size_t>(p) * d_ + r) * d_ + c] = Minv(r, c);
  }
}

void ConstantSolver::apply(SpectralField& F) const {
  const Grid& g = *g_;
  if (F.ncomp != d_) throw invalid_parameter("ConstantSolver::apply: expected d components");
  complex tmp[3];
  for (index_t p = 0; p < g.size(); ++p) {
    for (int r = 0; r < d_; ++r) {
      complex acc(0.0, 0.0);
      for (int c = 0; c < d_; ++c)
        acc += inv_[(static_cast<std::size_t>(p) * d_ + r) * d_ + c] * F.at(c, p);
      tmp[r] = acc;
    }
    for (int r = 0; r < d_; ++r) F.at(r, p) = tmp[r];
  }
}

Field ConstantSolver::apply(const Field& F) const {
  SpectralField sf = to_spectral(*g_, F);
  apply(sf);
  return to_physical(*g_, sf);
}

ResolventResult variable_resolvent_solve(const LinearizedOperator& op, real lambda,
                                         const Field& F, const RichardsonOptions& opt) {
  const Grid& g = *op.grid;
  if (!(lambda > 0.0)) throw invalid_parameter("variable_resolvent_solve: lambda must be positive");
  const real fnorm = l2(F);
  ResolventResult best;
  best.residual = std::numeric_limits<real>::infinity();
  if (fnorm == 0.0) {
    best.v = Field(g.dim(), g.size());
    best.residual = 0.0;
    best.converged = true;
    return best;
  }

  int total_iters = 0;
  for (int attempt = 0; attempt < opt.max_shift_tries; ++attempt) {
    // The plain preconditioned iteration (nu = 0) contracts at the size of the
    // coefficient perturbation; the shifted retries trade speed for robustness
    // when that perturbation is too large.
    const real nu = (attempt == 0) ? 0.0 : lambda * static_cast<real>(1 << (attempt - 1));
    ConstantSolver cs(g, op.frozen, lambda + nu, lambda);
    Field v(g.dim(), g.size());
    real best_local = std::numeric_limits<real>::infinity();
    int stall = 0;
    for (int m = 0; m < opt.max_iter; ++m) {
      Field Av = apply_shifted_operator(op, lambda, v);  // lambda v - B v
      Field resid(Av);
      resid -= F;
      const real rel = l2(resid) / fnorm;
      ++total_iters;
      if (rel < best.residual) {
        best.v = v;
        best.residual = rel;
        best.shift = nu;
      }
      if (rel <= opt.tol) {
        best.iterations = total_iters;
        best.converged = true;
        return best;
      }
      if (rel < best_local * (1.0 - 1e-12)) {
        best_local = rel;
        stall = 0;
      } else if (++stall >= opt.divergence_window) {
        break;  // no progress under this shift; retry with a larger one
      }
      // v <- [(lambda+nu) - Bbar]^{-1} (F + nu v + (B - Bbar) v)
      Field Abar_v = apply_shifted_operator_frozen(op, lambda, v);
      Field rhs(F);
      add_scaled(rhs, nu, v);
      rhs += Abar_v;
      rhs -= Av;
      v = cs.apply(rhs);
    }
  }
  best.iterations = total_iters;
  best.converged = false;
  return best;
}

Field recover_theta(const LinearizedOperator& op, real lambda, const Field& Gprime,
                    const Field& vnew) {
  const Grid& g = *op.grid;
  Field theta = divergence(g, vnew);
  auto o = theta.comp(0);
  auto r = op.rho.comp(0);
  auto gp = Gprime.comp(0);
  for (index_t p = 0; p < g.size(); ++p) o[p] = (gp[p] - r[p] * o[p]) / lambda;
  return theta;
}

MarchResult time_march(const LinearizedOperator& op, const Series& G, const Series& F,
                       const RichardsonOptions& opt) {
  const Grid& g = *op.grid;
  const int nt = G.tg.nt;
  if (F.tg.nt != nt || F.tg.T != G.tg.T)
    throw invalid_parameter("time_march: right-hand sides on different time grids");
  if (static_cast<int>(G.frames.size()) != nt || static_cast<int>(F.frames.size()) != nt)
    throw invalid_parameter("time_march: frame count mismatch");
  const real lambda = 1.0 / G.tg.dt();

  MarchResult out;
  out.theta.tg = G.tg;
  out.v.tg = G.tg;
  out.theta.frames.push_back(Field::scalar(g));
  out.v.frames.push_back(Field::vector(g));

  for (int n = 0; n + 1 < nt; ++n) {
    Field Gp(G.frames[n + 1]);
    add_scaled(Gp, lambda, out.theta.frames.back());
    Field Fp(F.frames[n + 1]);
    add_scaled(Fp, lambda, out.v.frames.back());
    Field Flam = reduce_resolvent(g, Gp, Fp, lambda, op.pihat);

    ResolventResult res = variable_resolvent_solve(op, lambda, Flam, opt);
    out.total_iterations += res.iterations;
    out.max_residual = std::max(out.max_residual, res.residual);
    if (!res.converged)
      throw solver_failure("time_march: Richardson iteration did not converge at step " +
                           std::to_string(n + 1));

    out.theta.frames.push_back(recover_theta(op, lambda, Gp, res.v));
    out.v.frames.push_back(std::move(res.v));
  }
  return out;
}

}  // namespace tns
