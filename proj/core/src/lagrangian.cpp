#include "tns/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "tns/spectral.hpp"

namespace tns {

Field evaluate_at(const Grid& g, const Field& f, const Field& pts) {
  return fourier_eval(g, to_spectral(g, f), pts);
}

Field map_points(const Grid& g, const Field& disp) {
  const int d = g.dim();
  if (disp.ncomp != d) throw invalid_parameter("map_points: expected a vector field");
  Field pts(disp);
  std::vector<int> ij(d);
  for (index_t p = 0; p < g.size(); ++p) {
    g.unflat(p, ij.data());
    for (int a = 0; a < d; ++a) pts.at(a, p) += g.coord(ij[a]);
  }
  return pts;
}

namespace {

real max_frobenius(const Grid& g, int ncomp, const Field& m) {
  real worst = 0.0;
  for (index_t p = 0; p < g.size(); ++p) {
    real fro2 = 0.0;
    for (int c = 0; c < ncomp; ++c) fro2 += m.at(c, p) * m.at(c, p);
    worst = std::max(worst, fro2);
  }
  return std::sqrt(worst);
}

/// Jacobians, defects and determinants from the stored displacements, plus
/// the sigma verdict.  Shared by both map builders.
void finalize_map(const Grid& g, FlowMap& fm) {
  const int d = g.dim();
  fm.sigma_ok = true;
  for (real s : fm.sigma)
    if (s > fm.sigma_threshold) fm.sigma_ok = false;

  const int nt = static_cast<int>(fm.disp.size());
  fm.jac.reserve(nt);
  fm.defect.reserve(nt);
  fm.det_jac.reserve(nt);
  Eigen::MatrixXd J(d, d), Jinv(d, d);
  for (int i = 0; i < nt; ++i) {
    Field gradd = jacobian(g, fm.disp[i]);
    Field jac = Field::matrix(g);
    Field defect = Field::matrix(g);
    Field det = Field::scalar(g);
    for (index_t p = 0; p < g.size(); ++p) {
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) J(r, c) = gradd.at(r * d + c, p) + (r == c ? 1.0 : 0.0);
      const real dj = J.determinant();
      if (!(std::abs(dj) > 1e-8))
        throw solver_failure("flow map: Jacobian became singular");
      Jinv = J.inverse();
      det.at(0, p) = dj;
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          jac.at(r * d + c, p) = J(r, c);
          defect.at(r * d + c, p) = (r == c ? 1.0 : 0.0) - Jinv(r, c);
        }
    }
    fm.jac.push_back(std::move(jac));
    fm.defect.push_back(std::move(defect));
    fm.det_jac.push_back(std::move(det));
  }
}

}  // namespace

FlowMap flow_map(const Grid& g, const Series& u, real sigma_threshold, int max_picard,
                 real picard_tol) {
  const int d = g.dim();
  const int nt = u.tg.nt;
  if (static_cast<int>(u.frames.size()) != nt)
    throw invalid_parameter("flow_map: frame count mismatch");
  const real dt = u.tg.dt();

  std::vector<SpectralField> su(nt), sgrad(nt);
  for (int i = 0; i < nt; ++i) {
    su[i] = to_spectral(g, u.frames[i]);
    sgrad[i] = to_spectral(g, jacobian(g, u.frames[i]));
  }

  FlowMap fm;
  fm.tg = u.tg;
  fm.sigma_threshold = sigma_threshold;
  fm.disp.reserve(nt);
  fm.sigma.assign(nt, 0.0);

  Field disp = Field::vector(g);
  Field accum = Field::matrix(g);
  fm.disp.push_back(disp);

  for (int i = 0; i + 1 < nt; ++i) {
    Field pts_i = map_points(g, disp);
    Field u_i = fourier_eval(g, su[i], pts_i);

    // Predictor then Picard on X_{i+1} = X_i + dt/2 (u_i(X_i) + u_{i+1}(X_{i+1})).
    Field disp_next = disp;
    add_scaled(disp_next, dt, u_i);
    bool converged = false;
    for (int it = 0; it < max_picard; ++it) {
      Field u_next = fourier_eval(g, su[i + 1], map_points(g, disp_next));
      Field cand = disp;
      add_scaled(cand, 0.5 * dt, u_i);
      add_scaled(cand, 0.5 * dt, u_next);
      Field delta = cand;
      delta -= disp_next;
      disp_next = std::move(cand);
      if (max_abs(delta) <= picard_tol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw solver_failure("flow_map: Picard iteration did not converge; reduce the time step");

    Field grad_i = fourier_eval(g, sgrad[i], pts_i);
    Field grad_next = fourier_eval(g, sgrad[i + 1], map_points(g, disp_next));
    add_scaled(accum, 0.5 * dt, grad_i);
    add_scaled(accum, 0.5 * dt, grad_next);
    fm.sigma[i + 1] = max_frobenius(g, d * d, accum);

    disp = disp_next;
    fm.disp.push_back(disp);
  }

  finalize_map(g, fm);
  return fm;
}

FlowMap material_map(const Grid& g, const Series& w, real sigma_threshold) {
  const int d = g.dim();
  const int nt = w.tg.nt;
  if (static_cast<int>(w.frames.size()) != nt)
    throw invalid_parameter("material_map: frame count mismatch");
  for (const Field& f : w.frames)
    if (f.ncomp != d) throw invalid_parameter("material_map: expected vector frames");
  const real dt = w.tg.dt();

  FlowMap fm;
  fm.tg = w.tg;
  fm.sigma_threshold = sigma_threshold;
  fm.disp.reserve(nt);
  fm.sigma.assign(nt, 0.0);

  Field disp = Field::vector(g);
  Field accum = Field::matrix(g);
  fm.disp.push_back(disp);

  Field grad_prev = jacobian(g, w.frames[0]);
  for (int i = 0; i + 1 < nt; ++i) {
    add_scaled(disp, 0.5 * dt, w.frames[i]);
    add_scaled(disp, 0.5 * dt, w.frames[i + 1]);
    Field grad_next = jacobian(g, w.frames[i + 1]);
    add_scaled(accum, 0.5 * dt, grad_prev);
    add_scaled(accum, 0.5 * dt, grad_next);
    grad_prev = std::move(grad_next);
    fm.sigma[i + 1] = max_frobenius(g, d * d, accum);
    fm.disp.push_back(disp);
  }

  finalize_map(g, fm);
  return fm;
}

Field inverse_map_points(const Grid& g, const Field& disp, real tol, int maxit) {
  const int d = g.dim();
  if (disp.ncomp != d) throw invalid_parameter("inverse_map_points: expected a vector field");
  SpectralField sd = to_spectral(g, disp);
  // Start from y = x (the grid itself) and iterate y <- x - disp(y).
  Field x = map_points(g, Field::vector(g));
  Field y = x;
  for (int it = 0; it < maxit; ++it) {
    Field dy = fourier_eval(g, sd, y);
    Field ynew = x;
    ynew -= dy;
    Field delta = ynew;
    delta -= y;
    y = std::move(ynew);
    if (max_abs(delta) <= tol) return y;
  }
  throw solver_failure("inverse_map_points: fixed-point iteration did not converge");
}

namespace {

/// out_{jk} = sum_l A_{jl} B_{lk} pointwise for matrix fields.
Field matmul_field(const Grid& g, int d, const Field& A, const Field& B) {
  Field out = Field::matrix(g);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      auto o = out.comp(j * d + k);
      for (int l = 0; l < d; ++l) {
        auto a = A.comp(j * d + l);
        auto b = B.comp(l * d + k);
        for (index_t p = 0; p < g.size(); ++p) o[p] += a[p] * b[p];
      }
    }
  return out;
}

Field trace_field(const Grid& g, int d, const Field& A) {
  Field out = Field::scalar(g);
  auto o = out.comp(0);
  for (int j = 0; j < d; ++j) {
    auto a = A.comp(j * d + j);
    for (index_t p = 0; p < g.size(); ++p) o[p] += a[p];
  }
  return out;
}

}  // namespace

TransformedRhs transformed_rhs(const Grid& g, const ViscosityModel& mod, const PressureLaw& pres,
                               const Field& rho, const Field& u, const Field& E) {
  const int d = g.dim();
  if (rho.ncomp != 1 || u.ncomp != d || E.ncomp != d * d)
    throw invalid_parameter("transformed_rhs: bad field shapes");

  Field gradu = jacobian(g, u);
  Field graduE = matmul_field(g, d, gradu, E);
  Field trE = trace_field(g, d, graduE);

  TransformedRhs out;
  // strain_t = sym(grad u) - sym(grad u E)
  out.strain_t = Field::matrix(g);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      auto o = out.strain_t.comp(j * d + k);
      auto a1 = gradu.comp(j * d + k);
      auto a2 = gradu.comp(k * d + j);
      auto b1 = graduE.comp(j * d + k);
      auto b2 = graduE.comp(k * d + j);
      for (index_t p = 0; p < g.size(); ++p)
        o[p] = 0.5 * (a1[p] + a2[p]) - 0.5 * (b1[p] + b2[p]);
    }
  out.div_t = trace_field(g, d, out.strain_t);
  out.stress_t = stress(g, mod, out.strain_t);

  // G = rho * tr(grad u E)
  out.G = Field::scalar(g);
  {
    auto o = out.G.comp(0);
    auto r = rho.comp(0);
    auto t = trE.comp(0);
    for (index_t p = 0; p < g.size(); ++p) o[p] = r[p] * t[p];
  }

  // F = (grad pi) E + div stress_t - Xi - div S(Du)
  Field pi_field = Field::scalar(g);
  {
    auto o = pi_field.comp(0);
    auto r = rho.comp(0);
    for (index_t p = 0; p < g.size(); ++p) o[p] = pres.pi(r[p]);
  }
  Field grad_pi = gradient(g, pi_field);

  Field divS_t = divergence_matrix(g, out.stress_t);
  SpectralField s_stress = to_spectral(g, out.stress_t);
  std::vector<Field> dS(d);  // dS[l] = d_l stress_t (matrix field)
  for (int l = 0; l < d; ++l) dS[l] = to_physical(g, derivative(g, s_stress, l, 1));

  Field divS_u = stress_divergence(g, mod, u);

  out.F = Field::vector(g);
  for (int j = 0; j < d; ++j) {
    auto o = out.F.comp(j);
    for (int l = 0; l < d; ++l) {
      auto gp = grad_pi.comp(l);
      auto e = E.comp(l * d + j);
      for (index_t p = 0; p < g.size(); ++p) o[p] += gp[p] * e[p];
    }
    auto ds = divS_t.comp(j);
    auto du = divS_u.comp(j);
    for (index_t p = 0; p < g.size(); ++p) o[p] += ds[p] - du[p];
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        auto dl = dS[l].comp(j * d + k);
        auto e = E.comp(l * d + k);
        for (index_t p = 0; p < g.size(); ++p) o[p] -= dl[p] * e[p];
      }
  }
  return out;
}

LinearizedRhs linearized_rhs(const Grid& g, const ViscosityModel& mod, const PressureLaw& pres,
                             real rho_ref, const Field& rho0, const Field& u0,
                             const Field& vartheta, const Field& w, const Field& dt_w,
                             const Field& E) {
  const int d = g.dim();
  if (rho0.ncomp != 1 || vartheta.ncomp != 1 || u0.ncomp != d || w.ncomp != d ||
      dt_w.ncomp != d || E.ncomp != d * d)
    throw invalid_parameter("linearized_rhs: bad field shapes");

  Field rho(rho0);
  rho += vartheta;
  TransformedRhs ex = transformed_rhs(g, mod, pres, rho, w, E);

  LinearizedRhs out;
  // G = G_exact - vartheta div w - rho0 div u0
  out.G = ex.G;
  {
    Field divw = divergence(g, w);
    Field divu0 = divergence(g, u0);
    auto o = out.G.comp(0);
    auto th = vartheta.comp(0);
    auto dw = divw.comp(0);
    auto r0 = rho0.comp(0);
    auto d0 = divu0.comp(0);
    for (index_t p = 0; p < g.size(); ++p) o[p] -= th[p] * dw[p] + r0[p] * d0[p];
  }

  // F = F_exact - vartheta dt_w + div S(Dw) - A(Du0) : grad^2 (w - u0)
  //     - pi'(rho0) grad theta0 - (pi'(rho) - pi'(rho0)) grad(theta0 + vartheta)
  out.F = ex.F;
  add_scaled(out.F, 1.0, stress_divergence(g, mod, w));

  Field wminus(w);
  wminus -= u0;
  Field a_u0 = apply_quasilinear(g, coefficient_tensor(g, mod, strain(g, u0)), wminus);
  out.F -= a_u0;

  // theta0 + vartheta = rho - rho_ref; grad theta0 = grad rho0 (rho_ref const).
  Field grad_rho0 = gradient(g, rho0);
  Field total_pert(rho);
  for (real& v : total_pert.data) v -= rho_ref;
  Field grad_total = gradient(g, total_pert);

  for (int j = 0; j < d; ++j) {
    auto o = out.F.comp(j);
    auto th = vartheta.comp(0);
    auto dtw = dt_w.comp(j);
    auto g0 = grad_rho0.comp(j);
    auto gt = grad_total.comp(j);
    auto r = rho.comp(0);
    auto r0 = rho0.comp(0);
    for (index_t p = 0; p < g.size(); ++p) {
      const real dpi0 = pres.pi.d1(r0[p]);
      const real dpi = pres.pi.d1(r[p]);
      o[p] -= th[p] * dtw[p] + dpi0 * g0[p] + (dpi - dpi0) * gt[p];
    }
  }
  return out;
}

}  // namespace tns
