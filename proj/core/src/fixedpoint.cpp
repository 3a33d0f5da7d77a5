#include "tns/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tns/constitutive.hpp"
#include "tns/spectral.hpp"

namespace tns {

namespace {

void check_problem(const Problem& pb) {
  if (pb.grid == nullptr) throw invalid_parameter("problem: missing grid");
  const Grid& g = *pb.grid;
  if (pb.rho0.ncomp != 1 || pb.rho0.npts != g.size())
    throw invalid_parameter("problem: rho0 must be a scalar field on the grid");
  if (pb.u0.ncomp != g.dim() || pb.u0.npts != g.size())
    throw invalid_parameter("problem: u0 must be a velocity field on the grid");
  if (!(pb.tg.T > 0.0) || pb.tg.nt < 2) throw invalid_parameter("problem: bad time grid");
  for (real r : pb.rho0.comp(0))
    if (!(r > 0.0)) throw invalid_parameter("problem: initial density must be positive");
}

real grid_cell(const Grid& g) {
  real cell = 1.0;
  for (int a = 0; a < g.dim(); ++a) cell *= g.spacing();
  return cell;
}

}  // namespace

FixedPointState zero_state(const Problem& pb) {
  check_problem(pb);
  FixedPointState s;
  s.theta.tg = pb.tg;
  s.w.tg = pb.tg;
  for (int i = 0; i < pb.tg.nt; ++i) {
    s.theta.frames.push_back(Field::scalar(*pb.grid));
    s.w.frames.push_back(pb.u0);
  }
  return s;
}

real gauge(const Problem& pb, const FixedPointState& s) {
  const Grid& g = *pb.grid;
  Series dev;
  dev.tg = s.w.tg;
  for (const Field& f : s.w.frames) {
    Field d(f);
    d -= pb.u0;
    dev.frames.push_back(std::move(d));
  }
  return w1p_mixed_norm(g, s.theta, pb.p, 1, pb.q) + parabolic_norm(g, dev, pb.p, pb.q);
}

real state_distance(const Problem& pb, const FixedPointState& a, const FixedPointState& b) {
  const Grid& g = *pb.grid;
  Series dth, dw;
  dth.tg = a.theta.tg;
  dw.tg = a.w.tg;
  if (a.theta.frames.size() != b.theta.frames.size() || a.w.frames.size() != b.w.frames.size())
    throw invalid_parameter("state_distance: states on different time grids");
  for (std::size_t i = 0; i < a.theta.frames.size(); ++i) {
    Field t(a.theta.frames[i]);
    t -= b.theta.frames[i];
    dth.frames.push_back(std::move(t));
    Field w(a.w.frames[i]);
    w -= b.w.frames[i];
    dw.frames.push_back(std::move(w));
  }
  return w1p_mixed_norm(g, dth, pb.p, 1, pb.q) + parabolic_norm(g, dw, pb.p, pb.q);
}

namespace {

/// Seeded band-limited random field: white noise projected onto modes with
/// |freq| <= kmax on every axis.
Field random_smooth_field(const Grid& g, int ncomp, int kmax, std::mt19937_64& rng) {
  std::normal_distribution<real> gauss(0.0, 1.0);
  Field f(ncomp, g.size());
  for (real& v : f.data) v = gauss(rng);
  SpectralField sf = to_spectral(g, f);
  const int d = g.dim();
  std::vector<int> ij(d);
  for (index_t p = 0; p < g.size(); ++p) {
    g.unflat(p, ij.data());
    bool keep = true;
    for (int a = 0; a < d; ++a)
      if (std::abs(g.freq(ij[a])) > kmax) keep = false;
    if (!keep)
      for (int c = 0; c < ncomp; ++c) sf.at(c, p) = complex(0.0, 0.0);
  }
  return to_physical(g, sf);
}

}  // namespace

FixedPointState random_state(const Problem& pb, real target_gauge, std::uint64_t seed) {
  check_problem(pb);
  if (!(target_gauge > 0.0)) throw invalid_parameter("random_state: gauge target must be positive");
  const Grid& g = *pb.grid;
  std::mt19937_64 rng(seed);
  const int kmax = std::min(g.n() / 3, 4);
  Field theta_shape = random_smooth_field(g, 1, kmax, rng);
  Field w_shape = random_smooth_field(g, g.dim(), kmax, rng);

  FixedPointState s;
  s.theta.tg = pb.tg;
  s.w.tg = pb.tg;
  for (int i = 0; i < pb.tg.nt; ++i) {
    const real tau = pb.tg.time(i) / pb.tg.T;
    const real ramp = tau * tau * (3.0 - 2.0 * tau);
    Field th(theta_shape);
    th *= ramp;
    s.theta.frames.push_back(std::move(th));
    Field w(w_shape);
    w *= ramp;
    w += pb.u0;
    s.w.frames.push_back(std::move(w));
  }
  const real g0 = gauge(pb, s);
  if (!(g0 > 0.0)) throw solver_failure("random_state: degenerate random shape");
  const real scale = target_gauge / g0;
  for (int i = 0; i < pb.tg.nt; ++i) {
    s.theta.frames[i] *= scale;
    Field dev(s.w.frames[i]);
    dev -= pb.u0;
    dev *= scale;
    dev += pb.u0;
    s.w.frames[i] = std::move(dev);
  }
  return s;
}

FixedPointState phi_map(const Problem& pb, const FixedPointState& s, PhiInfo* info,
                        FlowMap* flow_out) {
  check_problem(pb);
  const Grid& g = *pb.grid;
  if (s.w.tg.nt != pb.tg.nt || s.theta.tg.nt != pb.tg.nt)
    throw invalid_parameter("phi_map: state frame count mismatch");

  FlowMap fm = material_map(g, s.w, pb.sigma_threshold);
  if (!fm.sigma_ok)
    throw sigma_violation("phi_map: flow map exceeded the deformation bound sigma");

  Series dw = time_derivative(g, s.w);

  LinearizedOperator op = build_linearized_operator(g, pb.mod, pb.pres, pb.rho0, pb.u0);

  Series Gs, Fs;
  Gs.tg = pb.tg;
  Fs.tg = pb.tg;
  for (int i = 0; i < pb.tg.nt; ++i) {
    LinearizedRhs lr = linearized_rhs(g, pb.mod, pb.pres, pb.rho_ref, pb.rho0, pb.u0,
                                      s.theta.frames[i], s.w.frames[i], dw.frames[i],
                                      fm.defect[i]);
    Gs.frames.push_back(std::move(lr.G));
    auto r = pb.rho0.comp(0);
    for (int j = 0; j < g.dim(); ++j) {
      auto f = lr.F.comp(j);
      for (index_t p = 0; p < g.size(); ++p) f[p] /= r[p];
    }
    Fs.frames.push_back(std::move(lr.F));
  }

  MarchResult mr = time_march(op, Gs, Fs, pb.rich);

  if (info) {
    info->sigma_max = *std::max_element(fm.sigma.begin(), fm.sigma.end());
    info->richardson_iterations = mr.total_iterations;
    info->max_residual = mr.max_residual;
  }
  if (flow_out) *flow_out = std::move(fm);

  FixedPointState out;
  out.theta = std::move(mr.theta);
  out.w.tg = pb.tg;
  for (Field& v : mr.v.frames) {
    v += pb.u0;
    out.w.frames.push_back(std::move(v));
  }
  return out;
}

ContractionReport contraction_study(const Problem& pb, int npairs, std::uint64_t seed) {
  if (npairs < 1) throw invalid_parameter("contraction_study: need at least one pair");
  ContractionReport rep;
  rep.T = pb.tg.T;

  FixedPointState rest = zero_state(pb);
  FixedPointState first = phi_map(pb, rest);
  rep.first_iterate_gauge = gauge(pb, first);
  rep.ball_gauge = 2.0 * rep.first_iterate_gauge;

  for (int i = 0; i < npairs; ++i) {
    FixedPointState a = random_state(pb, 0.5 * rep.ball_gauge, seed + 2 * i);
    FixedPointState b = random_state(pb, 0.5 * rep.ball_gauge, seed + 2 * i + 1);
    const real den = state_distance(pb, a, b);
    FixedPointState fa = phi_map(pb, a);
    FixedPointState fb = phi_map(pb, b);
    const real num = state_distance(pb, fa, fb);
    rep.ratios.push_back(num / den);
  }
  rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  return rep;
}

MappedTrajectory map_back(const Problem& pb, const FixedPointState& s, const FlowMap& fm) {
  const Grid& g = *pb.grid;
  const real cell = grid_cell(g);
  MappedTrajectory out;
  out.rho.tg = pb.tg;
  out.u.tg = pb.tg;
  for (int i = 0; i < pb.tg.nt; ++i) {
    Field pre = inverse_map_points(g, fm.disp[i]);
    Field rho_l(pb.rho0);
    rho_l += s.theta.frames[i];
    Field rho_e = evaluate_at(g, rho_l, pre);
    Field u_e = evaluate_at(g, s.w.frames[i], pre);
    real m = 0.0;
    for (real v : rho_e.comp(0)) m += v;
    out.mass.push_back(m * cell);
    out.rho.frames.push_back(std::move(rho_e));
    out.u.frames.push_back(std::move(u_e));
  }
  return out;
}

namespace {

/// Mass carried by the volume element that is discretely compatible with the
/// implicit Euler mass update: Jdet^{n+1} = Jdet^n (1 + dt * Dtrans^{n+1}),
/// where Dtrans = tr(grad w (I - E)) is the transformed divergence.  At a
/// fixed point rho^{n+1} (1 + dt Dtrans^{n+1}) = rho^n pointwise, so the sum
/// rho^n Jdet^n stays constant.
std::vector<real> compatible_mass(const Problem& pb, const FixedPointState& s,
                                  const FlowMap& fm) {
  const Grid& g = *pb.grid;
  const int d = g.dim();
  const real cell = grid_cell(g);
  const real dt = pb.tg.dt();
  Field jdet = Field::scalar(g);
  for (real& v : jdet.data) v = 1.0;

  std::vector<real> mass;
  for (int i = 0; i < pb.tg.nt; ++i) {
    if (i > 0) {
      Field gradw = jacobian(g, s.w.frames[i]);
      Field dtr = divergence(g, s.w.frames[i]);
      auto o = dtr.comp(0);
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) {
          auto gw = gradw.comp(j * d + l);
          auto e = fm.defect[i].comp(l * d + j);
          for (index_t p = 0; p < g.size(); ++p) o[p] -= gw[p] * e[p];
        }
      auto jd = jdet.comp(0);
      for (index_t p = 0; p < g.size(); ++p) jd[p] *= 1.0 + dt * o[p];
    }
    real m = 0.0;
    auto r0 = pb.rho0.comp(0);
    auto th = s.theta.frames[i].comp(0);
    auto jd = jdet.comp(0);
    for (index_t p = 0; p < g.size(); ++p) m += (r0[p] + th[p]) * jd[p];
    mass.push_back(m * cell);
  }
  return mass;
}

}  // namespace

NonlinearSolveReport solve_nonlinear(const Problem& pb, real tol, int max_iter,
                                     int max_halvings) {
  check_problem(pb);
  Problem work = pb;
  NonlinearSolveReport rep;

  for (int halving = 0; halving <= max_halvings; ++halving) {
    rep.halvings = halving;
    rep.T_used = work.tg.T;
    rep.update_history.clear();
    try {
      FixedPointState cur = zero_state(work);
      bool ok = false;
      for (int it = 0; it < max_iter; ++it) {
        FixedPointState next = phi_map(work, cur);
        const real upd = state_distance(work, next, cur);
        rep.update_history.push_back(upd);
        cur = std::move(next);
        rep.iterations = it + 1;
        if (upd <= tol) {
          ok = true;
          break;
        }
      }
      if (!ok)
        throw solver_failure("solve_nonlinear: fixed-point iteration did not reach tolerance");
      // One more application so the stored state and its own flow map are a
      // self-consistent pair (tightens the discrete mass invariant).
      rep.state = phi_map(work, cur);
      rep.flow = material_map(*work.grid, rep.state.w, work.sigma_threshold);
      if (!rep.flow.sigma_ok)
        throw sigma_violation("solve_nonlinear: converged state violates sigma");
      rep.euler = map_back(work, rep.state, rep.flow);
      rep.mass_compatible = compatible_mass(work, rep.state, rep.flow);
      rep.converged = true;
      return rep;
    } catch (const solver_failure&) {
      if (halving == max_halvings) throw;
      work.tg.T *= 0.5;  // retry on a shorter horizon
    }
  }
  throw solver_failure("solve_nonlinear: exhausted horizon halvings");
}

ResidualReport residual_check(const Grid& g, const ViscosityModel& mod, const PressureLaw& pres,
                              const Series& rho, const Series& u) {
  const int nt = rho.tg.nt;
  if (u.tg.nt != nt) throw invalid_parameter("residual_check: series on different time grids");
  if (nt < 2) throw invalid_parameter("residual_check: need at least two frames");
  const real dt = rho.tg.dt();
  const int d = g.dim();

  // Spatial terms per frame; each interval averages two of them.
  std::vector<Field> mass_sp, mom_sp;
  mass_sp.reserve(nt);
  mom_sp.reserve(nt);
  for (int i = 0; i < nt; ++i) {
    auto r = rho.frames[i].comp(0);

    // div(rho u)
    Field m = Field::vector(g);
    for (int a = 0; a < d; ++a) {
      auto mm = m.comp(a);
      auto ua = u.frames[i].comp(a);
      for (index_t p = 0; p < g.size(); ++p) mm[p] = r[p] * ua[p];
    }
    mass_sp.push_back(divergence(g, m));

    // rho (u.grad)u + grad pi(rho) - div S(Du)
    Field divS = stress_divergence(g, mod, u.frames[i]);
    Field pif = Field::scalar(g);
    {
      auto o = pif.comp(0);
      for (index_t p = 0; p < g.size(); ++p) o[p] = pres.pi(r[p]);
    }
    Field grad_pi = gradient(g, pif);
    Field gradu = jacobian(g, u.frames[i]);
    Field sp = Field::vector(g);
    for (int j = 0; j < d; ++j) {
      auto o = sp.comp(j);
      auto gp = grad_pi.comp(j);
      auto ds = divS.comp(j);
      for (index_t p = 0; p < g.size(); ++p) o[p] = gp[p] - ds[p];
      for (int a = 0; a < d; ++a) {
        auto ua = u.frames[i].comp(a);
        auto gj = gradu.comp(j * d + a);
        for (index_t p = 0; p < g.size(); ++p) o[p] += r[p] * ua[p] * gj[p];
      }
    }
    mom_sp.push_back(std::move(sp));
  }

  ResidualReport rep;
  for (int i = 0; i + 1 < nt; ++i) {
    // mass at the interval midpoint:
    //   (rho^{i+1} - rho^i)/dt + (div(rho u)^i + div(rho u)^{i+1}) / 2
    Field res_mass(mass_sp[i + 1]);
    res_mass += mass_sp[i];
    res_mass *= 0.5;
    {
      auto o = res_mass.comp(0);
      auto r0 = rho.frames[i].comp(0);
      auto r1 = rho.frames[i + 1].comp(0);
      for (index_t p = 0; p < g.size(); ++p) o[p] += (r1[p] - r0[p]) / dt;
    }
    rep.mass_residual.push_back(lq_norm(g, res_mass, 2.0));

    // momentum at the interval midpoint:
    //   (rho^i + rho^{i+1})/2 (u^{i+1} - u^i)/dt + (spatial^i + spatial^{i+1}) / 2
    Field res_mom(mom_sp[i + 1]);
    res_mom += mom_sp[i];
    res_mom *= 0.5;
    {
      auto r0 = rho.frames[i].comp(0);
      auto r1 = rho.frames[i + 1].comp(0);
      for (int j = 0; j < d; ++j) {
        auto o = res_mom.comp(j);
        auto u0 = u.frames[i].comp(j);
        auto u1 = u.frames[i + 1].comp(j);
        for (index_t p = 0; p < g.size(); ++p)
          o[p] += 0.5 * (r0[p] + r1[p]) * (u1[p] - u0[p]) / dt;
      }
    }
    rep.momentum_residual.push_back(lq_norm(g, res_mom, 2.0));

    rep.max_mass = std::max(rep.max_mass, rep.mass_residual.back());
    rep.max_momentum = std::max(rep.max_momentum, rep.momentum_residual.back());
  }
  rep.combined = std::max(rep.max_mass, rep.max_momentum);
  return rep;
}

}  // namespace tns
