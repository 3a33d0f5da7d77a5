#include "tns/norms.hpp"

#include <cmath>
#include <functional>

#include "tns/common.hpp"
#include "tns/spectral.hpp"

namespace tns {

real lq_norm(const Grid& g, const Field& f, real q) {
  if (f.npts != g.size()) throw invalid_parameter("lq_norm: field/grid size mismatch");
  if (q == q_infinity) return max_abs(f);
  if (!(q >= 1.0)) throw invalid_parameter("lq_norm: q must be >= 1 or infinity");
  const real h = g.spacing();
  real cell = 1.0;
  for (int a = 0; a < g.dim(); ++a) cell *= h;
  real acc = 0.0;
  for (int c = 0; c < f.ncomp; ++c)
    for (real v : f.comp(c)) acc += std::pow(std::abs(v), q);
  return std::pow(acc * cell, 1.0 / q);
}

namespace {

/// All multi-indices alpha with |alpha| <= k in d axes, each exactly once.
void for_each_multi_index(int dim, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> alpha(dim, 0);
  // Enumerate by counting in base (k+1) and filtering on |alpha| <= k.
  const int base = k + 1;
  index_t total = 1;
  for (int a = 0; a < dim; ++a) total *= base;
  for (index_t code = 0; code < total; ++code) {
    index_t rem = code;
    int sum = 0;
    for (int a = dim - 1; a >= 0; --a) {
      alpha[a] = static_cast<int>(rem % base);
      sum += alpha[a];
      rem /= base;
    }
    if (sum <= k) fn(alpha);
  }
}

}  // namespace

real sobolev_norm(const Grid& g, const Field& f, int k, real q) {
  if (k < 0 || k > 2) throw invalid_parameter("sobolev_norm: k must be in {0,1,2}");
  if (k == 0) return lq_norm(g, f, q);
  SpectralField sf = to_spectral(g, f);
  real acc = 0.0;
  bool is_inf = (q == q_infinity);
  for_each_multi_index(g.dim(), k, [&](const std::vector<int>& alpha) {
    int order = 0;
    for (int v : alpha) order += v;
    Field df(f);
    if (order > 0) {
      SpectralField ds = sf;
      for (int a = 0; a < g.dim(); ++a)
        for (int r = 0; r < alpha[a]; ++r) ds = derivative(g, ds, a, 1);
      df = to_physical(g, ds);
    }
    const real nrm = lq_norm(g, df, q);
    if (is_inf)
      acc = std::max(acc, nrm);
    else
      acc += std::pow(nrm, q);
  });
  return is_inf ? acc : std::pow(acc, 1.0 / q);
}

Series time_derivative(const Grid& g, const Series& s) {
  (void)g;
  const int nt = s.tg.nt;
  if (static_cast<int>(s.frames.size()) != nt)
    throw invalid_parameter("time_derivative: frame count mismatch");
  if (nt < 2) throw invalid_parameter("time_derivative: need at least two frames");
  const real dt = s.tg.dt();
  Series out;
  out.tg = s.tg;
  out.frames.reserve(nt);
  for (int i = 0; i < nt; ++i) {
    Field df(s.frames[i]);
    const index_t m = df.data.size();
    if (i == 0) {
      for (index_t p = 0; p < m; ++p)
        df.data[p] = (s.frames[1].data[p] - s.frames[0].data[p]) / dt;
    } else if (i == nt - 1) {
      for (index_t p = 0; p < m; ++p)
        df.data[p] = (s.frames[nt - 1].data[p] - s.frames[nt - 2].data[p]) / dt;
    } else {
      for (index_t p = 0; p < m; ++p)
        df.data[p] = (s.frames[i + 1].data[p] - s.frames[i - 1].data[p]) / (2.0 * dt);
    }
    out.frames.push_back(std::move(df));
  }
  return out;
}

real lp_time_norm(const std::vector<real>& values, const TimeGrid& tg, real p) {
  if (static_cast<int>(values.size()) != tg.nt)
    throw invalid_parameter("lp_time_norm: sample count mismatch");
  if (p == q_infinity) {
    real m = 0.0;
    for (real v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw invalid_parameter("lp_time_norm: p must be >= 1 or infinity");
  const real dt = tg.dt();
  real acc = 0.0;
  for (int i = 0; i < tg.nt; ++i) {
    const real w = (i == 0 || i == tg.nt - 1) ? 0.5 : 1.0;
    acc += w * std::pow(std::abs(values[i]), p) * dt;
  }
  return std::pow(acc, 1.0 / p);
}

real mixed_norm(const Grid& g, const Series& s, real p, int k, real q) {
  std::vector<real> vals(s.frames.size());
  for (std::size_t i = 0; i < s.frames.size(); ++i)
    vals[i] = sobolev_norm(g, s.frames[i], k, q);
  return lp_time_norm(vals, s.tg, p);
}

real w1p_mixed_norm(const Grid& g, const Series& s, real p, int k, real q) {
  const real a = mixed_norm(g, s, p, k, q);
  const real b = mixed_norm(g, time_derivative(g, s), p, k, q);
  if (p == q_infinity) return std::max(a, b);
  return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

real parabolic_norm(const Grid& g, const Series& s, real p, real q) {
  return mixed_norm(g, s, p, 2, q) + mixed_norm(g, time_derivative(g, s), p, 0, q);
}

real embedding_ratio(const Grid& g, const Series& s, real p, real q) {
  const real den = parabolic_norm(g, s, p, q);
  if (den == 0.0) return 0.0;
  real num = 0.0;
  for (const Field& f : s.frames)
    num = std::max(num, sobolev_norm(g, f, 1, q_infinity));
  return num / den;
}

}  // namespace tns
