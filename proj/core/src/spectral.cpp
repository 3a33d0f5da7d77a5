#include "tns/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace tns {

SpectralField to_spectral(const Grid& g, const Field& f) {
  SpectralField sf(f.ncomp, f.npts);
  for (int c = 0; c < f.ncomp; ++c) g.forward(f.comp(c).data(), sf.comp(c).data());
  return sf;
}

Field to_physical(const Grid& g, const SpectralField& sf) {
  Field f(sf.ncomp, sf.npts);
  for (int c = 0; c < sf.ncomp; ++c) g.backward(sf.comp(c).data(), f.comp(c).data());
  return f;
}

SpectralField derivative(const Grid& g, const SpectralField& sf, int axis, int order) {
  SpectralField out = sf;
  const int d = g.dim();
  if (axis < 0 || axis >= d) throw invalid_parameter("derivative: bad axis");
  int ij[3] = {0, 0, 0};
  const complex rot = unit_power_i(order);
  for (index_t p = 0; p < g.size(); ++p) {
    g.unflat(p, ij);
    const real k = g.wavenumber(ij[axis]);
    const complex factor = rot * std::pow(k, order);
    for (int c = 0; c < sf.ncomp; ++c) out.at(c, p) *= factor;
  }
  return out;
}

Field derivative(const Grid& g, const Field& f, int axis, int order) {
  return to_physical(g, derivative(g, to_spectral(g, f), axis, order));
}

Field partial(const Grid& g, const Field& f, const std::vector<int>& alpha) {
  if (static_cast<int>(alpha.size()) != g.dim()) throw invalid_parameter("partial: alpha size != dim");
  SpectralField sf = to_spectral(g, f);
  for (int a = 0; a < g.dim(); ++a) {
    if (alpha[a] > 0) sf = derivative(g, sf, a, alpha[a]);
  }
  return to_physical(g, sf);
}

Field gradient(const Grid& g, const Field& f) {
  if (f.ncomp != 1) throw invalid_parameter("gradient: expects a scalar field");
  const int d = g.dim();
  SpectralField sf = to_spectral(g, f);
  Field out(d, f.npts);
  for (int a = 0; a < d; ++a) {
    SpectralField da = derivative(g, sf, a, 1);
    g.backward(da.comp(0).data(), out.comp(a).data());
  }
  return out;
}

Field jacobian(const Grid& g, const Field& u) {
  const int d = g.dim();
  if (u.ncomp != d) throw invalid_parameter("jacobian: expects a vector field");
  SpectralField su = to_spectral(g, u);
  Field out(d * d, u.npts);
  for (int i = 0; i < d; ++i) {
    SpectralField ci(1, u.npts);
    std::copy(su.comp(i).begin(), su.comp(i).end(), ci.comp(0).begin());
    for (int j = 0; j < d; ++j) {
      SpectralField dj = derivative(g, ci, j, 1);
      g.backward(dj.comp(0).data(), out.comp(i * d + j).data());
    }
  }
  return out;
}

Field divergence(const Grid& g, const Field& u) {
  const int d = g.dim();
  if (u.ncomp != d) throw invalid_parameter("divergence: expects a vector field");
  SpectralField acc(1, u.npts);
  for (int a = 0; a < d; ++a) {
    SpectralField ca(1, u.npts);
    g.forward(u.comp(a).data(), ca.comp(0).data());
    SpectralField da = derivative(g, ca, a, 1);
    for (index_t p = 0; p < u.npts; ++p) acc.at(0, p) += da.at(0, p);
  }
  Field out(1, u.npts);
  g.backward(acc.comp(0).data(), out.comp(0).data());
  return out;
}

Field divergence_matrix(const Grid& g, const Field& T) {
  const int d = g.dim();
  if (T.ncomp != d * d) throw invalid_parameter("divergence_matrix: expects a matrix field");
  Field out(d, T.npts);
  for (int j = 0; j < d; ++j) {
    SpectralField acc(1, T.npts);
    for (int k = 0; k < d; ++k) {
      SpectralField c(1, T.npts);
      g.forward(T.comp(j * d + k).data(), c.comp(0).data());
      SpectralField dk = derivative(g, c, k, 1);
      for (index_t p = 0; p < T.npts; ++p) acc.at(0, p) += dk.at(0, p);
    }
    g.backward(acc.comp(0).data(), out.comp(j).data());
  }
  return out;
}

void dealias(const Grid& g, SpectralField& sf) {
  for (index_t p = 0; p < g.size(); ++p) {
    if (!g.dealias_keep(p)) {
      for (int c = 0; c < sf.ncomp; ++c) sf.at(c, p) = complex(0.0, 0.0);
    }
  }
}

Field dealias(const Grid& g, const Field& f) {
  SpectralField sf = to_spectral(g, f);
  dealias(g, sf);
  return to_physical(g, sf);
}

namespace {

// Per-axis table of e^{i pi k x} for all FFT indices.
void mode_table(const Grid& g, real x, complex* t) {
  for (int i = 0; i < g.n(); ++i) t[i] = std::polar(1.0, g.wavenumber(i) * x);
}

}  // namespace

Field fourier_eval(const Grid& g, const SpectralField& sf, const Field& pts) {
  const int d = g.dim();
  const int n = g.n();
  if (pts.ncomp != d || pts.npts != g.size()) throw invalid_parameter("fourier_eval: bad points field");
  Field out(sf.ncomp, pts.npts);
  std::vector<complex> t0(static_cast<size_t>(n)), t1(static_cast<size_t>(n)), t2(static_cast<size_t>(n));
  std::vector<complex> s1(static_cast<size_t>(n)), s2(static_cast<size_t>(n) * n);

  for (index_t p = 0; p < pts.npts; ++p) {
    mode_table(g, pts.at(0, p), t0.data());
    mode_table(g, pts.at(1, p), t1.data());
    if (d == 3) mode_table(g, pts.at(2, p), t2.data());

    for (int c = 0; c < sf.ncomp; ++c) {
      const complex* a = sf.comp(c).data();
      complex val(0.0, 0.0);
      if (d == 2) {
        // val = sum_{i0} t0[i0] * ( sum_{i1} a[i0*n+i1] t1[i1] )
        for (int i0 = 0; i0 < n; ++i0) {
          complex row(0.0, 0.0);
          const complex* ar = a + static_cast<index_t>(i0) * n;
          for (int i1 = 0; i1 < n; ++i1) row += ar[i1] * t1[static_cast<size_t>(i1)];
          val += t0[static_cast<size_t>(i0)] * row;
        }
      } else {
        for (int i0 = 0; i0 < n; ++i0) {
          complex plane(0.0, 0.0);
          for (int i1 = 0; i1 < n; ++i1) {
            complex row(0.0, 0.0);
            const complex* ar = a + (static_cast<index_t>(i0) * n + i1) * n;
            for (int i2 = 0; i2 < n; ++i2) row += ar[i2] * t2[static_cast<size_t>(i2)];
            plane += t1[static_cast<size_t>(i1)] * row;
          }
          val += t0[static_cast<size_t>(i0)] * plane;
        }
      }
      out.at(c, p) = val.real();
    }
  }
  return out;
}

real conjugate_symmetry_defect(const Grid& g, const SpectralField& sf) {
  const int n = g.n();
  int ij[3] = {0, 0, 0};
  int ji[3] = {0, 0, 0};
  real worst = 0.0;
  for (index_t p = 0; p < g.size(); ++p) {
    g.unflat(p, ij);
    for (int a = 0; a < g.dim(); ++a) ji[a] = (n - ij[a]) % n;
    const index_t q = g.flat(ji);
    for (int c = 0; c < sf.ncomp; ++c) {
      worst = std::max(worst, std::abs(sf.at(c, q) - std::conj(sf.at(c, p))));
    }
  }
  return worst;
}

real parseval_defect(const Grid& g, const Field& f) {
  SpectralField sf = to_spectral(g, f);
  const real hd = std::pow(g.spacing(), g.dim());
  const real vol = std::pow(2.0, g.dim());
  real phys = 0.0;
  for (real v : f.data) phys += v * v;
  phys *= hd;
  real spec = 0.0;
  for (const complex& z : sf.data) spec += std::norm(z);
  spec *= vol;
  const real scale = std::max({phys, spec, 1e-300});
  return std::abs(phys - spec) / scale;
}

}  // namespace tns
