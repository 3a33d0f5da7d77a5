/// @file test_helpers.hpp
/// @brief Shared test utilities: analytic trigonometric fields assembled
///        pointwise (deliberately without the library's FFT machinery, so
///        they can serve as independent references) and small comparison
///        helpers.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tns/field.hpp"
#include "tns/grid.hpp"

namespace tns::test {

/// f[c] += amp * cos(pi k . y + phase), evaluated directly per grid point.
inline void add_cosine(const Grid& g, Field& f, int c, real amp, const std::vector<int>& k,
                       real phase) {
  const int d = g.dim();
  std::vector<int> idx(d);
  for (index_t pnt = 0; pnt < g.size(); ++pnt) {
    g.unflat(pnt, idx.data());
    real arg = phase;
    for (int a = 0; a < d; ++a) arg += pi * k[a] * g.coord(idx[a]);
    f.at(c, pnt) += amp * std::cos(arg);
  }
}

/// Band-limited random field: per component, a seeded sum of cosine modes
/// with |k_a| <= kmax, each with amplitude ~ amp.
inline Field random_trig(const Grid& g, int ncomp, int kmax, std::uint64_t seed, real amp) {
  Field f;
  f.ncomp = ncomp;
  f.npts = g.size();
  f.data.assign(static_cast<std::size_t>(ncomp) * g.size(), 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> kdist(-kmax, kmax);
  std::uniform_real_distribution<real> adist(-amp, amp);
  std::uniform_real_distribution<real> pdist(0.0, 2.0 * pi);
  const int d = g.dim();
  for (int c = 0; c < ncomp; ++c) {
    for (int m = 0; m < 4; ++m) {
      std::vector<int> k(d);
      for (int a = 0; a < d; ++a) k[a] = kdist(rng);
      add_cosine(g, f, c, adist(rng), k, pdist(rng));
    }
  }
  return f;
}

inline real max_abs_diff(const Field& a, const Field& b) {
  real m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

inline real max_abs_vec(const std::vector<real>& v) {
  real m = 0.0;
  for (real x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace tns::test
