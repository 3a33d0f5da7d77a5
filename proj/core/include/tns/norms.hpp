/// @file norms.hpp
/// @brief Lebesgue/Sobolev norms on the torus and mixed space-time norms.
///
/// Space integrals use the rectangle rule (exact for trigonometric
/// polynomials below the Nyquist frequency); space derivatives are spectral.
/// Time integrals use the composite trapezoid rule on a uniform time grid;
/// time derivatives are centered differences (one-sided at the endpoints).
#pragma once

#include <limits>
#include <vector>

#include "tns/field.hpp"
#include "tns/grid.hpp"

namespace tns {

inline constexpr real q_infinity = std::numeric_limits<real>::infinity();

/// Uniform grid of nt sample times on [0, T], dt = T/(nt-1).
struct TimeGrid {
  real T = 0.0;
  int nt = 2;
  real dt() const { return T / (nt - 1); }
  real time(int i) const { return T * static_cast<real>(i) / (nt - 1); }
};

/// A time series of equally shaped fields on a common time grid.
struct Series {
  TimeGrid tg;
  std::vector<Field> frames;
};

/// L^q norm over the torus (all components contribute; q = q_infinity gives
/// the max-norm).  For q < infinity:
///   |f|_q = ( sum_y sum_c |f_c(y)|^q h^d )^{1/q}.
real lq_norm(const Grid& g, const Field& f, real q);

/// W^{k,q} norm with spectral derivatives, k <= 2:
///   |f|_{W^{k,q}}^q = sum_{|alpha| <= k} sum_c |d^alpha f_c|_q^q
/// (max over alpha and c when q = infinity).
real sobolev_norm(const Grid& g, const Field& f, int k, real q);

/// Centered time differences (one-sided at t=0 and t=T).
Series time_derivative(const Grid& g, const Series& s);

/// L^p(0,T) norm of a sampled scalar function via composite trapezoid of v^p.
real lp_time_norm(const std::vector<real>& values, const TimeGrid& tg, real p);

/// L^p(0,T; W^{k,q}) norm of a field series.
real mixed_norm(const Grid& g, const Series& s, real p, int k, real q);

/// W^{1,p}(0,T; W^{k,q}) norm: (|f|^p + |df/dt|^p)^{1/p} in the mixed norm.
real w1p_mixed_norm(const Grid& g, const Series& s, real p, int k, real q);

/// Parabolic solution-space norm |u|_{L^p(0,T;W^{2,q})} + |u|_{W^{1,p}(0,T;L^q)}.
real parabolic_norm(const Grid& g, const Series& s, real p, real q);

/// Diagnostic ratio  sup_t |u(t)|_{W^{1,inf}} / parabolic_norm(u); returns 0
/// for the zero series.  Reported only, never asserted: the embedding
/// constant depends on (p, q, T, d).
real embedding_ratio(const Grid& g, const Series& s, real p, real q);

}  // namespace tns
