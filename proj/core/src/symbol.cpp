#include "tns/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace tns {

namespace {

real matrix_norm2(const Eigen::MatrixXcd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(0);
}

real sigma_min(const Eigen::MatrixXcd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(M.rows() - 1);
}

/// Deterministic direction set: half-circle fan for d = 2, Fibonacci sphere
/// for d = 3 (the symbol is even in xi, so half coverage suffices).
std::vector<std::vector<real>> direction_set(int d, int n) {
  std::vector<std::vector<real>> dirs;
  dirs.reserve(n);
  if (d == 2) {
    for (int i = 0; i < n; ++i) {
      const real th = pi * (i + 0.5) / n;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    const real golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const real z = 1.0 - 2.0 * (i + 0.5) / n;
      const real rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const real ph = golden * i;
      dirs.push_back({rho * std::cos(ph), rho * std::sin(ph), z});
    }
  }
  return dirs;
}

std::vector<real> log_spaced(real lo, real hi, int n) {
  std::vector<real> v(n);
  if (n == 1) {
    v[0] = hi;
    return v;
  }
  const real a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) v[i] = std::exp(a + (b - a) * i / (n - 1));
  return v;
}

}  // namespace

complex sample_sector(const Sector& sec, real radius_min, real radius_max,
                      std::mt19937_64& rng) {
  if (!(sec.beta > 0.0 && sec.beta < pi)) throw invalid_parameter("sample_sector: beta out of range");
  std::uniform_real_distribution<real> uang(-(pi - sec.beta), pi - sec.beta);
  std::uniform_real_distribution<real> ulog(std::log(radius_min), std::log(radius_max));
  const real rho = std::exp(ulog(rng));
  const real phi = uang(rng);
  return sec.nu + std::polar(rho, phi);
}

FrozenSymbol frozen_symbol(const ViscosityModel& mod, int d, const real* Dbar, real gamma1,
                           real gamma2) {
  if (!(gamma1 > 0.0)) throw invalid_parameter("frozen_symbol: gamma1 must be positive");
  FrozenSymbol fs;
  fs.dim = d;
  fs.gamma1 = gamma1;
  fs.gamma2 = gamma2;
  fs.abar.resize(static_cast<std::size_t>(d) * d * d * d);
  coefficient_tensor_point(mod, d, Dbar, fs.abar.data());
  return fs;
}

Eigen::MatrixXd symbol_second_order(const FrozenSymbol& fs, const real* xi) {
  const int d = fs.dim;
  Eigen::MatrixXd E(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      real acc = 0.0;
      for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m) acc += fs.abar[tensor_index(d, j, k, l, m)] * xi[l] * xi[m];
      E(j, k) = acc / fs.gamma1;
    }
  return E;
}

Eigen::MatrixXcd symbol_pressure(const FrozenSymbol& fs, const real* xi, complex lambda) {
  const int d = fs.dim;
  const complex c = fs.gamma2 / (lambda * fs.gamma1);
  Eigen::MatrixXcd P(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) P(j, k) = c * xi[j] * xi[k];
  return P;
}

Eigen::MatrixXcd symbol_matrix(const FrozenSymbol& fs, const real* xi, complex lambda) {
  const int d = fs.dim;
  Eigen::MatrixXcd M = symbol_second_order(fs, xi).cast<complex>() + symbol_pressure(fs, xi, lambda);
  for (int j = 0; j < d; ++j) M(j, j) += lambda;
  return M;
}

real symbol_min_eigenvalue(const FrozenSymbol& fs, const real* xi) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symbol_second_order(fs, xi));
  return es.eigenvalues()(0);
}

SectorCheckResult sector_inequality_check(real beta, index_t nsamples, std::uint64_t seed) {
  if (!(beta > 0.0 && beta < pi)) throw invalid_parameter("sector_inequality_check: beta out of range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<real> uang(-(pi - beta), pi - beta);
  std::uniform_real_distribution<real> ulog(std::log(1e-6), std::log(1e6));
  const real bound = std::sin(0.5 * beta);
  SectorCheckResult res;
  res.samples = nsamples;
  res.worst_margin = std::numeric_limits<real>::infinity();
  for (index_t i = 0; i < nsamples; ++i) {
    const complex lam = std::polar(std::exp(ulog(rng)), uang(rng));
    const real t = (i % 17 == 0) ? 0.0 : std::exp(ulog(rng));
    const real denom = std::abs(lam) + t;
    const real margin = (std::abs(lam + t) - bound * denom) / denom;
    res.worst_margin = std::min(res.worst_margin, margin);
    if (margin < -1e-12) ++res.violations;
  }
  return res;
}

namespace {

template <typename Fn>
void for_each_scan_point(const FrozenSymbol& fs, const Sector& sec, int nlambda, int nxi,
                         real lambda_min, real lambda_max, real xi_max, Fn&& fn) {
  const int d = fs.dim;
  const auto mags_l = log_spaced(lambda_min, lambda_max, nlambda);
  const auto mags_x = log_spaced(0.5, xi_max, nxi);
  const auto dirs = direction_set(d, nxi);
  const int nangle = std::max(2, nlambda);
  std::vector<real> xi(d);
  for (int ia = 0; ia < nangle; ++ia) {
    const real phi = -(pi - sec.beta) + 2.0 * (pi - sec.beta) * ia / (nangle - 1);
    for (real rho : mags_l) {
      const complex lam = sec.nu + std::polar(rho, phi);
      for (const auto& dir : dirs)
        for (real mag : mags_x) {
          for (int a = 0; a < d; ++a) xi[a] = mag * dir[a];
          fn(lam, xi.data(), mag);
        }
    }
  }
}

}  // namespace

ResolventScan resolvent_bound_scan(const FrozenSymbol& fs, const Sector& sec, int nlambda,
                                   int nxi, real lambda_min, real lambda_max, real xi_max) {
  ResolventScan out;
  for_each_scan_point(fs, sec, nlambda, nxi, lambda_min, lambda_max, xi_max,
                      [&](complex lam, const real* xi, real mag) {
                        const real ratio =
                            (std::abs(lam) + mag * mag) / sigma_min(symbol_matrix(fs, xi, lam));
                        if (ratio > out.sup_ratio) {
                          out.sup_ratio = ratio;
                          out.lambda_at_sup = lam;
                          out.xi_abs_at_sup = mag;
                        }
                      });
  return out;
}

real perturbation_ratio(const FrozenSymbol& base, const FrozenSymbol& pert, const Sector& sec,
                        int nlambda, int nxi, real lambda_min, real lambda_max, real xi_max) {
  if (base.dim != pert.dim) throw invalid_parameter("perturbation_ratio: dimension mismatch");
  real sup = 0.0;
  for_each_scan_point(base, sec, nlambda, nxi, lambda_min, lambda_max, xi_max,
                      [&](complex lam, const real* xi, real) {
                        const Eigen::MatrixXcd diff =
                            (symbol_second_order(pert, xi) - symbol_second_order(base, xi))
                                .cast<complex>();
                        const Eigen::MatrixXcd Minv = symbol_matrix(base, xi, lam).inverse();
                        sup = std::max(sup, matrix_norm2(diff * Minv));
                      });
  return sup;
}

namespace {

using SymbolFn = std::function<Eigen::MatrixXcd(const real*)>;

/// Nested central difference d^alpha f at xi with per-application step h.
Eigen::MatrixXcd central_derivative(const SymbolFn& f, std::vector<real> xi,
                                    std::vector<int> alpha, real h) {
  int axis = -1;
  for (std::size_t a = 0; a < alpha.size(); ++a)
    if (alpha[a] > 0) {
      axis = static_cast<int>(a);
      break;
    }
  if (axis < 0) return f(xi.data());
  alpha[axis] -= 1;
  std::vector<real> xp = xi, xm = xi;
  xp[axis] += h;
  xm[axis] -= h;
  return (central_derivative(f, xp, alpha, h) - central_derivative(f, xm, alpha, h)) /
         (2.0 * h);
}

/// All alpha with 1 <= |alpha| <= kmax in d axes.
std::vector<std::vector<int>> derivative_multi_indices(int d, int kmax) {
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(d, 0);
  std::function<void(int, int)> rec = [&](int axis, int remaining) {
    if (axis == d) {
      int s = 0;
      for (int v : alpha) s += v;
      if (s >= 1) out.push_back(alpha);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      alpha[axis] = v;
      rec(axis + 1, remaining - v);
    }
    alpha[axis] = 0;
  };
  rec(0, kmax);
  return out;
}

struct MultiplierScanResult {
  real c_max = 0.0;
  real c_zero = 0.0;
};

MultiplierScanResult multiplier_scan(const FrozenSymbol& fs, complex lambda, int nxi,
                                     real xi_max, real fd_scale, std::uint64_t seed) {
  const int d = fs.dim;
  std::vector<SymbolFn> families;
  families.push_back([&fs, lambda](const real* xi) -> Eigen::MatrixXcd {
    return lambda * symbol_matrix(fs, xi, lambda).inverse();
  });
  const real rootlam = std::sqrt(std::abs(lambda));
  for (int j = 0; j < d; ++j)
    families.push_back([&fs, lambda, rootlam, j](const real* xi) -> Eigen::MatrixXcd {
      return rootlam * xi[j] * symbol_matrix(fs, xi, lambda).inverse();
    });
  for (int j = 0; j < d; ++j)
    for (int k = j; k < d; ++k)
      families.push_back([&fs, lambda, j, k](const real* xi) -> Eigen::MatrixXcd {
        return xi[j] * xi[k] * symbol_matrix(fs, xi, lambda).inverse();
      });

  const auto alphas = derivative_multi_indices(d, d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<real> gauss(0.0, 1.0);
  const auto mags = log_spaced(0.5, xi_max, nxi);
  MultiplierScanResult res;
  std::vector<real> xi(d);
  for (int idir = 0; idir < nxi; ++idir) {
    std::vector<real> dir(d);
    real norm = 0.0;
    do {
      norm = 0.0;
      for (int a = 0; a < d; ++a) {
        dir[a] = gauss(rng);
        norm += dir[a] * dir[a];
      }
      norm = std::sqrt(norm);
    } while (norm < 1e-8);
    for (int a = 0; a < d; ++a) dir[a] /= norm;
    for (real mag : mags) {
      for (int a = 0; a < d; ++a) xi[a] = mag * dir[a];
      const real h = fd_scale * std::max(1.0, mag);
      for (const auto& fam : families) {
        res.c_zero = std::max(res.c_zero, matrix_norm2(fam(xi.data())));
        for (const auto& alpha : alphas) {
          const Eigen::MatrixXcd der = central_derivative(fam, xi, alpha, h);
          real scale = 1.0;
          for (int a = 0; a < d; ++a)
            for (int r = 0; r < alpha[a]; ++r) scale *= std::abs(xi[a]);
          res.c_max = std::max(res.c_max, scale * matrix_norm2(der));
        }
      }
    }
  }
  return res;
}

}  // namespace

MultiplierCheck multiplier_derivative_check(const FrozenSymbol& fs, complex lambda, int nxi,
                                            real xi_max, real fd_scale, std::uint64_t seed) {
  const MultiplierScanResult full = multiplier_scan(fs, lambda, nxi, xi_max, fd_scale, seed);
  const MultiplierScanResult half = multiplier_scan(fs, lambda, nxi, xi_max, 0.5 * fd_scale, seed);
  MultiplierCheck out;
  out.c_max = full.c_max;
  out.c_zero = full.c_zero;
  out.fd_instability = std::abs(full.c_max - half.c_max) / std::max(half.c_max, 1e-300);
  return out;
}

void apply_resolvent_multiplier(const Grid& g, const FrozenSymbol& fs, complex lambda,
                                SpectralField& u) {
  const int d = g.dim();
  if (u.ncomp != d) throw invalid_parameter("apply_resolvent_multiplier: expected d components");
  std::vector<int> ij(d);
  std::vector<real> xi(d);
  Eigen::VectorXcd v(d);
  for (index_t p = 0; p < g.size(); ++p) {
    g.unflat(p, ij.data());
    bool zero = true;
    for (int a = 0; a < d; ++a) {
      xi[a] = g.wavenumber(ij[a]);
      if (ij[a] != 0) zero = false;
    }
    if (zero) continue;  // M(lambda, 0) = lambda I, multiplier is the identity
    for (int c = 0; c < d; ++c) v(c) = u.at(c, p);
    v = lambda * symbol_matrix(fs, xi.data(), lambda).inverse() * v;
    for (int c = 0; c < d; ++c) u.at(c, p) = v(c);
  }
}

RBoundEstimate rbound_estimate(const Grid& g, const FrozenSymbol& fs, const Sector& sec,
                               int noperators, int nsignsets, std::uint64_t seed) {
  const int d = g.dim();
  if (fs.dim != d) throw invalid_parameter("rbound_estimate: symbol/grid dimension mismatch");
  std::mt19937_64 rng(seed);
  std::normal_distribution<real> gauss(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  // Band-limited random inputs and their multiplier images.
  std::vector<SpectralField> f(noperators), Tf(noperators);
  for (int j = 0; j < noperators; ++j) {
    SpectralField sf(d, g.size());
    for (int c = 0; c < d; ++c)
      for (index_t p = 0; p < g.size(); ++p)
        if (g.dealias_keep(p)) sf.at(c, p) = complex(gauss(rng), gauss(rng));
    f[j] = sf;
    apply_resolvent_multiplier(g, fs, sample_sector(sec, 1.0, 1e3, rng), sf);
    Tf[j] = std::move(sf);
  }

  real num = 0.0, den = 0.0;
  SpectralField sum_f(d, g.size()), sum_Tf(d, g.size());
  for (int s = 0; s < nsignsets; ++s) {
    std::fill(sum_f.data.begin(), sum_f.data.end(), complex(0.0));
    std::fill(sum_Tf.data.begin(), sum_Tf.data.end(), complex(0.0));
    for (int j = 0; j < noperators; ++j) {
      const real r = coin(rng) ? 1.0 : -1.0;
      for (std::size_t i = 0; i < sum_f.data.size(); ++i) {
        sum_f.data[i] += r * f[j].data[i];
        sum_Tf.data[i] += r * Tf[j].data[i];
      }
    }
    for (const complex& z : sum_f.data) den += std::norm(z);
    for (const complex& z : sum_Tf.data) num += std::norm(z);
  }
  RBoundEstimate est;
  est.noperators = noperators;
  est.nsignsets = nsignsets;
  est.ratio = std::sqrt(num / std::max(den, 1e-300));
  return est;
}

}  // namespace tns
