/// @file grid.hpp
/// @brief Uniform periodic grid on the torus [-1,1]^d with cached FFT plans.
///
/// The computational domain is the d-torus [-1,1]^d (d = 2 or 3) sampled on a
/// uniform grid with n points per axis.  Periodic functions are expanded in
/// the basis exp(i*pi*k.y) with integer frequencies k_i in [-n/2, n/2); the
/// physical wavenumber of mode k is pi*k.
#pragma once

#include <memory>
#include <vector>

#include "tns/common.hpp"

namespace tns {

class Grid {
 public:
  /// @param dim  spatial dimension, 2 or 3
  /// @param n    grid points per axis; even and >= 4
  Grid(int dim, int n);
  ~Grid();

  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;
  Grid(Grid&&) noexcept;
  Grid& operator=(Grid&&) noexcept;

  int dim() const { return dim_; }
  int n() const { return n_; }
  /// Total number of grid points, n^dim.
  index_t size() const { return size_; }
  /// Grid spacing h = 2/n.
  real spacing() const { return 2.0 / n_; }
  /// Coordinate of grid index i along one axis: y = -1 + i*h.
  real coord(int i) const { return -1.0 + spacing() * i; }

  /// Integer frequency of FFT index i along one axis (standard order:
  /// 0,1,...,n/2-1,-n/2,...,-1).
  int freq(int i) const { return i < n_ / 2 ? i : i - n_; }
  /// Physical wavenumber pi*freq(i).
  real wavenumber(int i) const { return pi * freq(i); }

  /// Flat index from per-axis indices (axis 0 slowest).
  index_t flat(const int* ij) const {
    index_t p = ij[0];
    for (int a = 1; a < dim_; ++a) p = p * n_ + ij[a];
    return p;
  }
  /// Per-axis indices from flat index.
  void unflat(index_t p, int* ij) const {
    for (int a = dim_ - 1; a >= 0; --a) {
      ij[a] = static_cast<int>(p % n_);
      p /= n_;
    }
  }

  /// True if the mode at flat index p survives the 2/3-rule dealiasing mask
  /// (|freq_a| <= n/3 on every axis).
  bool dealias_keep(index_t p) const;

  /// Forward transform of one real component: spec_k = (1/N) sum_y f(y) e^{-i pi k.y}.
  /// A constant field c transforms to spec_0 = c, all other modes zero.
  void forward(const real* phys, complex* spec) const;
  /// Inverse transform, taking the real part: f(y) = Re sum_k spec_k e^{+i pi k.y}.
  void backward(const complex* spec, real* phys) const;
  /// Inverse transform keeping the full complex result.
  void backward_complex(const complex* spec, complex* out) const;

 private:
  int dim_ = 0;
  int n_ = 0;
  index_t size_ = 0;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

}  // namespace tns
