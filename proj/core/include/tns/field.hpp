/// @file field.hpp
/// @brief Multi-component grid functions in physical and spectral form.
///
/// A Field stores ncomp real components sampled on the grid, component-major
/// (component c occupies the contiguous range [c*size, (c+1)*size)).  Scalars
/// have ncomp = 1, velocity fields ncomp = d, matrix fields ncomp = d*d with
/// row-major component index i*d + j for entry (i,j).
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "tns/common.hpp"
#include "tns/grid.hpp"

namespace tns {

struct Field {
  int ncomp = 0;
  index_t npts = 0;
  std::vector<real> data;

  Field() = default;
  Field(int ncomp_, index_t npts_) : ncomp(ncomp_), npts(npts_) {
    data.assign(static_cast<size_t>(ncomp) * npts, 0.0);
  }

  static Field scalar(const Grid& g) { return Field(1, g.size()); }
  static Field vector(const Grid& g) { return Field(g.dim(), g.size()); }
  static Field matrix(const Grid& g) { return Field(g.dim() * g.dim(), g.size()); }

  std::span<real> comp(int c) { return {data.data() + static_cast<size_t>(c) * npts, static_cast<size_t>(npts)}; }
  std::span<const real> comp(int c) const {
    return {data.data() + static_cast<size_t>(c) * npts, static_cast<size_t>(npts)};
  }
  real& at(int c, index_t p) { return data[static_cast<size_t>(c) * npts + p]; }
  real at(int c, index_t p) const { return data[static_cast<size_t>(c) * npts + p]; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(real s);
};

struct SpectralField {
  int ncomp = 0;
  index_t npts = 0;
  std::vector<complex> data;

  SpectralField() = default;
  SpectralField(int ncomp_, index_t npts_) : ncomp(ncomp_), npts(npts_) {
    data.assign(static_cast<size_t>(ncomp) * npts, complex(0.0, 0.0));
  }

  std::span<complex> comp(int c) {
    return {data.data() + static_cast<size_t>(c) * npts, static_cast<size_t>(npts)};
  }
  std::span<const complex> comp(int c) const {
    return {data.data() + static_cast<size_t>(c) * npts, static_cast<size_t>(npts)};
  }
  complex& at(int c, index_t p) { return data[static_cast<size_t>(c) * npts + p]; }
  complex at(int c, index_t p) const { return data[static_cast<size_t>(c) * npts + p]; }
};

/// out = a + s*b (component-wise on matching shapes).
Field axpy(const Field& a, real s, const Field& b);
/// Linear combination written in place: a += s*b.
void add_scaled(Field& a, real s, const Field& b);
/// Maximum absolute entry across all components.
real max_abs(const Field& f);
/// Mean of one component over the grid (plain average of samples).
real mean(const Field& f, int c = 0);

}  // namespace tns
