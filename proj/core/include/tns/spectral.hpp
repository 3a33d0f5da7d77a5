/// @file spectral.hpp
/// @brief Transforms, spectral derivatives and off-grid Fourier evaluation.
#pragma once

#include "tns/field.hpp"
#include "tns/grid.hpp"

namespace tns {

SpectralField to_spectral(const Grid& g, const Field& f);
Field to_physical(const Grid& g, const SpectralField& sf);

/// d^order/dy_axis^order via multiplication by (i*pi*k_axis)^order.
Field derivative(const Grid& g, const Field& f, int axis, int order = 1);
SpectralField derivative(const Grid& g, const SpectralField& sf, int axis, int order = 1);

/// Mixed partial for a multi-index alpha (alpha[a] = order along axis a).
Field partial(const Grid& g, const Field& f, const std::vector<int>& alpha);

/// grad of a scalar: vector field with components d_a f.
Field gradient(const Grid& g, const Field& f);
/// Jacobian of a vector field: (grad u)_{ij} = d_j u_i, component index i*d+j.
Field jacobian(const Grid& g, const Field& u);
/// Divergence of a vector field: sum_a d_a u_a.
Field divergence(const Grid& g, const Field& u);
/// Row-wise divergence of a matrix field: (div T)_j = sum_k d_k T_{jk}.
Field divergence_matrix(const Grid& g, const Field& T);

/// Zero all modes with |freq| > n/3 on any axis (2/3-rule dealiasing).
void dealias(const Grid& g, SpectralField& sf);
Field dealias(const Grid& g, const Field& f);

/// Evaluate the Fourier series of sf at arbitrary points (one point per grid
/// node, coordinates given as a vector field `pts`).  Periodic in each
/// coordinate, so points need not be folded into [-1,1).  Exact for
/// band-limited data up to roundoff; cost O(size * n) per axis sweep.
Field fourier_eval(const Grid& g, const SpectralField& sf, const Field& pts);

/// Largest |spec(-k) - conj(spec(k))| over all modes/components; zero for
/// transforms of real fields up to roundoff.
real conjugate_symmetry_defect(const Grid& g, const SpectralField& sf);

/// l2 defect of Parseval's identity |f|_{L^2}^2 = 2^d sum_k |spec_k|^2 for
/// one field (returns relative mismatch).
real parseval_defect(const Grid& g, const Field& f);

}  // namespace tns
