#include "tns/grid.hpp"

#include <fftw3.h>

#include <cstring>
#include <vector>

namespace tns {

// FFTW state for one grid shape.  Transforms run through private aligned
// buffers, so callers may pass arbitrary vectors.  forward/backward are not
// thread-safe (shared buffers); the solver is single-threaded throughout.
struct Grid::Plans {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  // Per-mode sign (-1)^(i_0+...+i_{d-1}), converting between the raw DFT
  // basis e^{2 pi i j k / n} on indices and the torus basis e^{i pi k y}
  // with y = -1 + 2j/n.  Exact +-1 factors, no roundoff.
  std::vector<real> sign;

  ~Plans() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

Grid::Grid(int dim, int n) : dim_(dim), n_(n) {
  if (dim_ != 2 && dim_ != 3) throw invalid_parameter("Grid: dim must be 2 or 3");
  if (n_ < 4 || n_ % 2 != 0) throw invalid_parameter("Grid: n must be even and >= 4");
  size_ = 1;
  for (int a = 0; a < dim_; ++a) size_ *= n_;

  plans_ = std::make_unique<Plans>();
  plans_->in = fftw_alloc_complex(static_cast<size_t>(size_));
  plans_->out = fftw_alloc_complex(static_cast<size_t>(size_));
  std::vector<int> dims(static_cast<size_t>(dim_), n_);
  plans_->fwd = fftw_plan_dft(dim_, dims.data(), plans_->in, plans_->out, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->bwd = fftw_plan_dft(dim_, dims.data(), plans_->in, plans_->out, FFTW_BACKWARD, FFTW_ESTIMATE);

  plans_->sign.resize(static_cast<size_t>(size_));
  int ij[3] = {0, 0, 0};
  for (index_t p = 0; p < size_; ++p) {
    unflat(p, ij);
    int parity = 0;
    for (int a = 0; a < dim_; ++a) parity += ij[a];
    plans_->sign[static_cast<size_t>(p)] = (parity % 2 == 0) ? 1.0 : -1.0;
  }
}

Grid::~Grid() = default;
Grid::Grid(Grid&&) noexcept = default;
Grid& Grid::operator=(Grid&&) noexcept = default;

bool Grid::dealias_keep(index_t p) const {
  int ij[3] = {0, 0, 0};
  unflat(p, ij);
  const int kmax = n_ / 3;
  for (int a = 0; a < dim_; ++a) {
    if (std::abs(freq(ij[a])) > kmax) return false;
  }
  return true;
}

void Grid::forward(const real* phys, complex* spec) const {
  for (index_t p = 0; p < size_; ++p) {
    plans_->in[p][0] = phys[p];
    plans_->in[p][1] = 0.0;
  }
  fftw_execute(plans_->fwd);
  const real scale = 1.0 / static_cast<real>(size_);
  for (index_t p = 0; p < size_; ++p) {
    const real s = plans_->sign[static_cast<size_t>(p)] * scale;
    spec[p] = complex(plans_->out[p][0] * s, plans_->out[p][1] * s);
  }
}

void Grid::backward(const complex* spec, real* phys) const {
  for (index_t p = 0; p < size_; ++p) {
    const real s = plans_->sign[static_cast<size_t>(p)];
    plans_->in[p][0] = spec[p].real() * s;
    plans_->in[p][1] = spec[p].imag() * s;
  }
  fftw_execute(plans_->bwd);
  for (index_t p = 0; p < size_; ++p) phys[p] = plans_->out[p][0];
}

void Grid::backward_complex(const complex* spec, complex* out) const {
  for (index_t p = 0; p < size_; ++p) {
    const real s = plans_->sign[static_cast<size_t>(p)];
    plans_->in[p][0] = spec[p].real() * s;
    plans_->in[p][1] = spec[p].imag() * s;
  }
  fftw_execute(plans_->bwd);
  for (index_t p = 0; p < size_; ++p) out[p] = complex(plans_->out[p][0], plans_->out[p][1]);
}

}  // namespace tns
