#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "ics/grid.hpp"

namespace ics {

// Discrete Fourier transforms of the rank-threshold indicator sequences of a
// window: coef(j, s) = sum_t 1{F-hat(X_t) <= taus[j]} exp(-i 2 pi s t / m),
// for all Fourier indices s = 0..m-1.
struct CopulaDft {
  std::size_t window_length = 0;
  std::vector<double> taus;
  std::vector<std::complex<double>> coef;  // row-major: |taus| x m

  const std::complex<double>& at(std::size_t tau_idx, std::size_t s) const {
    return coef[tau_idx * window_length + s];
  }
};

CopulaDft copula_dft(std::span<const double> window, std::span<const double> taus);

// Copula rank periodogram at Fourier index s:
//   I(tau1, tau2; omega_s) = d(tau1, omega_s) d(tau2, -omega_s) / (2 pi m).
std::complex<double> copula_periodogram(const CopulaDft& dft, std::size_t tau1_idx,
                                        std::size_t tau2_idx, std::size_t s);

// Where a surface came from: the full sample or one subsampling block.
enum class SurfaceProvenance { full_sample, block };

// Integrated copula spectrum on a grid.  values are indexed by
// (lambda_idx, tau1_idx, tau2_idx), row-major with tau2 fastest.
class IcsSurface {
 public:
  IcsSurface(EvaluationGrid grid, std::size_t window_length,
             SurfaceProvenance provenance = SurfaceProvenance::full_sample,
             std::size_t block_start = 0)
      : grid_(std::move(grid)),
        window_length_(window_length),
        provenance_(provenance),
        block_start_(block_start),
        values_(grid_.size()) {}

  const EvaluationGrid& grid() const { return grid_; }
  std::size_t window_length() const { return window_length_; }
  SurfaceProvenance provenance() const { return provenance_; }
  std::size_t block_start() const { return block_start_; }

  const std::complex<double>& at(std::size_t l, std::size_t t1, std::size_t t2) const {
    return values_[(l * grid_.n_tau() + t1) * grid_.n_tau() + t2];
  }
  std::complex<double>& at(std::size_t l, std::size_t t1, std::size_t t2) {
    return values_[(l * grid_.n_tau() + t1) * grid_.n_tau() + t2];
  }
  const std::vector<std::complex<double>>& values() const { return values_; }

 private:
  EvaluationGrid grid_;
  std::size_t window_length_;
  SurfaceProvenance provenance_;
  std::size_t block_start_;
  std::vector<std::complex<double>> values_;
};

// Grid point attaining the maximum of |Im| over the surface, reported with
// tau1_idx <= tau2_idx (the lower triangle is the exact conjugate mirror).
struct SurfaceMax {
  double max_abs_imag = 0.0;
  std::size_t lambda_idx = 0;
  std::size_t tau1_idx = 0;
  std::size_t tau2_idx = 0;
};

// Evaluation engine for many windows of one fixed length on one grid.  Owns
// the FFT buffers; FFT plans are shared through a process-wide cache, so
// engines are cheap to create.  An engine is single-threaded; concurrent
// windows get one engine each (results are identical regardless).
//
// Windows are canonically oriented before evaluation: the integer rank
// sequence is compared lexicographically with its reversal and the smaller
// orientation is evaluated, conjugating the result when the orientation was
// flipped (time reversal conjugates the spectrum exactly, with the boundary
// phase factors cancelling in the periodogram products).  This makes
// statistics of a window and of its reversal agree bit-for-bit.
class SpectrumEngine {
 public:
  SpectrumEngine(std::size_t window_length, const EvaluationGrid& grid);
  ~SpectrumEngine();
  SpectrumEngine(const SpectrumEngine&) = delete;
  SpectrumEngine& operator=(const SpectrumEngine&) = delete;

  std::size_t window_length() const;

  // Maximum of |Im| over the whole grid (diagonal pairs are exactly real).
  SurfaceMax max_abs_imag(std::span<const double> window);

  // Full surface on the engine's grid.
  IcsSurface surface(std::span<const double> window,
                     SurfaceProvenance provenance = SurfaceProvenance::full_sample,
                     std::size_t block_start = 0);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper around SpectrumEngine::surface.
IcsSurface integrated_spectrum(std::span<const double> window, const EvaluationGrid& grid);

}  // namespace ics
