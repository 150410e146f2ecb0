#pragma once

// Periodic discretization of R^n (n = 1, 2) and the Fourier-multiplier
// operators built on it: the free propagator U(t) = exp(itΔ), |D|^s, and the
// Lebesgue / Sobolev / space-time norms.

#include "ggp/exponents.hpp"

#include <Eigen/Core>

#include <complex>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace ggp {

using Complex = std::complex<double>;
using ComplexArray = Eigen::ArrayXcd;
using RealArray = Eigen::ArrayXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Square torus [-L/2, L/2)^n sampled with N points per axis. Samples are
/// stored row-major: index = i0 * N + i1 for n = 2.
class TorusGrid {
 public:
  TorusGrid(int dim, double length, int samples);

  int dim() const { return dim_; }
  double length() const { return length_; }
  int samples() const { return samples_; }
  Eigen::Index size() const { return size_; }
  double spacing() const { return length_ / samples_; }
  double cell_volume() const;
  double volume() const;

  /// x_j = -L/2 + j L/N, so x = 0 is the sample j = N/2.
  const RealArray& axis_coordinates() const { return axis_x_; }
  /// 2πk/L in standard DFT order: k = 0, 1, ..., N/2-1, -N/2, ..., -1.
  const RealArray& axis_wavenumbers() const { return axis_k_; }

  /// |x| at every sample.
  const RealArray& radius() const { return radius_; }
  /// |ξ|² at every mode.
  const RealArray& wavenumber_squared() const { return k2_; }
  /// |ξ| at every mode.
  const RealArray& wavenumber_modulus() const { return kabs_; }
  /// 1 for modes with max_i |k_i| > N/4, 0 otherwise.
  const RealArray& high_mode_mask() const { return high_mask_; }
  /// 1 for samples with max_i |x_i| >= 0.45 L (outer 10% of each axis).
  const RealArray& boundary_shell_mask() const { return shell_mask_; }

  Eigen::Index origin_index() const;

  /// Unnormalized forward DFT.
  ComplexArray forward(const ComplexArray& values) const;
  /// Inverse DFT including the 1/N^n normalization.
  ComplexArray inverse(const ComplexArray& spectrum) const;

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
    return a.dim_ == b.dim_ && a.samples_ == b.samples_ && a.length_ == b.length_;
  }

 private:
  int dim_;
  double length_;
  int samples_;
  Eigen::Index size_;
  RealArray axis_x_;
  RealArray axis_k_;
  RealArray radius_;
  RealArray k2_;
  RealArray kabs_;
  RealArray high_mask_;
  RealArray shell_mask_;
};

using GridPtr = std::shared_ptr<const TorusGrid>;

GridPtr make_grid(int dim, double length, int samples);

/// Complex samples of v on a torus grid.
class Field {
 public:
  explicit Field(GridPtr grid);
  Field(GridPtr grid, ComplexArray values);

  const TorusGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const ComplexArray& values() const { return values_; }
  ComplexArray& values() { return values_; }

  bool finite() const;
  bool diverged() const { return diverged_; }
  void mark_diverged() { diverged_ = true; }

  Complex mean() const { return values_.mean(); }

 private:
  GridPtr grid_;
  ComplexArray values_;
  bool diverged_ = false;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(Complex c, const Field& a);

/// Samples f(x) (n = 1) or f(x, y) (n = 2) on the grid.
template <typename Fn>
Field sample_field(const GridPtr& grid, Fn&& fn) {
  ComplexArray values(grid->size());
  const RealArray& x = grid->axis_coordinates();
  const int N = grid->samples();
  if (grid->dim() == 1) {
    for (int i = 0; i < N; ++i) values(i) = fn(x(i), 0.0);
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) values(Eigen::Index(i) * N + j) = fn(x(i), x(j));
  }
  return Field(grid, std::move(values));
}

/// Plane wave amplitude · exp(i ξ·x) for the grid mode (k0, k1).
Field plane_wave(const GridPtr& grid, int k0, int k1 = 0, Complex amplitude = 1.0);

/// Spectral multiplier exp(-i|ξ|² t) for a fixed t.
ComplexArray propagator_symbol(const TorusGrid& grid, double t);

Field free_propagate(const Field& f, double t);
/// Same as free_propagate for data already in frequency space.
ComplexArray free_propagate_spectrum(const TorusGrid& grid, const ComplexArray& spectrum, double t);

/// |D|^s with the zero mode sent to 0.
Field fractional_derivative(const Field& f, double s);

/// (Σ |v_j|^q Δx)^{1/q}, or max |v_j| for q = ∞.
double lebesgue_norm(const Field& f, double q);
double lebesgue_norm(const TorusGrid& grid, const RealArray& magnitudes, double q);

/// ‖ |D|^s f ‖_{L^q}.
double sobolev_norm(const Field& f, double s, double q);

/// Ḣ^s norm computed directly on the spectrum (equals sobolev_norm(f, s, 2)).
double homogeneous_sobolev_norm(const TorusGrid& grid, const ComplexArray& spectrum, double s);
double homogeneous_sobolev_norm(const Field& f, double s);

/// Frequency-side ℓ² norm scaled so that it equals the L² norm (Plancherel).
double plancherel_norm(const Field& f);

/// ‖ |x|^α f ‖_{L²}. For n = 1 the lattice sum is corrected for the |x|^{2α}
/// singularity at the origin, so the result approximates the integral over R
/// to spectral accuracy for smooth, decaying f.
double weighted_l2_norm(const Field& f, double alpha);
/// The plain lattice sum (Σ |x_j|^{2α} |v_j|² Δx)^{1/2}.
double weighted_l2_lattice_sum(const Field& f, double alpha);

/// Fraction of |v - c|² lying in the outer boundary shell, c the componentwise
/// median of v over that shell.
double boundary_mass_fraction(const Field& f);
/// Fraction of Σ (1 + |ξ|²)|v̂|² (zero mode excluded) carried by the top half
/// of the resolved band.
double spectral_tail_fraction(const TorusGrid& grid, const ComplexArray& spectrum);
double spectral_tail_fraction(const Field& f);

/// Spatial exponent q = 1/x of a pair point (∞ when x = 0).
double spatial_exponent(const PairPoint& point);

/// Samples ‖ |D|^s v(t) ‖_{L^{1/x}} along a time series; pair P = (x, y).
struct TimeSeriesNorm {
  std::vector<double> times;
  std::vector<double> values;
  PairPoint pair;
  double s = 0.0;
};

TimeSeriesNorm spatial_norm_series(std::span<const double> times, std::span<const Field> fields,
                                   const PairPoint& pair, double s);

/// Trapezoidal (∫ g(t)^{1/y} dt)^{y} on a uniform time grid; sup when y = 0.
double bochner_norm(std::span<const double> times, std::span<const double> values, double y);
double bochner_norm(const TimeSeriesNorm& series);

/// ‖v‖_{Ẇ^s(P; I)} for fields sampled on a uniform time grid covering I.
double spacetime_norm(std::span<const double> times, std::span<const Field> fields, const PairPoint& pair,
                      double s);

}  // namespace ggp
