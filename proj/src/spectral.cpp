#include "ggp/spectral.hpp"

#include <boost/math/special_functions/zeta.hpp>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ggp {

namespace {

// kissfft caches twiddles per length; one engine per thread keeps the
// transforms callable concurrently.
Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine = [] {
    Eigen::FFT<double> e;
    e.SetFlag(Eigen::FFT<double>::Unscaled);
    return e;
  }();
  return engine;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_finite(const Field& f) {
  if (!f.finite()) throw std::invalid_argument("field contains non-finite samples");
}

ComplexArray transform(const TorusGrid& grid, const ComplexArray& in, bool forward) {
  const int N = grid.samples();
  auto& fft = fft_engine();
  ComplexArray out(in.size());
  if (grid.dim() == 1) {
    if (forward) {
      fft.fwd(out.data(), in.data(), N);
    } else {
      fft.inv(out.data(), in.data(), N);
    }
    return out;
  }
  std::vector<Complex> row(N), col_in(N), col_out(N);
  for (int i = 0; i < N; ++i) {
    const Complex* src = in.data() + Eigen::Index(i) * N;
    Complex* dst = out.data() + Eigen::Index(i) * N;
    if (forward) {
      fft.fwd(dst, src, N);
    } else {
      fft.inv(dst, src, N);
    }
  }
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) col_in[i] = out(Eigen::Index(i) * N + j);
    if (forward) {
      fft.fwd(col_out.data(), col_in.data(), N);
    } else {
      fft.inv(col_out.data(), col_in.data(), N);
    }
    for (int i = 0; i < N; ++i) out(Eigen::Index(i) * N + j) = col_out[i];
  }
  return out;
}

}  // namespace

TorusGrid::TorusGrid(int dim, double length, int samples) : dim_(dim), length_(length), samples_(samples) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (!(length > 0) || !std::isfinite(length)) throw std::invalid_argument("grid length must be positive");
  if (samples < 8 || !is_power_of_two(samples))
    throw std::invalid_argument("samples per axis must be a power of two >= 8");

  const int N = samples;
  size_ = dim == 1 ? N : Eigen::Index(N) * N;
  const double h = length / N;
  axis_x_.resize(N);
  axis_k_.resize(N);
  for (int j = 0; j < N; ++j) {
    axis_x_(j) = -0.5 * length + j * h;
    const int k = j < N / 2 ? j : j - N;
    axis_k_(j) = 2.0 * std::numbers::pi * k / length;
  }

  radius_.resize(size_);
  k2_.resize(size_);
  high_mask_.resize(size_);
  shell_mask_.resize(size_);
  const double shell = 0.45 * length;
  auto high = [N](int j) {
    const int k = j < N / 2 ? j : j - N;
    return std::abs(k) > N / 4;
  };
  if (dim == 1) {
    for (int j = 0; j < N; ++j) {
      radius_(j) = std::abs(axis_x_(j));
      k2_(j) = axis_k_(j) * axis_k_(j);
      high_mask_(j) = high(j) ? 1.0 : 0.0;
      shell_mask_(j) = std::abs(axis_x_(j)) >= shell ? 1.0 : 0.0;
    }
  } else {
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        const Eigen::Index idx = Eigen::Index(i) * N + j;
        radius_(idx) = std::hypot(axis_x_(i), axis_x_(j));
        k2_(idx) = axis_k_(i) * axis_k_(i) + axis_k_(j) * axis_k_(j);
        high_mask_(idx) = (high(i) || high(j)) ? 1.0 : 0.0;
        shell_mask_(idx) = std::max(std::abs(axis_x_(i)), std::abs(axis_x_(j))) >= shell ? 1.0 : 0.0;
      }
    }
  }
  kabs_ = k2_.sqrt();
}

double TorusGrid::cell_volume() const { return std::pow(spacing(), dim_); }

double TorusGrid::volume() const { return std::pow(length_, dim_); }

Eigen::Index TorusGrid::origin_index() const {
  const Eigen::Index c = samples_ / 2;
  return dim_ == 1 ? c : c * samples_ + c;
}

ComplexArray TorusGrid::forward(const ComplexArray& values) const {
  if (values.size() != size_) throw std::invalid_argument("sample count does not match grid");
  return transform(*this, values, true);
}

ComplexArray TorusGrid::inverse(const ComplexArray& spectrum) const {
  if (spectrum.size() != size_) throw std::invalid_argument("mode count does not match grid");
  ComplexArray out = transform(*this, spectrum, false);
  out /= static_cast<double>(size_);
  return out;
}

GridPtr make_grid(int dim, double length, int samples) { return std::make_shared<const TorusGrid>(dim, length, samples); }

Field::Field(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("null grid");
  values_ = ComplexArray::Zero(grid_->size());
}

Field::Field(GridPtr grid, ComplexArray values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("null grid");
  if (values_.size() != grid_->size()) throw std::invalid_argument("sample count does not match grid");
}

bool Field::finite() const { return values_.real().allFinite() && values_.imag().allFinite(); }

Field operator+(const Field& a, const Field& b) { return Field(a.grid_ptr(), a.values() + b.values()); }
Field operator-(const Field& a, const Field& b) { return Field(a.grid_ptr(), a.values() - b.values()); }
Field operator*(Complex c, const Field& a) { return Field(a.grid_ptr(), c * a.values()); }

Field plane_wave(const GridPtr& grid, int k0, int k1, Complex amplitude) {
  const double w = 2.0 * std::numbers::pi / grid->length();
  return sample_field(grid, [&](double x, double y) {
    return amplitude * std::exp(Complex(0.0, w * (k0 * x + (grid->dim() == 2 ? k1 * y : 0.0))));
  });
}

ComplexArray propagator_symbol(const TorusGrid& grid, double t) {
  const RealArray phase = -t * grid.wavenumber_squared();
  ComplexArray symbol(grid.size());
  symbol.real() = phase.cos();
  symbol.imag() = phase.sin();
  return symbol;
}

ComplexArray free_propagate_spectrum(const TorusGrid& grid, const ComplexArray& spectrum, double t) {
  return spectrum * propagator_symbol(grid, t);
}

Field free_propagate(const Field& f, double t) {
  require_finite(f);
  if (t == 0.0) return f;
  const TorusGrid& g = f.grid();
  return Field(f.grid_ptr(), g.inverse(free_propagate_spectrum(g, g.forward(f.values()), t)));
}

Field fractional_derivative(const Field& f, double s) {
  if (!(s >= 0)) throw std::invalid_argument("derivative order must be nonnegative");
  const TorusGrid& g = f.grid();
  ComplexArray spec = g.forward(f.values());
  RealArray symbol = g.wavenumber_modulus().pow(s);
  symbol(0) = 0.0;
  spec *= symbol;
  return Field(f.grid_ptr(), g.inverse(spec));
}

double lebesgue_norm(const TorusGrid& grid, const RealArray& magnitudes, double q) {
  if (!(q >= 1)) throw std::invalid_argument("Lebesgue exponent must be >= 1");
  if (std::isinf(q)) return magnitudes.size() ? magnitudes.maxCoeff() : 0.0;
  const double sum = q == 2.0 ? magnitudes.square().sum() : magnitudes.pow(q).sum();
  return std::pow(sum * grid.cell_volume(), 1.0 / q);
}

double lebesgue_norm(const Field& f, double q) { return lebesgue_norm(f.grid(), f.values().abs(), q); }

double sobolev_norm(const Field& f, double s, double q) {
  if (s == 0.0) return lebesgue_norm(f, q);
  return lebesgue_norm(fractional_derivative(f, s), q);
}

double homogeneous_sobolev_norm(const TorusGrid& grid, const ComplexArray& spectrum, double s) {
  RealArray weight = s == 0.0 ? RealArray::Ones(grid.size()) : RealArray(grid.wavenumber_squared().pow(s));
  weight(0) = s == 0.0 ? 1.0 : 0.0;
  const double n2 = static_cast<double>(grid.size()) * static_cast<double>(grid.size());
  return std::sqrt((weight * spectrum.abs2()).sum() * grid.volume() / n2);
}

double homogeneous_sobolev_norm(const Field& f, double s) {
  return homogeneous_sobolev_norm(f.grid(), f.grid().forward(f.values()), s);
}

double plancherel_norm(const Field& f) { return homogeneous_sobolev_norm(f, 0.0); }

double weighted_l2_lattice_sum(const Field& f, double alpha) {
  if (!(alpha >= 0)) throw std::invalid_argument("weight exponent must be nonnegative");
  const TorusGrid& g = f.grid();
  const RealArray weight = alpha == 0.0 ? RealArray::Ones(g.size()) : RealArray(g.radius().pow(2.0 * alpha));
  return std::sqrt((weight * f.values().abs2()).sum() * g.cell_volume());
}

double weighted_l2_norm(const Field& f, double alpha) {
  if (alpha == 0.0 || f.grid().dim() != 1) return weighted_l2_lattice_sum(f, alpha);
  if (!(alpha > 0)) throw std::invalid_argument("weight exponent must be nonnegative");

  // h Σ_{j≠0} |jh|^β g(jh) = ∫ |x|^β g + 2 Σ_{k even} ζ(-β-k) g^{(k)}(0) h^{β+k+1} / k!
  // (the origin is a lattice point, and the odd terms cancel between sides).
  const TorusGrid& grid = f.grid();
  const double beta = 2.0 * alpha;
  const double h = grid.spacing();
  const double sum = weighted_l2_lattice_sum(f, alpha);
  double integral = sum * sum;

  const ComplexArray density = f.values().abs2().cast<Complex>();
  const ComplexArray spectrum = grid.forward(density);
  const Eigen::Index origin = grid.origin_index();
  const RealArray& k = grid.axis_wavenumbers();
  double factorial = 1.0;
  double previous = kInfinity;
  for (int order = 0; order <= 12; order += 2) {
    if (order > 0) factorial *= order * (order - 1);
    // order-th derivative at the origin from the trigonometric interpolant
    ComplexArray d = spectrum;
    if (order > 0) {
      RealArray symbol = k.pow(order) * ((order / 2) % 2 == 0 ? 1.0 : -1.0);
      symbol(grid.samples() / 2) = 0.0;  // Nyquist mode has no well-defined derivative
      d *= symbol;
    }
    const double derivative = grid.inverse(d)(origin).real();
    const double term = 2.0 * boost::math::zeta(-beta - order) * derivative * std::pow(h, beta + order + 1) / factorial;
    if (std::abs(term) > previous) break;  // asymptotic series started to diverge
    integral -= term;
    previous = std::abs(term);
  }
  return std::sqrt(std::max(integral, 0.0));
}

double boundary_mass_fraction(const Field& f) {
  const RealArray& shell = f.grid().boundary_shell_mask();
  // Far level: componentwise median over the shell, so a flat far field
  // counts as clean and a bump inside the shell does not shift it.
  std::vector<double> re, im;
  for (Eigen::Index i = 0; i < shell.size(); ++i)
    if (shell(i) > 0.0) {
      re.push_back(f.values()(i).real());
      im.push_back(f.values()(i).imag());
    }
  auto median = [](std::vector<double>& v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
  };
  const Complex far(median(re), median(im));
  const RealArray density = (f.values() - far).abs2();
  const double total = density.sum();
  if (total <= 1e-26 * f.values().abs2().sum()) return 0.0;
  return (density * shell).sum() / total;
}

double spectral_tail_fraction(const TorusGrid& grid, const ComplexArray& spectrum) {
  RealArray weight = (1.0 + grid.wavenumber_squared()) * spectrum.abs2();
  weight(0) = 0.0;
  const double total = weight.sum();
  // Non-constant content at round-off level (e.g. transforms of a constant).
  if (total <= 1e-26 * spectrum.abs2().sum()) return 0.0;
  return (weight * grid.high_mode_mask()).sum() / total;
}

double spectral_tail_fraction(const Field& f) { return spectral_tail_fraction(f.grid(), f.grid().forward(f.values())); }

double spatial_exponent(const PairPoint& point) {
  if (point.x < 0 || point.x > 1) throw std::invalid_argument("pair point x outside [0, 1]");
  return point.x == 0 ? kInfinity : 1.0 / point.x_value();
}

TimeSeriesNorm spatial_norm_series(std::span<const double> times, std::span<const Field> fields,
                                   const PairPoint& pair, double s) {
  if (times.size() != fields.size()) throw std::invalid_argument("times and fields differ in length");
  TimeSeriesNorm out;
  out.pair = pair;
  out.s = s;
  out.times.assign(times.begin(), times.end());
  const double q = spatial_exponent(pair);
  out.values.reserve(fields.size());
  for (const Field& f : fields) out.values.push_back(sobolev_norm(f, s, q));
  return out;
}

double bochner_norm(std::span<const double> times, std::span<const double> values, double y) {
  if (times.empty()) throw std::invalid_argument("empty time series");
  if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
  if (y < 0 || y > 1) throw std::invalid_argument("time exponent reciprocal must lie in [0, 1]");
  if (y == 0.0) {
    double sup = 0.0;
    for (double v : values) sup = std::max(sup, v);
    return sup;
  }
  if (times.size() == 1) return 0.0;
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw std::invalid_argument("time samples must be uniformly spaced");
  }
  const double r = 1.0 / y;
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = (i == 0 || i + 1 == values.size()) ? 0.5 : 1.0;
    acc += w * std::pow(values[i], r);
  }
  return std::pow(acc * dt, y);
}

double bochner_norm(const TimeSeriesNorm& series) {
  return bochner_norm(series.times, series.values, series.pair.y_value());
}

double spacetime_norm(std::span<const double> times, std::span<const Field> fields, const PairPoint& pair,
                      double s) {
  if (fields.empty()) throw std::invalid_argument("empty trajectory");
  return bochner_norm(spatial_norm_series(times, fields, pair, s));
}

}  // namespace ggp
