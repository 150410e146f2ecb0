#pragma once

#include "ggp/exponents.hpp"
#include "ggp/spectral.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace ggp {

/// Real-valued power and sign used for pointwise evaluation. Any p > 2 is
/// accepted here; the admissible-range gate lives in the solver entry points.
struct PowerLaw {
  double p = 5.0;
  double mu = 1.0;
};

PowerLaw power_law(const ProblemParams& params);

/// |w|^{p-2} w with 0^{p-2} taken as 0.
template <typename Scalar>
Scalar signed_power(Scalar w, Scalar p) {
  if (w == Scalar(0)) return Scalar(0);
  using std::abs;
  using std::pow;
  return pow(abs(w), p - Scalar(2)) * w;
}

/// F(z) = μ ||z|² + 2 Re z|^{p-2} (|z|² + 2 Re z)(1 + z).
template <typename Scalar>
std::complex<Scalar> eval_F(std::complex<Scalar> z, Scalar p, Scalar mu) {
  const Scalar w = std::norm(z) + Scalar(2) * z.real();
  return mu * signed_power(w, p) * (Scalar(1) + z);
}

inline Complex eval_F(Complex z, const PowerLaw& law) { return eval_F(z, law.p, law.mu); }
Complex eval_F(Complex z, const ProblemParams& params);

/// g(ρ) = μ |ρ-1|^{p-2}(ρ-1), so that F(u-1) = g(|u|²) u.
template <typename Scalar>
Scalar gauge_potential(Scalar rho, Scalar p, Scalar mu) {
  return mu * signed_power(rho - Scalar(1), p);
}

/// F applied samplewise.
ComplexArray apply_F(const ComplexArray& v, const PowerLaw& law);

/// Smooth bump φ(s) = ψ(2-s) / (ψ(2-s) + ψ(s-1)) with ψ(t) = exp(-1/t) for
/// t > 0: φ = 1 on [0, 1], φ = 0 on [2, ∞).
struct CutoffSpec {
  double operator()(double s) const;
};

struct SplitNonlinearity {
  Complex f1;
  Complex f2;
};

/// F1 = φ(|z|) F, F2 = (1 - φ(|z|)) F. The larger part is formed by
/// subtraction so that f1 + f2 reproduces F exactly in floating point.
SplitNonlinearity eval_F_parts(Complex z, const PowerLaw& law, const CutoffSpec& cutoff = {});
SplitNonlinearity eval_F_parts(Complex z, const ProblemParams& params, const CutoffSpec& cutoff = {});

/// ‖∇v‖²_{L²} + (μ/p) ‖ |v|² + 2 Re v ‖^p_{L^p}.
double energy(const Field& v, const PowerLaw& law);
double energy(const Field& v, const ProblemParams& params);
/// Same with the spectrum of v already available.
double energy(const Field& v, const ComplexArray& spectrum, const PowerLaw& law);

/// Empirical suprema of |F1(z)|/|z|^{k1} and |F2(z)|/|z|^{k2} over random
/// z with log-uniform modulus in [1e-8, 1e8] and uniform phase, also
/// resolved per decade of |z|.
struct BoundProbe {
  static constexpr int kDecades = 16;
  static constexpr double kMinModulus = 1e-8;

  double c1 = 0.0;
  double c2 = 0.0;
  std::array<double, kDecades> c1_by_decade{};
  std::array<double, kDecades> c2_by_decade{};
  std::int64_t samples = 0;
};

BoundProbe bound_probe(const PowerLaw& law, const CutoffSpec& cutoff, std::int64_t samples, std::uint64_t seed = 1);
BoundProbe bound_probe(const ProblemParams& params, const CutoffSpec& cutoff, std::int64_t samples,
                       std::uint64_t seed = 1);

}  // namespace ggp
