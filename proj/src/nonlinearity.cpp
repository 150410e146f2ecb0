#include "ggp/nonlinearity.hpp"

#include <numbers>
#include <random>
#include <stdexcept>

namespace ggp {

PowerLaw power_law(const ProblemParams& params) { return {params.p_value(), static_cast<double>(params.mu)}; }

Complex eval_F(Complex z, const ProblemParams& params) { return eval_F(z, power_law(params)); }

ComplexArray apply_F(const ComplexArray& v, const PowerLaw& law) {
  ComplexArray out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = eval_F(v(i), law);
  return out;
}

namespace {

double bump_psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double CutoffSpec::operator()(double s) const {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double a = bump_psi(2.0 - s);
  const double b = bump_psi(s - 1.0);
  return a / (a + b);
}

SplitNonlinearity eval_F_parts(Complex z, const PowerLaw& law, const CutoffSpec& cutoff) {
  const Complex f = eval_F(z, law);
  const double phi = cutoff(std::abs(z));
  if (phi == 1.0) return {f, Complex(0.0)};
  if (phi == 0.0) return {Complex(0.0), f};
  // Whichever share is at least half of F is computed by subtraction; the
  // difference is then exact (Sterbenz) and the two parts sum back to F.
  if (phi >= 0.5) {
    const Complex f1 = phi * f;
    return {f1, f - f1};
  }
  const Complex f2 = (1.0 - phi) * f;
  return {f - f2, f2};
}

SplitNonlinearity eval_F_parts(Complex z, const ProblemParams& params, const CutoffSpec& cutoff) {
  return eval_F_parts(z, power_law(params), cutoff);
}

double energy(const Field& v, const ComplexArray& spectrum, const PowerLaw& law) {
  if (!(law.p >= 2.0)) throw std::invalid_argument("energy needs p >= 2");
  const TorusGrid& g = v.grid();
  const double n2 = static_cast<double>(g.size()) * static_cast<double>(g.size());
  const double gradient = (g.wavenumber_squared() * spectrum.abs2()).sum() * g.volume() / n2;
  const RealArray w = (v.values().abs2() + 2.0 * v.values().real()).abs();
  const double potential = w.pow(law.p).sum() * g.cell_volume();
  return gradient + law.mu / law.p * potential;
}

double energy(const Field& v, const PowerLaw& law) { return energy(v, v.grid().forward(v.values()), law); }

double energy(const Field& v, const ProblemParams& params) { return energy(v, power_law(params)); }

BoundProbe bound_probe(const PowerLaw& law, const CutoffSpec& cutoff, std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("bound probe needs at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_modulus(-8.0, 8.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double k1 = law.p - 1.0;
  const double k2 = 2.0 * law.p - 1.0;

  BoundProbe out;
  out.samples = samples;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double e = log_modulus(rng);
    const double r = std::pow(10.0, e);
    const Complex z = std::polar(r, phase(rng));
    const SplitNonlinearity parts = eval_F_parts(z, law, cutoff);
    const double ratio1 = std::abs(parts.f1) / std::pow(r, k1);
    const double ratio2 = std::abs(parts.f2) / std::pow(r, k2);
    const int decade = std::clamp(static_cast<int>(std::floor(e + 8.0)), 0, BoundProbe::kDecades - 1);
    out.c1 = std::max(out.c1, ratio1);
    out.c2 = std::max(out.c2, ratio2);
    out.c1_by_decade[decade] = std::max(out.c1_by_decade[decade], ratio1);
    out.c2_by_decade[decade] = std::max(out.c2_by_decade[decade], ratio2);
  }
  return out;
}

BoundProbe bound_probe(const ProblemParams& params, const CutoffSpec& cutoff, std::int64_t samples,
                       std::uint64_t seed) {
  return bound_probe(power_law(params), cutoff, samples, seed);
}

}  // namespace ggp
