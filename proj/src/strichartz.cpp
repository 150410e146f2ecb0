#include "ggp/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ggp {

std::vector<GaussianSample> gaussian_family(int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("family needs at least one member");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GaussianSample> family;
  family.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    GaussianSample g;
    g.width = std::exp2(2.0 * unit(rng) - 1.0);
    g.center = (2.0 * unit(rng) - 1.0) * g.width;
    g.frequency = unit(rng);
    family.push_back(g);
  }
  return family;
}

std::string strichartz_hypothesis_failure(int n, const PairPoint& p, const PairPoint& pbar, const Rational& q) {
  if (n != 1 && n != 2) return "n must be 1 or 2";
  if (!(q > 0)) return "q must be positive";
  const Rational inv_q = 1 / q;
  const Rational half(1, 2);
  if (!(inv_q > half)) return "1/q > 1/2";
  if (n == 1 && !(inv_q <= 1)) return "1/q <= 1";
  if (n == 2 && !(inv_q < Rational(n, 2 * (n - 1)))) return "1/q < n/(2(n-1))";
  if (!triangle_membership(p, n, Triangle::THat)) return "P in T-hat";
  if (scaling_index(p, n) != inv_q) return "pi(P) = 1/q";
  if (!triangle_membership(p, n, Triangle::T)) return "P in T";
  if (!triangle_membership(pbar, n, Triangle::TPrime)) return "Pbar in T'";
  if (scaling_index(pbar, n) - scaling_index(p, n) != Rational(2, n)) return "pi(Pbar) - pi(P) = 2/n";
  return {};
}

namespace {

struct MemberRatios {
  double homogeneous;
  double inhomogeneous;
};

// Grid, horizon and source profile all scale with the member width, so the
// quotients are comparable across the family.
MemberRatios member_ratios(int n, const PairPoint& p, const PairPoint& pbar, double q, const GaussianSample& g) {
  const double w = g.width;
  const GridPtr grid = n == 1 ? make_grid(1, 64.0 * w, 2048) : make_grid(2, 32.0 * w, 256);
  const int steps = n == 1 ? 400 : 200;
  const double horizon = 4.0 * w * w;
  const double dt = horizon / steps;
  const double tau = w * w;
  const double xi = g.frequency / w;

  const Field f = sample_field(grid, [&](double x, double y) {
    const double r2 = (x - g.center) * (x - g.center) + (n == 2 ? y * y : 0.0);
    return std::exp(-r2 / (2.0 * w * w)) * std::polar(1.0, xi * x);
  });
  const ComplexArray f_hat = grid->forward(f.values());
  const double qp = spatial_exponent(p);
  const double qbar = spatial_exponent(pbar);

  auto chi = [&](double s) {
    if (s <= 0.0 || s >= tau) return 0.0;
    const double b = std::sin(std::numbers::pi * s / tau);
    return b * b;
  };

  // The Duhamel term is accumulated in the interaction picture:
  // -i U(t) Σ_k w_k χ(s_k) U(-s_k) ĝ dt.
  std::vector<double> times, free_norms, duhamel_norms, source_norms;
  const double g_norm = lebesgue_norm(f, qbar);
  ComplexArray acc = ComplexArray::Zero(grid->size());
  ComplexArray prev = ComplexArray::Zero(grid->size());
  for (int j = 0; j <= steps; ++j) {
    const double t = j * dt;
    const double c = chi(t);
    const ComplexArray symbol = propagator_symbol(*grid, t);
    const ComplexArray cur = c * f_hat * symbol.conjugate();
    if (j > 0) acc += 0.5 * dt * (prev + cur);
    prev = cur;
    times.push_back(t);
    free_norms.push_back(lebesgue_norm(*grid, grid->inverse(f_hat * symbol).abs(), qp));
    duhamel_norms.push_back(lebesgue_norm(*grid, grid->inverse(Complex(0.0, -1.0) * acc * symbol).abs(), qp));
    source_norms.push_back(c * g_norm);
  }

  const double py = p.y_value();
  const double homog = bochner_norm(times, free_norms, py) / lebesgue_norm(f, q);
  const double inhomog = bochner_norm(times, duhamel_norms, py) / bochner_norm(times, source_norms, pbar.y_value());
  return {homog, inhomog};
}

}  // namespace

StrichartzRatios strichartz_ratio(int n, const PairPoint& p, const PairPoint& pbar, const Rational& q,
                                  std::span<const GaussianSample> family) {
  const std::string failure = strichartz_hypothesis_failure(n, p, pbar, q);
  if (!failure.empty()) throw std::invalid_argument("Strichartz hypothesis violated: " + failure);
  if (family.empty()) throw std::invalid_argument("empty sample family");
  StrichartzRatios out;
  const double qd = to_double(q);
  for (const GaussianSample& g : family) {
    if (!(g.width > 0.0)) throw std::invalid_argument("family widths must be positive");
    const MemberRatios r = member_ratios(n, p, pbar, qd, g);
    out.homogeneous_by_member.push_back(r.homogeneous);
    out.inhomogeneous_by_member.push_back(r.inhomogeneous);
    out.homogeneous = std::max(out.homogeneous, r.homogeneous);
    out.inhomogeneous = std::max(out.inhomogeneous, r.inhomogeneous);
  }
  return out;
}

}  // namespace ggp
