#include "ggp/spectral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ggp;
using std::numbers::pi;

namespace {

// Free Schrödinger evolution of exp(-|x|²/(2a)) in n dimensions:
// (a/(a+2it))^{n/2} exp(-|x|²/(2(a+2it))).
Complex free_gaussian(double r2, double a, double t, int n) {
  const Complex z(a, 2.0 * t);
  return std::pow(a / z, 0.5 * n) * std::exp(-r2 / (2.0 * z));
}

Field gaussian(const GridPtr& g, double a) {
  return sample_field(g, [&](double x, double y) { return Complex(std::exp(-(x * x + y * y) / (2.0 * a))); });
}

}  // namespace

TEST_CASE("grid construction validates its inputs") {
  CHECK_THROWS_AS(TorusGrid(3, 1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(1, -1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(1, 1.0, 12), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(1, 1.0, 4), std::invalid_argument);
  const TorusGrid g(1, 2.0 * pi, 16);
  CHECK(g.axis_coordinates()(g.origin_index()) == 0.0);
  CHECK(g.axis_wavenumbers()(1) == doctest::Approx(1.0));
  CHECK(g.axis_wavenumbers()(15) == doctest::Approx(-1.0));
  CHECK(g.axis_wavenumbers()(8) == doctest::Approx(-8.0));
}

TEST_CASE("forward and inverse transforms are mutually inverse in 1D and 2D") {
  for (int dim : {1, 2}) {
    const GridPtr g = make_grid(dim, 10.0, 32);
    const Field f = sample_field(g, [](double x, double y) { return Complex(std::sin(x) + y, std::cos(2 * x * y)); });
    const ComplexArray back = g->inverse(g->forward(f.values()));
    CHECK((back - f.values()).abs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("plane waves acquire the phase exp(-i|k|²t)") {
  for (int dim : {1, 2}) {
    const GridPtr g = make_grid(dim, 2.0 * pi, 64);
    const Field f = plane_wave(g, 3, dim == 2 ? -5 : 0);
    const double k2 = 9.0 + (dim == 2 ? 25.0 : 0.0);
    for (double t : {0.1, 1.0, 7.3}) {
      const Field out = free_propagate(f, t);
      const ComplexArray expected = f.values() * std::polar(1.0, -k2 * t);
      CHECK((out.values() - expected).abs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("free propagation is unitary and the identity at t = 0") {
  const GridPtr g = make_grid(1, 40.0, 512);
  Field f = sample_field(g, [](double x, double) { return std::exp(-x * x) * std::polar(1.0, 3 * x); });
  const double norm0 = lebesgue_norm(f, 2.0);
  CHECK((free_propagate(f, 0.0).values() - f.values()).abs().maxCoeff() == 0.0);
  for (int step = 0; step < 20; ++step) {
    const Field next = free_propagate(f, 0.05);
    CHECK(std::abs(lebesgue_norm(next, 2.0) - lebesgue_norm(f, 2.0)) / norm0 <= 1e-12);
    f = next;
  }
}

TEST_CASE("free Gaussian evolution matches the closed form") {
  const GridPtr g = make_grid(1, 80.0 * pi, 2048);
  const double a = 4.0;
  const Field f = gaussian(g, a);
  for (double t : {0.5, 2.0, 5.0}) {
    const Field out = free_propagate(f, t);
    const Field exact = sample_field(g, [&](double x, double) { return free_gaussian(x * x, a, t, 1); });
    CHECK((out.values() - exact.values()).abs().maxCoeff() <= 1e-8);
  }
  const GridPtr g2 = make_grid(2, 40.0, 128);
  const Field f2 = gaussian(g2, 1.0);
  const Field out2 = free_propagate(f2, 0.7);
  const Field exact2 = sample_field(g2, [&](double x, double y) { return free_gaussian(x * x + y * y, 1.0, 0.7, 2); });
  CHECK((out2.values() - exact2.values()).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("Plancherel: frequency-side and sample-side L² norms agree") {
  for (int dim : {1, 2}) {
    const GridPtr g = make_grid(dim, 30.0, 64);
    const Field f = sample_field(g, [](double x, double y) { return Complex(std::exp(-x * x - y * y), x * std::exp(-x * x)); });
    const double a = plancherel_norm(f), b = lebesgue_norm(f, 2.0);
    CHECK(std::abs(a - b) / b <= 1e-12);
  }
}

TEST_CASE("Lebesgue norms of a Gaussian match quadrature") {
  const GridPtr g = make_grid(1, 80.0 * pi, 2048);
  const double a = 4.0;
  const Field f = gaussian(g, a);
  boost::math::quadrature::gauss_kronrod<double, 61> gk;
  for (double q : {1.0, 1.5, 2.0, 5.0}) {
    const double integral = gk.integrate([&](double x) { return std::exp(-q * x * x / (2.0 * a)); }, -60.0, 60.0, 15, 1e-14);
    CHECK(lebesgue_norm(f, q) == doctest::Approx(std::pow(integral, 1.0 / q)).epsilon(1e-10));
  }
  CHECK(lebesgue_norm(f, kInfinity) == doctest::Approx(1.0));
  CHECK_THROWS_AS(lebesgue_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("homogeneous Sobolev norms of a Gaussian match the lattice-corrected Gamma form") {
  // On R: ‖|D|^s e^{-x²/(2a)}‖² = a^{1/2-s} Γ(s+1/2). The torus norm is the
  // lattice sum (h/2π) Σ |ξ_k|^{2s} ψ(ξ_k), ψ = 2πa e^{-aξ²}, h = 2π/L, which
  // differs from the integral by 2 Σ_j ζ(-2s-2j) h^{2s+2j+1} a (-a)^j / j!.
  const double length = 80.0 * pi, h = 2.0 * pi / length;
  const GridPtr g = make_grid(1, length, 2048);
  const double a = 4.0;
  const Field f = gaussian(g, a);
  for (double s : {0.25, 0.3, 1.0, 1.7}) {
    double lattice = std::pow(a, 0.5 - s) * std::tgamma(s + 0.5);
    double coeff = a;
    for (int j = 0; j < 8; ++j) {
      lattice += 2.0 * boost::math::zeta(-2.0 * s - 2.0 * j) * std::pow(h, 2.0 * s + 2.0 * j + 1.0) * coeff;
      coeff *= -a / (j + 1);
    }
    CHECK(homogeneous_sobolev_norm(f, s) == doctest::Approx(std::sqrt(lattice)).epsilon(1e-10));
    CHECK(sobolev_norm(f, s, 2.0) == doctest::Approx(std::sqrt(lattice)).epsilon(1e-10));
  }
}

TEST_CASE("fractional derivatives act on plane waves by |k|^s") {
  const GridPtr g = make_grid(1, 2.0 * pi, 64);
  const Field f = plane_wave(g, -6);
  const Field d = fractional_derivative(f, 0.5);
  CHECK((d.values() - std::sqrt(6.0) * f.values()).abs().maxCoeff() < 1e-12);
  const Field constant(g, ComplexArray::Constant(64, Complex(2.0, 1.0)));
  CHECK(fractional_derivative(constant, 0.3).values().abs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(fractional_derivative(f, -1.0), std::invalid_argument);
}

TEST_CASE("weighted L² norm matches the integral over R to 1e-8") {
  // ∫ |x|^{2α} e^{-x²/a} dx = a^{α+1/2} Γ(α+1/2)
  const GridPtr g = make_grid(1, 80.0 * pi, 2048);
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double a : {4.0, 8.0}) {
    const Field f = gaussian(g, a);
    for (double alpha : {1.0 / 6.0, 0.25, 0.4}) {
      const double closed = std::sqrt(std::pow(a, alpha + 0.5) * std::tgamma(alpha + 0.5));
      const double quad =
          std::sqrt(2.0 * ts.integrate([&](double x) { return std::pow(x, 2 * alpha) * std::exp(-x * x / a); }, 0.0,
                                       std::numeric_limits<double>::infinity()));
      CHECK(closed == doctest::Approx(quad).epsilon(1e-10));
      CHECK(std::abs(weighted_l2_norm(f, alpha) - closed) <= 1e-8);
    }
  }
}

TEST_CASE("plain lattice sum carries an origin-singularity error") {
  const GridPtr g = make_grid(1, 80.0 * pi, 2048);
  const Field f = gaussian(g, 4.0);
  const double alpha = 1.0 / 6.0;
  const double closed = std::sqrt(std::pow(4.0, alpha + 0.5) * std::tgamma(alpha + 0.5));
  CHECK(std::abs(weighted_l2_lattice_sum(f, alpha) - closed) > 1e-5);
}

TEST_CASE("run-health fractions") {
  const GridPtr g = make_grid(1, 100.0, 256);
  const Field constant(g, ComplexArray::Constant(256, std::polar(1.0, 0.7) - 1.0));
  CHECK(boundary_mass_fraction(constant) == 0.0);
  CHECK(spectral_tail_fraction(constant) == 0.0);
  const Field bump = gaussian(g, 4.0);
  CHECK(boundary_mass_fraction(bump) < 1e-20);
  CHECK(spectral_tail_fraction(bump) < 1e-20);
  const Field edge = sample_field(g, [](double x, double) { return Complex(std::exp(-(x - 47.0) * (x - 47.0))); });
  CHECK(boundary_mass_fraction(edge) > 0.5);
  const Field rough = plane_wave(g, 100);
  CHECK(spectral_tail_fraction(rough) == doctest::Approx(1.0));
}

TEST_CASE("Bochner norms on uniform grids") {
  const std::vector<double> t{0.0, 0.5, 1.0, 1.5, 2.0};
  const std::vector<double> c(5, 3.0);
  CHECK(bochner_norm(t, c, 0.25) == doctest::Approx(3.0 * std::pow(2.0, 0.25)));
  CHECK(bochner_norm(t, c, 1.0) == doctest::Approx(6.0));
  const std::vector<double> v{1.0, 4.0, 2.0, 0.0, 0.0};
  CHECK(bochner_norm(t, v, 0.0) == 4.0);
  const std::vector<double> bad{0.0, 0.5, 1.2, 1.5, 2.0};
  CHECK_THROWS_AS(bochner_norm(bad, c, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(bochner_norm(t, c, 1.5), std::invalid_argument);
}

TEST_CASE("space-time norm of a free plane wave") {
  // |U(t) e^{ikx}| = 1, so ‖·‖_{L^r_t L^q_x} = T^{1/r} L^{1/q}.
  const GridPtr g = make_grid(1, 2.0 * pi, 32);
  const Field f = plane_wave(g, 2);
  std::vector<double> times;
  std::vector<Field> fields;
  for (int k = 0; k <= 10; ++k) {
    times.push_back(0.1 * k);
    fields.push_back(free_propagate(f, 0.1 * k));
  }
  const PairPoint P{Rational(1, 4), Rational(1, 3)};
  CHECK(spacetime_norm(times, fields, P, 0.0) == doctest::Approx(std::pow(2.0 * pi, 0.25)));
  CHECK(spacetime_norm(times, fields, P, 1.0) == doctest::Approx(2.0 * std::pow(2.0 * pi, 0.25)));
  CHECK(spatial_exponent(PairPoint{Rational(0), Rational(1, 2)}) == kInfinity);
}
