#include "ggp/diagnostics.hpp"

#include <doctest.h>

#include <algorithm>
#include <numbers>

using namespace ggp;
using std::numbers::pi;

namespace {

const ProblemParams kParams = make_params(1, Rational(5), 1);

Field gaussian(const GridPtr& g, double amp, double width = 2.0) {
  return sample_field(g, [&](double x, double) { return Complex(amp * std::exp(-x * x / (2.0 * width * width))); });
}

// dt = 1/128 puts every dyadic checkpoint of T = 2 on the step grid.
SolverConfig dyadic_config(bool free) {
  SolverConfig c;
  c.dt = 1.0 / 128.0;
  c.horizon = 2.0;
  c.snapshot_every = 4;
  c.disable_nonlinearity = free;
  return c;
}

Trajectory zero_trajectory() {
  const GridPtr g = make_grid(1, 20.0 * pi, 256);
  return run_split_step(Field(g, ComplexArray::Zero(256)), dyadic_config(false), kParams);
}

}  // namespace

TEST_CASE("free evolution has vanishing profile increments") {
  const GridPtr g = make_grid(1, 40.0 * pi, 1024);
  const Trajectory t = run_split_step(gaussian(g, 0.1), dyadic_config(true), kParams);
  REQUIRE(t.status == RunStatus::ok);
  const std::vector<double> sig{0.5, 2.0};
  const ScatteringReport r = scattering_profile(t, sig);
  REQUIRE(r.checkpoints.size() == 5);
  CHECK(r.checkpoints.front() == 0.125);
  CHECK(r.checkpoints.back() == 2.0);
  for (double inc : r.inc_hs0) CHECK(inc <= 1e-12);
  for (double inc : r.inc_hs1) CHECK(inc <= 1e-12);
  REQUIRE(r.inc_sigma.size() == 2);
  for (const auto& series : r.inc_sigma) {
    CHECK(series.size() == 4);
    for (double inc : series) CHECK(inc <= 1e-12);
  }
}

TEST_CASE("X-norm tail is non-increasing and vanishes at the horizon") {
  const GridPtr g = make_grid(1, 40.0 * pi, 1024);
  const Trajectory t = run_split_step(gaussian(g, 0.1), dyadic_config(false), kParams);
  double prev = xnorm_tail(t, 0.0);
  CHECK(prev > 0.0);
  for (double t1 = 0.125; t1 <= 2.0; t1 += 0.125) {
    const double cur = xnorm_tail(t, t1);
    CHECK(cur <= prev);
    prev = cur;
  }
  CHECK(xnorm_tail(t, 2.0) == 0.0);
  CHECK(xnorm_tail(t, 3.0) == 0.0);

  const ScatteringReport r = scattering_profile(t);
  CHECK(r.xnorm_total == doctest::Approx(xnorm_tail(t, 0.0)));
  CHECK(std::is_sorted(r.xnorm_tails.rbegin(), r.xnorm_tails.rend()));
}

TEST_CASE("zero data: consistent verdict, healthy monitor, zero certificate") {
  const Trajectory t = zero_trajectory();
  const ScatteringReport r = scattering_profile(t);
  CHECK(r.verdict == Verdict::scattering_consistent);
  for (double inc : r.inc_hs1) CHECK(inc == 0.0);
  const BlowupReport b = blowup_monitor(t);
  CHECK(b.status == BlowupStatus::healthy);
  CHECK_FALSE(b.superlinear_growth);
  SmallnessCertificate c = small_data_certificate(t.fields.front(), kParams);
  CHECK(c.lebesgue_smallness == 0.0);
  CHECK(c.weighted_smallness == 0.0);
  attach_window(c, t);
  CHECK(c.has_window);
  CHECK(c.window_xnorm == 0.0);
  CHECK(c.window_bound_satisfied);
}

TEST_CASE("scattering_profile input checks") {
  const Trajectory t = zero_trajectory();
  const std::vector<double> too_large{4.0};
  CHECK_THROWS_AS(scattering_profile(t, too_large), std::invalid_argument);
  const std::vector<double> negative{-0.1};
  CHECK_THROWS_AS(scattering_profile(t, negative), std::invalid_argument);
  CHECK_THROWS_AS(scattering_profile(t, {}, 3), std::invalid_argument);
  // T/2^7 = 1/64 is two steps, not a snapshot time with snapshot_every = 4.
  CHECK_THROWS_AS(scattering_profile(t, {}, 8), std::invalid_argument);

  Trajectory dirty = t;
  dirty.status = RunStatus::contaminated;
  CHECK_THROWS(scattering_profile(dirty));
  Trajectory blown = t;
  blown.status = RunStatus::diverged;
  CHECK(scattering_profile(blown).verdict == Verdict::growth_detected);
}

TEST_CASE("certificate terms scale linearly with the amplitude") {
  const GridPtr g = make_grid(1, 80.0 * pi, 2048);
  const SmallnessCertificate a = small_data_certificate(gaussian(g, 0.05), kParams);
  const SmallnessCertificate b = small_data_certificate(gaussian(g, 0.15), kParams);
  CHECK(b.lebesgue_term == doctest::Approx(3.0 * a.lebesgue_term).epsilon(1e-12));
  CHECK(b.weighted_term == doctest::Approx(3.0 * a.weighted_term).epsilon(1e-12));
  CHECK(b.hs2_term == doctest::Approx(3.0 * a.hs2_term).epsilon(1e-12));
  CHECK(a.lebesgue_smallness == doctest::Approx(a.lebesgue_term + a.hs2_term));
  CHECK(a.weighted_smallness == doctest::Approx(a.weighted_term + a.hs2_term));
  CHECK_FALSE(a.has_window);
}

TEST_CASE("blow-up monitor flags lost resolution") {
  const GridPtr g = make_grid(1, 20.0 * pi, 256);
  SolverConfig c = dyadic_config(false);
  c.divergence_threshold = 3.0;
  c.boundary_guard = false;
  const Trajectory t = run_split_step(gaussian(g, 2.0), c, make_params(1, Rational(5), -1));
  const BlowupReport b = blowup_monitor(t);
  CHECK(b.status != BlowupStatus::healthy);
}

TEST_CASE("diagnostics leave the trajectory untouched") {
  const GridPtr g = make_grid(1, 40.0 * pi, 1024);
  const Trajectory t = run_split_step(gaussian(g, 0.1), dyadic_config(false), kParams);
  const Trajectory copy = t;
  (void)scattering_profile(t);
  (void)blowup_monitor(t);
  SmallnessCertificate c = small_data_certificate(t.fields.front(), kParams);
  attach_window(c, t);
  (void)xnorm_tail(t, 0.5);
  REQUIRE(copy.fields.size() == t.fields.size());
  for (std::size_t i = 0; i < t.fields.size(); ++i) {
    CHECK((copy.fields[i].values() == t.fields[i].values()).all());
    CHECK(copy.ledger[i].acc_p1 == t.ledger[i].acc_p1);
  }
}

TEST_CASE("Strichartz hypotheses are checked in order") {
  const PairSet s = derive_pairs(kParams);
  CHECK(strichartz_hypothesis_failure(1, s.p1, s.p1bar, Rational(3, 2)).empty());
  CHECK(strichartz_hypothesis_failure(1, s.p1, s.p1bar, Rational(3)) == "1/q > 1/2");
  CHECK(strichartz_hypothesis_failure(1, s.p1, s.p1bar, Rational(5, 4)) == "pi(P) = 1/q");
  CHECK(strichartz_hypothesis_failure(1, s.p1, s.p1, Rational(3, 2)) == "Pbar in T'");
  CHECK(strichartz_hypothesis_failure(3, s.p1, s.p1bar, Rational(3, 2)) == "n must be 1 or 2");
  const auto family = gaussian_family(2);
  CHECK_THROWS_AS(strichartz_ratio(1, s.p1, s.p1, Rational(3, 2), family), std::invalid_argument);
}

TEST_CASE("Strichartz quotients: scale invariance and a growing family") {
  const PairSet s = derive_pairs(kParams);
  const auto small = gaussian_family(4, 7);
  const auto large = gaussian_family(8, 7);
  for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i].width == large[i].width);
  const StrichartzRatios a = strichartz_ratio(1, s.p1, s.p1bar, Rational(3, 2), small);
  const StrichartzRatios b = strichartz_ratio(1, s.p1, s.p1bar, Rational(3, 2), large);
  // π(P1) = 1/q makes the homogeneous quotient invariant under x -> λx, t -> λ²t.
  const auto [lo, hi] = std::minmax_element(b.homogeneous_by_member.begin(), b.homogeneous_by_member.end());
  CHECK(*hi / *lo < 1.01);
  CHECK(b.homogeneous >= a.homogeneous);
  CHECK(b.inhomogeneous >= a.inhomogeneous);
  CHECK(std::isfinite(b.inhomogeneous));
  CHECK(b.inhomogeneous > 0.0);
}
