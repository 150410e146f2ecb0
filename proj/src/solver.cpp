#include "ggp/solver.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ggp {

std::string_view name_of(Method m) { return m == Method::strang ? "strang" : "picard"; }

std::string_view name_of(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::diverged: return "diverged";
    case RunStatus::contaminated: return "contaminated";
    case RunStatus::no_contraction: return "no_contraction";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "strang") return Method::strang;
  if (name == "picard") return Method::picard;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive and finite");
  };
  positive(dt, "dt");
  positive(horizon, "T");
  positive(picard_tol, "picard_tol");
  positive(subdivision_m, "subdivision_m");
  positive(contamination_threshold, "contamination_threshold");
  positive(coarse_grid_threshold, "coarse_grid_threshold");
  positive(divergence_threshold, "divergence_threshold");
  if (picard_max_iter < 1) throw std::invalid_argument("picard_max_iter must be >= 1");
  if (snapshot_every < 1) throw std::invalid_argument("snapshot_every must be >= 1");
  const double steps = horizon / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
    throw std::invalid_argument("T must be an integer multiple of dt");
}

long long SolverConfig::step_count() const { return std::llround(horizon / dt); }

XNormSpec xnorm_spec(const ProblemParams& params) {
  const ExponentSet e = derive_exponents(params);
  const PairSet pairs = derive_pairs(params);
  XNormSpec x;
  x.p1 = pairs.p1;
  x.p2 = pairs.p2;
  x.q1 = 1.0 / pairs.p1.x_value();
  x.y1 = pairs.p1.y_value();
  x.q2 = 1.0 / pairs.p2.x_value();
  x.y2 = pairs.p2.y_value();
  x.s0 = to_double(e.s0);
  x.s1 = to_double(e.s1);
  x.s2 = to_double(e.s2);
  return x;
}

namespace {

struct XIntegrands {
  double l_p1;
  double w_p2;
};

XIntegrands x_integrands(const Field& v, const ComplexArray& spectrum, const XNormSpec& norms) {
  const TorusGrid& g = v.grid();
  ComplexArray d = spectrum * g.wavenumber_modulus().pow(norms.s2);
  d(0) = 0.0;
  return {lebesgue_norm(v, norms.q1), lebesgue_norm(g, g.inverse(d).abs(), norms.q2)};
}

double mass_of(const Field& v) {
  return std::sqrt((1.0 + v.values()).abs2().sum() * v.grid().cell_volume());
}

// Propagator symbol cached for a fixed dt.
class StrangStepper {
 public:
  StrangStepper(const GridPtr& grid, double dt, const PowerLaw& law, bool linear_only)
      : grid_(grid), dt_(dt), law_(law), linear_only_(linear_only), symbol_(propagator_symbol(*grid, dt)) {}

  void step(ComplexArray& v) const {
    if (!linear_only_) rotate(v, 0.5 * dt_);
    v = grid_->inverse(grid_->forward(v) * symbol_);
    if (!linear_only_) rotate(v, 0.5 * dt_);
  }

 private:
  void rotate(ComplexArray& v, double tau) const {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const Complex u = 1.0 + v(i);
      const double g = gauge_potential(std::norm(u), law_.p, law_.mu);
      if (g == 0.0) continue;
      // v + u (e^{iφ} - 1) with e^{iφ} - 1 = -2 sin²(φ/2) + i sin φ; forming
      // u e^{iφ} - 1 instead loses the φ²/2 in cos φ and biases |u| upward.
      const double phi = -tau * g;
      const double half = std::sin(0.5 * phi);
      v(i) += u * Complex(-2.0 * half * half, std::sin(phi));
    }
  }

  GridPtr grid_;
  double dt_;
  PowerLaw law_;
  bool linear_only_;
  ComplexArray symbol_;
};

}  // namespace

LedgerRow measure(const Field& v, double t, const PowerLaw& law, const XNormSpec& norms) {
  const TorusGrid& g = v.grid();
  const ComplexArray spectrum = g.forward(v.values());
  LedgerRow row;
  row.t = t;
  row.mass = mass_of(v);
  row.energy = energy(v, spectrum, law);
  row.hs0 = homogeneous_sobolev_norm(g, spectrum, norms.s0);
  row.hs1 = homogeneous_sobolev_norm(g, spectrum, norms.s1);
  row.hs2 = homogeneous_sobolev_norm(g, spectrum, norms.s2);
  const XIntegrands xi = x_integrands(v, spectrum, norms);
  row.l_p1 = xi.l_p1;
  row.w_p2 = xi.w_p2;
  row.boundary_fraction = boundary_mass_fraction(v);
  row.spectral_tail = spectral_tail_fraction(g, spectrum);
  row.mean = v.mean();
  return row;
}

Field strang_step(const Field& v, double dt, const PowerLaw& law) {
  if (!v.finite()) throw std::invalid_argument("strang_step needs a finite field");
  StrangStepper stepper(v.grid_ptr(), dt, law, false);
  ComplexArray values = v.values();
  stepper.step(values);
  Field out(v.grid_ptr(), std::move(values));
  if (!out.finite()) out.mark_diverged();
  return out;
}

Field strang_step(const Field& v, double dt, const ProblemParams& params) {
  return strang_step(v, dt, power_law(params));
}

Trajectory run_split_step(const Field& v0, const SolverConfig& config, const ProblemParams& params) {
  config.validate();
  if (v0.grid().dim() != params.n) throw std::invalid_argument("grid dimension differs from n");
  if (!params.in_range) {
    if (!config.allow_out_of_range)
      throw std::invalid_argument("p = " + to_string(params.p) + " outside " + range_description(params.n));
    spdlog::warn("running with p = {} outside the admissible range {}", to_string(params.p),
                 range_description(params.n));
  }
  if (!v0.finite()) throw std::invalid_argument("initial data contain non-finite samples");
  const double tail = spectral_tail_fraction(v0);
  if (tail > config.coarse_grid_threshold)
    throw std::invalid_argument("grid too coarse: spectral tail fraction " + std::to_string(tail) + " at t = 0");

  const PowerLaw law = power_law(params);
  Trajectory traj;
  traj.grid = v0.grid_ptr();
  traj.params = params;
  traj.norms = xnorm_spec(params);
  traj.dt = config.dt;
  const XNormSpec& norms = traj.norms;
  const double r1 = 1.0 / norms.y1;
  const double r2 = 1.0 / norms.y2;

  const long long steps = config.step_count();
  StrangStepper stepper(v0.grid_ptr(), config.dt, law, config.disable_nonlinearity);

  LedgerRow row = measure(v0, 0.0, law, norms);
  traj.times.push_back(0.0);
  traj.fields.push_back(v0);
  traj.ledger.push_back(row);

  double acc1 = 0.0;
  double acc2 = 0.0;
  double prev1 = std::pow(row.l_p1, r1);
  double prev2 = std::pow(row.w_p2, r2);
  ComplexArray v = v0.values();
  const TorusGrid& grid = v0.grid();

  for (long long k = 1; k <= steps; ++k) {
    stepper.step(v);
    const double t = static_cast<double>(k) * config.dt;
    Field current(traj.grid, v);

    const bool finite = current.finite();
    const bool bounded = finite && (1.0 + v).abs().maxCoeff() <= config.divergence_threshold;
    if (!bounded) {
      current.mark_diverged();
      traj.status = RunStatus::diverged;
      traj.status_detail = finite ? "sup |u| exceeded divergence threshold" : "non-finite samples";
      traj.status_detail += " at t = " + std::to_string(t);
      if (finite) {
        traj.times.push_back(t);
        traj.fields.push_back(current);
        traj.ledger.push_back(measure(current, t, law, norms));
        traj.ledger.back().acc_p1 = acc1;
        traj.ledger.back().acc_p2 = acc2;
      }
      break;
    }

    const ComplexArray spectrum = grid.forward(v);
    const XIntegrands xi = x_integrands(current, spectrum, norms);
    const double cur1 = std::pow(xi.l_p1, r1);
    const double cur2 = std::pow(xi.w_p2, r2);
    acc1 += 0.5 * config.dt * (prev1 + cur1);
    acc2 += 0.5 * config.dt * (prev2 + cur2);
    prev1 = cur1;
    prev2 = cur2;

    const bool contaminated = config.boundary_guard && boundary_mass_fraction(current) > config.contamination_threshold;
    if (k % config.snapshot_every == 0 || k == steps || contaminated) {
      LedgerRow r = measure(current, t, law, norms);
      r.acc_p1 = acc1;
      r.acc_p2 = acc2;
      traj.times.push_back(t);
      traj.fields.push_back(std::move(current));
      traj.ledger.push_back(r);
    }
    if (contaminated) {
      traj.status = RunStatus::contaminated;
      traj.status_detail = "boundary mass fraction exceeded threshold at t = " + std::to_string(t);
      break;
    }
  }
  return traj;
}

double spacetime_norm(const Trajectory& traj, const PairPoint& pair, double s) {
  return spacetime_norm(traj.times, traj.fields, pair, s);
}

namespace {

double accumulator_at(const Trajectory& traj, double t, double LedgerRow::*member) {
  const auto& rows = traj.ledger;
  if (rows.empty()) throw std::invalid_argument("empty trajectory");
  if (t <= rows.front().t) return rows.front().*member;
  if (t >= rows.back().t) return rows.back().*member;
  const auto it = std::lower_bound(rows.begin(), rows.end(), t, [](const LedgerRow& r, double v) { return r.t < v; });
  if (it->t == t) return (*it).*member;
  const LedgerRow& hi = *it;
  const LedgerRow& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return (1.0 - w) * (lo.*member) + w * (hi.*member);
}

}  // namespace

double xnorm_window(const Trajectory& traj, double t_a, double t_b) {
  if (t_b <= t_a) return 0.0;
  const double a1 = accumulator_at(traj, t_b, &LedgerRow::acc_p1) - accumulator_at(traj, t_a, &LedgerRow::acc_p1);
  const double a2 = accumulator_at(traj, t_b, &LedgerRow::acc_p2) - accumulator_at(traj, t_a, &LedgerRow::acc_p2);
  return std::pow(std::max(a1, 0.0), traj.norms.y1) + std::pow(std::max(a2, 0.0), traj.norms.y2);
}

double xaccumulator_window(const Trajectory& traj, double t_a, double t_b) {
  if (t_b <= t_a) return 0.0;
  const double a1 = accumulator_at(traj, t_b, &LedgerRow::acc_p1) - accumulator_at(traj, t_a, &LedgerRow::acc_p1);
  const double a2 = accumulator_at(traj, t_b, &LedgerRow::acc_p2) - accumulator_at(traj, t_a, &LedgerRow::acc_p2);
  return std::max(a1, 0.0) + std::max(a2, 0.0);
}

int PicardStats::max_iterations() const {
  return iterations.empty() ? 0 : *std::max_element(iterations.begin(), iterations.end());
}

double PicardStats::contraction_ratio() const {
  if (ratios.empty() || ratios.front().empty()) return 0.0;
  return ratios.front().front();
}

}  // namespace ggp
