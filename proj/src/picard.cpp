#include "ggp/solver.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <stdexcept>

namespace ggp {

GuideFlow GuideFlow::linear(Field v0, double t0) {
  GuideFlow flow{Kind::linear, std::move(v0), t0, {}, 0.0};
  return flow;
}

GuideFlow GuideFlow::with_error(Field v0, double t0, std::vector<Field> samples, double sample_dt) {
  if (samples.empty()) throw std::invalid_argument("error source needs at least one sample");
  if (!(sample_dt > 0)) throw std::invalid_argument("error sample spacing must be positive");
  GuideFlow flow{Kind::linear_plus_error, std::move(v0), t0, std::move(samples), sample_dt};
  return flow;
}

namespace {

// Index m with t0 + m·dt = t, or -1 when t is not on the grid.
long long grid_index(double t0, double dt, double t) {
  const double m = (t - t0) / dt;
  const double rounded = std::round(m);
  if (std::abs(m - rounded) > 1e-9 * std::max(1.0, std::abs(m))) return -1;
  return static_cast<long long>(rounded);
}

}  // namespace

Field duhamel_apply(std::span<const Field> source, double t0, double source_dt, double t) {
  if (source.empty()) throw std::invalid_argument("duhamel_apply needs source samples");
  if (!(source_dt > 0)) throw std::invalid_argument("source spacing must be positive");
  const long long m = grid_index(t0, source_dt, t);
  if (m < 0) throw std::invalid_argument("t is not a source sample time");
  if (m >= static_cast<long long>(source.size()))
    throw std::invalid_argument("insufficient source samples to reach t");

  const GridPtr& grid = source.front().grid_ptr();
  ComplexArray acc = ComplexArray::Zero(grid->size());
  for (long long k = 0; k <= m; ++k) {
    const double w = (k == 0 || k == m) ? 0.5 : 1.0;
    if (m == 0) break;
    const double s = t0 + static_cast<double>(k) * source_dt;
    acc += w * free_propagate_spectrum(*grid, grid->forward(source[k].values()), t - s);
  }
  acc *= Complex(0.0, -source_dt);
  return Field(grid, grid->inverse(acc));
}

Field evaluate_guide_flow(const GuideFlow& flow, double t) {
  Field linear = free_propagate(flow.v0, t - flow.t0);
  if (flow.kind == GuideFlow::Kind::linear) return linear;
  if (t < flow.t0) throw std::invalid_argument("guide flow with error is only defined for t >= t0");
  return linear + duhamel_apply(flow.error_samples, flow.t0, flow.error_dt, t);
}

namespace {

// V(t0 + k dt) for k = 0..steps as spectra.
std::vector<ComplexArray> guide_flow_spectra(const GuideFlow& flow, double dt, long long steps,
                                             const std::vector<ComplexArray>& symbols) {
  const TorusGrid& grid = flow.v0.grid();
  const ComplexArray base = grid.forward(flow.v0.values());
  std::vector<ComplexArray> out;
  out.reserve(static_cast<std::size_t>(steps + 1));
  if (flow.kind == GuideFlow::Kind::linear) {
    for (long long k = 0; k <= steps; ++k) out.push_back(base * symbols[k]);
    return out;
  }
  if (std::abs(flow.error_dt - dt) <= 1e-12 * dt) {
    // Interaction picture: V(τ_k) = U(τ_k)[v̂0 - i Σ_j w_j U(-τ_j) ê_j dt].
    if (static_cast<long long>(flow.error_samples.size()) < steps + 1)
      throw std::invalid_argument("error source not sampled over the whole interval");
    ComplexArray running = ComplexArray::Zero(grid.size());
    ComplexArray prev;
    for (long long k = 0; k <= steps; ++k) {
      ComplexArray g = grid.forward(flow.error_samples[k].values()) * symbols[k].conjugate();
      if (k > 0) running += 0.5 * dt * (prev + g);
      out.push_back((base + Complex(0.0, -1.0) * running) * symbols[k]);
      prev = std::move(g);
    }
    return out;
  }
  for (long long k = 0; k <= steps; ++k) {
    const double t = flow.t0 + static_cast<double>(k) * dt;
    out.push_back(grid.forward(evaluate_guide_flow(flow, t).values()));
  }
  return out;
}

double metric_p1(const std::vector<ComplexArray>& a, const std::vector<ComplexArray>& b, std::size_t lo,
                 std::size_t hi, const TorusGrid& grid, const XNormSpec& norms, double dt) {
  const double r1 = 1.0 / norms.y1;
  double acc = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    const double w = (k == lo || k == hi) ? 0.5 : 1.0;
    acc += w * std::pow(lebesgue_norm(grid, (a[k] - b[k]).abs(), norms.q1), r1);
  }
  return std::pow(acc * dt, norms.y1);
}

}  // namespace

Trajectory picard_solve(const GuideFlow& flow, double length, const SolverConfig& config,
                        const ProblemParams& params, const PicardBackground* background) {
  SolverConfig local = config;
  local.horizon = length;
  local.validate();
  if (!params.in_range) {
    if (!config.allow_out_of_range)
      throw std::invalid_argument("p = " + to_string(params.p) + " outside " + range_description(params.n));
    spdlog::warn("Picard iteration with p = {} outside {}", to_string(params.p), range_description(params.n));
  }
  const GridPtr grid_ptr = flow.v0.grid_ptr();
  const TorusGrid& grid = *grid_ptr;
  if (grid.dim() != params.n) throw std::invalid_argument("grid dimension differs from n");

  const double dt = config.dt;
  const long long steps = local.step_count();
  const std::size_t count = static_cast<std::size_t>(steps + 1);
  const PowerLaw law = config.disable_nonlinearity ? PowerLaw{params.p_value(), 0.0} : power_law(params);
  const XNormSpec norms = xnorm_spec(params);

  std::vector<ComplexArray> symbols;  // U(τ_k), τ_k = k dt
  symbols.reserve(count);
  for (std::size_t k = 0; k < count; ++k) symbols.push_back(propagator_symbol(grid, static_cast<double>(k) * dt));

  const std::vector<ComplexArray> guide_hat = guide_flow_spectra(flow, dt, steps, symbols);
  std::vector<ComplexArray> guide(count);
  for (std::size_t k = 0; k < count; ++k) guide[k] = grid.inverse(guide_hat[k]);

  std::vector<ComplexArray> bg(count, ComplexArray::Zero(grid.size()));
  std::vector<ComplexArray> bg_force(count, ComplexArray::Zero(grid.size()));
  std::vector<ComplexArray> forcing_w(count);  // W = V - Ṽ
  if (background) {
    if (background->guide.size() != count || background->solution.size() != count)
      throw std::invalid_argument("background must be sampled on the Picard grid");
    for (std::size_t k = 0; k < count; ++k) {
      bg[k] = background->solution[k].values();
      bg_force[k] = apply_F(bg[k], law);
      forcing_w[k] = guide[k] - background->guide[k].values();
    }
  } else {
    forcing_w = guide;
  }

  // Subdivide so that the X-norm of ṽ (or of V when ṽ ≡ 0) stays below m.
  std::vector<double> cum1(count, 0.0), cum2(count, 0.0);
  {
    const std::vector<ComplexArray>& ref = background ? bg : guide;
    const double r1 = 1.0 / norms.y1, r2 = 1.0 / norms.y2;
    double prev1 = 0.0, prev2 = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const Field f(grid_ptr, ref[k]);
      ComplexArray d = grid.forward(ref[k]) * grid.wavenumber_modulus().pow(norms.s2);
      d(0) = 0.0;
      const double c1 = std::pow(lebesgue_norm(f, norms.q1), r1);
      const double c2 = std::pow(lebesgue_norm(grid, grid.inverse(d).abs(), norms.q2), r2);
      if (k > 0) {
        cum1[k] = cum1[k - 1] + 0.5 * dt * (prev1 + c1);
        cum2[k] = cum2[k - 1] + 0.5 * dt * (prev2 + c2);
      }
      prev1 = c1;
      prev2 = c2;
    }
  }
  auto window_x = [&](std::size_t a, std::size_t b) {
    return std::pow(cum1[b] - cum1[a], norms.y1) + std::pow(cum2[b] - cum2[a], norms.y2);
  };
  std::vector<std::pair<std::size_t, std::size_t>> pieces;
  for (std::size_t a = 0; a + 1 < count;) {
    std::size_t b = a + 1;
    while (b + 1 < count && window_x(a, b + 1) <= config.subdivision_m) ++b;
    pieces.emplace_back(a, b);
    a = b;
  }

  Trajectory traj;
  traj.grid = grid_ptr;
  traj.params = params;
  traj.norms = norms;
  traj.dt = dt;
  PicardStats stats;

  std::vector<ComplexArray> w = forcing_w;  // current iterate
  std::vector<ComplexArray> next(count);
  next[0] = w[0];
  std::vector<ComplexArray> interaction(count);  // U(-τ_k) FFT(F(w+ṽ) - F(ṽ))
  auto interaction_term = [&](std::size_t k) {
    const ComplexArray diff = apply_F(w[k] + bg[k], law) - bg_force[k];
    return ComplexArray(grid.forward(diff) * symbols[k].conjugate());
  };
  ComplexArray history = ComplexArray::Zero(grid.size());  // ∫_{t0}^{t_a} trapezoid sum
  interaction[0] = interaction_term(0);
  std::size_t solved_up_to = 0;

  for (const auto& [a, b] : pieces) {
    stats.subinterval_starts.push_back(flow.t0 + static_cast<double>(a) * dt);
    std::vector<double> ratios;
    double d_prev = -1.0;
    int rising = 0;
    int iterations = 0;
    bool converged = false;
    while (iterations < config.picard_max_iter) {
      ++iterations;
      ComplexArray running = history;
      ComplexArray prev = interaction[a];
      for (std::size_t k = a + 1; k <= b; ++k) {
        ComplexArray g = interaction_term(k);
        running += 0.5 * dt * (prev + g);
        next[k] = forcing_w[k] + grid.inverse(Complex(0.0, -1.0) * running * symbols[k]);
        prev = std::move(g);
      }
      next[a] = w[a];
      const double d = metric_p1(next, w, a, b, grid, norms, dt);
      for (std::size_t k = a + 1; k <= b; ++k) std::swap(w[k], next[k]);
      if (!std::isfinite(d)) {
        traj.status = RunStatus::diverged;
        traj.status_detail = "non-finite Picard iterate";
        break;
      }
      if (d_prev > 0.0) {
        const double ratio = d / d_prev;
        ratios.push_back(ratio);
        rising = ratio >= 1.0 ? rising + 1 : 0;
      }
      if (d <= config.picard_tol) {
        converged = true;
        break;
      }
      if (rising >= 3) break;
      d_prev = d;
    }
    stats.iterations.push_back(iterations);
    stats.ratios.push_back(ratios);
    if (traj.status == RunStatus::diverged) break;
    if (!converged) {
      traj.status = RunStatus::no_contraction;
      traj.status_detail = (rising >= 3 ? "discrepancy grew for 3 consecutive iterates" : "iteration budget exhausted") +
                           std::string(" on subinterval starting at t = ") +
                           std::to_string(flow.t0 + static_cast<double>(a) * dt);
      break;
    }
    // History for the next subinterval, from the converged iterate.
    for (std::size_t k = a + 1; k <= b; ++k) {
      interaction[k] = interaction_term(k);
      history += 0.5 * dt * (interaction[k - 1] + interaction[k]);
    }
    solved_up_to = b;
  }

  const double r1 = 1.0 / norms.y1, r2 = 1.0 / norms.y2;
  const PowerLaw measure_law = power_law(params);
  double acc1 = 0.0, acc2 = 0.0, prev1 = 0.0, prev2 = 0.0;
  for (std::size_t k = 0; k <= solved_up_to; ++k) {
    const double t = flow.t0 + static_cast<double>(k) * dt;
    Field v(grid_ptr, w[k] + bg[k]);
    LedgerRow row = measure(v, t, measure_law, norms);
    const double c1 = std::pow(row.l_p1, r1), c2 = std::pow(row.w_p2, r2);
    if (k > 0) {
      acc1 += 0.5 * dt * (prev1 + c1);
      acc2 += 0.5 * dt * (prev2 + c2);
    }
    prev1 = c1;
    prev2 = c2;
    row.acc_p1 = acc1;
    row.acc_p2 = acc2;
    traj.times.push_back(t);
    traj.fields.push_back(std::move(v));
    traj.ledger.push_back(row);
  }
  traj.picard = std::move(stats);
  return traj;
}

}  // namespace ggp
