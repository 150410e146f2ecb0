#pragma once

// Time integration of i v_t + Δv = F(v), u = 1 + v.
//
// Production path: Strang splitting with the nonlinear substep taken as an
// exact phase rotation in u (F(u-1) = g(|u|²) u with g real). Verification
// path: Picard iteration on the Duhamel form with a guide flow.

#include "ggp/exponents.hpp"
#include "ggp/nonlinearity.hpp"
#include "ggp/spectral.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ggp {

enum class Method { strang, picard };
enum class RunStatus { ok, diverged, contaminated, no_contraction };

std::string_view name_of(Method m);
std::string_view name_of(RunStatus s);
Method parse_method(std::string_view name);

struct SolverConfig {
  double dt = 1e-3;
  double horizon = 20.0;
  Method method = Method::strang;
  int picard_max_iter = 50;
  double picard_tol = 1e-10;
  /// Target X-norm per Picard subinterval.
  double subdivision_m = 0.5;
  /// Store a field and a full ledger row every this many steps.
  int snapshot_every = 1;
  bool allow_out_of_range = false;
  /// Flag runs whose fluctuation mass reaches the outer shell.
  bool boundary_guard = true;
  double contamination_threshold = 1e-6;
  /// Initial-data spectral tail above this is rejected as under-resolved.
  double coarse_grid_threshold = 1e-6;
  /// sup |u| beyond this counts as divergence.
  double divergence_threshold = 1e6;
  /// Test hook: evolve with F ≡ 0.
  bool disable_nonlinearity = false;

  void validate() const;
  long long step_count() const;
};

/// Exponents of the solution space X(I) = L(P1; I) ∩ Ẇ^{s2}(P2; I) as
/// floating-point views.
struct XNormSpec {
  PairPoint p1;
  PairPoint p2;
  double q1 = 0.0;  // spatial exponent of P1
  double y1 = 0.0;  // reciprocal time exponent of P1
  double q2 = 0.0;
  double y2 = 0.0;
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
};

XNormSpec xnorm_spec(const ProblemParams& params);

struct LedgerRow {
  double t = 0.0;
  double mass = 0.0;  // ‖1 + v‖_{L²(torus)}
  double energy = 0.0;
  double hs0 = 0.0;
  double hs1 = 0.0;
  double hs2 = 0.0;
  double l_p1 = 0.0;  // ‖v(t)‖_{L^{q1}}
  double w_p2 = 0.0;  // ‖|D|^{s2} v(t)‖_{L^{q2}}
  double acc_p1 = 0.0;  // ∫_0^t l_p1^{1/y1} on the solver grid
  double acc_p2 = 0.0;  // ∫_0^t w_p2^{1/y2}
  double boundary_fraction = 0.0;
  double spectral_tail = 0.0;
  Complex mean{0.0, 0.0};
};

struct PicardStats {
  std::vector<int> iterations;  // per subinterval
  std::vector<std::vector<double>> ratios;  // successive discrepancy ratios per subinterval
  std::vector<double> subinterval_starts;

  int max_iterations() const;
  /// d2/d1 on the first subinterval (0 when fewer than two discrepancies).
  double contraction_ratio() const;
};

struct Trajectory {
  GridPtr grid;
  ProblemParams params;
  XNormSpec norms;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Field> fields;
  std::vector<LedgerRow> ledger;
  RunStatus status = RunStatus::ok;
  std::string status_detail;
  std::optional<PicardStats> picard;

  double final_time() const { return times.empty() ? 0.0 : times.back(); }
};

/// Full ledger row for a single state (accumulators left at zero).
LedgerRow measure(const Field& v, double t, const PowerLaw& law, const XNormSpec& norms);

/// One Strang step: half rotation u <- exp(-i dt/2 g(|u|²)) u, U(dt) on v,
/// half rotation.
Field strang_step(const Field& v, double dt, const PowerLaw& law);
Field strang_step(const Field& v, double dt, const ProblemParams& params);

/// Throws std::invalid_argument when params are out of range (unless
/// allowed), the configuration is invalid, or the grid under-resolves v0.
Trajectory run_split_step(const Field& v0, const SolverConfig& config, const ProblemParams& params);

/// ‖v‖_{Ẇ^s(P)} over the stored fields of a trajectory.
double spacetime_norm(const Trajectory& traj, const PairPoint& pair, double s);

/// X-norm over [t_a, t_b] from the ledger accumulators (interpolated between
/// rows); sum of the L(P1) and Ẇ^{s2}(P2) components.
double xnorm_window(const Trajectory& traj, double t_a, double t_b);
/// Raw ∫_{t_a}^{t_b} (l_p1^{1/y1} + w_p2^{1/y2}) dt from the accumulators.
double xaccumulator_window(const Trajectory& traj, double t_a, double t_b);

// ---------------------------------------------------------------------------
// Guide flows and the Duhamel map

/// V(t) = U(t - t0) v0, optionally minus i ∫_{t0}^t U(t - s) e(s) ds with
/// e sampled at t0 + k·error_dt.
struct GuideFlow {
  enum class Kind { linear, linear_plus_error };

  Kind kind = Kind::linear;
  Field v0;
  double t0 = 0.0;
  std::vector<Field> error_samples;
  double error_dt = 0.0;

  static GuideFlow linear(Field v0, double t0 = 0.0);
  static GuideFlow with_error(Field v0, double t0, std::vector<Field> samples, double sample_dt);
};

Field evaluate_guide_flow(const GuideFlow& flow, double t);

/// -i Σ_k w_k U(t - s_k) source_k Δs (trapezoid) with s_k = t0 + k Δs,
/// using the samples up to s_k = t.
Field duhamel_apply(std::span<const Field> source, double t0, double source_dt, double t);

/// Background solution ṽ of the guide flow Ṽ, sampled on the Picard grid,
/// for the stability form Φ(w) = W - i∫U(t-s)(F(w + ṽ) - F(ṽ)) ds.
struct PicardBackground {
  std::vector<Field> guide;     // Ṽ(t_k)
  std::vector<Field> solution;  // ṽ(t_k)
};

/// Picard iteration v^{m+1} = V - i ∫ U(t-s) F(v^m(s)) ds on [t0, t0 + length]
/// with the grid dt of `config`; subintervals are chained and the Duhamel
/// history of earlier subintervals is reused.
Trajectory picard_solve(const GuideFlow& flow, double length, const SolverConfig& config,
                        const ProblemParams& params, const PicardBackground* background = nullptr);

// ---------------------------------------------------------------------------
// Checkpoint container (little-endian):
//   magic "GGPCKPT1" | u32 version | u32 n | u32 N | f64 L | i32 mu |
//   u32 len | p as rational text | u64 record count |
//   records: f64 t, then N^n pairs (f64 re, f64 im)

struct Checkpoint {
  int n = 1;
  int samples = 0;
  double length = 0.0;
  int mu = 1;
  Rational p;
  std::vector<double> times;
  std::vector<ComplexArray> fields;
};

void write_checkpoint(const std::filesystem::path& path, const Trajectory& traj);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace ggp
