#pragma once

// Finite-horizon proxies for scattering, blow-up and small-data behaviour,
// plus empirical Strichartz quotients. Every routine is read-only on its
// trajectory.

#include "ggp/solver.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ggp {

enum class Verdict { scattering_consistent, inconclusive, growth_detected };
std::string_view name_of(Verdict v);

struct ScatteringReport {
  std::vector<double> checkpoints;  // dyadic t_k = T / 2^{K-1-k}
  std::vector<Field> profiles;      // w_k = U(-t_k) v(t_k)
  /// Increment k is ‖w_{k+1} - w_k‖ in the given space (size K - 1).
  std::vector<double> inc_hs0;
  std::vector<double> inc_hs1;
  std::vector<double> sigmas;
  std::vector<std::vector<double>> inc_sigma;
  /// ‖v‖_{X((t_k, T))} at each checkpoint.
  std::vector<double> xnorm_tails;
  double xnorm_total = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::string detail;
};

/// Default number of dyadic checkpoints.
inline constexpr int kDefaultCheckpoints = 5;

/// Checkpoints must coincide with stored snapshot times. Extra σ must satisfy
/// 0 <= σ < k1. Throws on contaminated trajectories, fewer than 4
/// checkpoints, or checkpoints that are not snapshot times. A diverged
/// trajectory yields growth_detected.
ScatteringReport scattering_profile(const Trajectory& traj, std::span<const double> sigma_list = {},
                                    int checkpoints = kDefaultCheckpoints);

/// ‖v‖_{X((t1, T))}; 0 when t1 >= T.
double xnorm_tail(const Trajectory& traj, double t1);

enum class BlowupStatus { healthy, underresolved, suspected_blowup };
std::string_view name_of(BlowupStatus s);

struct BlowupReport {
  BlowupStatus status = BlowupStatus::healthy;
  /// ∫ over [T/8,T/4], [T/4,T/2], [T/2,T] of the X integrands.
  std::vector<double> window_mass;
  bool superlinear_growth = false;
  double max_spectral_tail = 0.0;
  bool resolution_loss = false;
  std::string detail;
};

inline constexpr double kResolutionLossTail = 1e-3;

BlowupReport blowup_monitor(const Trajectory& traj);

struct SmallnessCertificate {
  double lebesgue_term = 0.0;  // ‖v0‖_{L^{n(p-2)/2}}
  double weighted_term = 0.0;  // ‖|x|^α v0‖_{L²}
  double hs2_term = 0.0;       // ‖v0‖_{Ḣ^{s2}}
  double lebesgue_smallness = 0.0;  // lebesgue_term + hs2_term
  double weighted_smallness = 0.0;  // weighted_term + hs2_term
  bool has_window = false;
  double window_xnorm = 0.0;
  /// window_xnorm <= 2 · lebesgue_smallness over the simulated window only.
  bool window_bound_satisfied = false;
};

SmallnessCertificate small_data_certificate(const Field& v0, const ProblemParams& params);
/// Adds the simulated window X-norm and the bound flag.
void attach_window(SmallnessCertificate& cert, const Trajectory& traj);

/// Member of the Gaussian test family exp(-|x - c e_0|²/(2w²) + i (κ/w) x_0).
struct GaussianSample {
  double width = 1.0;
  double center = 0.0;
  double frequency = 0.0;  // κ, in units of 1/width
};

/// Deterministic family with log-spread widths, centers and frequencies.
std::vector<GaussianSample> gaussian_family(int count, std::uint64_t seed = 1);

struct StrichartzRatios {
  double homogeneous = 0.0;    // sup ‖U(t)f‖_{L(P)} / ‖f‖_{L^q}
  double inhomogeneous = 0.0;  // sup ‖∫_0^t U(t-s)f(s)ds‖_{L(P)} / ‖f‖_{L(P̄)}
  std::vector<double> homogeneous_by_member;
  std::vector<double> inhomogeneous_by_member;
};

/// Empirical lower bounds for the homogeneous (P ∈ T̂, π(P) = 1/q) and
/// inhomogeneous (P ∈ T, P̄ ∈ T', π(P̄) - π(P) = 2/n) estimates. Throws
/// std::invalid_argument naming the first failed hypothesis.
StrichartzRatios strichartz_ratio(int n, const PairPoint& p, const PairPoint& pbar, const Rational& q,
                                  std::span<const GaussianSample> family);

/// Empty when all hypotheses hold, else the failed condition.
std::string strichartz_hypothesis_failure(int n, const PairPoint& p, const PairPoint& pbar, const Rational& q);

}  // namespace ggp
