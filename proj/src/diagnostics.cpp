#include "ggp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ggp {

std::string_view name_of(Verdict v) {
  switch (v) {
    case Verdict::scattering_consistent: return "scattering_consistent";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::growth_detected: return "growth_detected";
  }
  return "?";
}

std::string_view name_of(BlowupStatus s) {
  switch (s) {
    case BlowupStatus::healthy: return "healthy";
    case BlowupStatus::underresolved: return "underresolved";
    case BlowupStatus::suspected_blowup: return "suspected_blowup";
  }
  return "?";
}

namespace {

std::size_t snapshot_index(const Trajectory& traj, double t) {
  const double tol = 1e-9 * std::max(1.0, traj.final_time());
  const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t - tol);
  if (it == traj.times.end() || std::abs(*it - t) > tol)
    throw std::invalid_argument("checkpoint t = " + std::to_string(t) + " is not a stored snapshot time");
  return static_cast<std::size_t>(it - traj.times.begin());
}

enum class SeriesShape { decaying, growing, other };

SeriesShape classify(const std::vector<double>& inc) {
  const bool monotone = std::adjacent_find(inc.begin(), inc.end(), std::less<double>()) == inc.end();
  if (monotone && inc.back() <= 0.1 * inc.front()) return SeriesShape::decaying;
  if (inc.back() > inc.front()) return SeriesShape::growing;
  return SeriesShape::other;
}

}  // namespace

ScatteringReport scattering_profile(const Trajectory& traj, std::span<const double> sigma_list, int checkpoints) {
  if (traj.status == RunStatus::contaminated)
    throw std::invalid_argument("contaminated trajectory: boundary wrap-around invalidates U(-t)");
  if (checkpoints < 4) throw std::invalid_argument("scattering_profile needs at least 4 dyadic checkpoints");
  const double k1 = to_double(traj.params.p) - 1.0;
  for (double s : sigma_list)
    if (!(s >= 0.0 && s < k1)) throw std::invalid_argument("sigma = " + std::to_string(s) + " must lie in [0, k1)");

  ScatteringReport report;
  report.sigmas.assign(sigma_list.begin(), sigma_list.end());
  if (traj.status == RunStatus::diverged) {
    report.verdict = Verdict::growth_detected;
    report.detail = "trajectory diverged: " + traj.status_detail;
    return report;
  }
  if (traj.status == RunStatus::no_contraction) {
    report.detail = "Picard iteration did not contract: " + traj.status_detail;
    return report;
  }

  const double horizon = traj.final_time();
  if (!(horizon > 0.0)) throw std::invalid_argument("trajectory has zero length");
  for (int k = 0; k < checkpoints; ++k) {
    const double t = horizon / std::ldexp(1.0, checkpoints - 1 - k);
    const std::size_t i = snapshot_index(traj, t);
    report.checkpoints.push_back(traj.times[i]);
    report.profiles.push_back(free_propagate(traj.fields[i], -traj.times[i]));
  }

  report.inc_sigma.resize(report.sigmas.size());
  for (std::size_t k = 0; k + 1 < report.profiles.size(); ++k) {
    const Field diff = report.profiles[k + 1] - report.profiles[k];
    const ComplexArray spectrum = diff.grid().forward(diff.values());
    report.inc_hs0.push_back(homogeneous_sobolev_norm(diff.grid(), spectrum, traj.norms.s0));
    report.inc_hs1.push_back(homogeneous_sobolev_norm(diff.grid(), spectrum, traj.norms.s1));
    for (std::size_t j = 0; j < report.sigmas.size(); ++j)
      report.inc_sigma[j].push_back(homogeneous_sobolev_norm(diff.grid(), spectrum, report.sigmas[j]));
  }
  for (double t : report.checkpoints) report.xnorm_tails.push_back(xnorm_tail(traj, t));
  report.xnorm_total = xnorm_window(traj, traj.times.front(), horizon);

  std::vector<const std::vector<double>*> series{&report.inc_hs0, &report.inc_hs1};
  for (const auto& s : report.inc_sigma) series.push_back(&s);
  bool all_decay = true;
  bool any_growth = false;
  for (const auto* s : series) {
    const SeriesShape shape = classify(*s);
    all_decay = all_decay && shape == SeriesShape::decaying;
    any_growth = any_growth || shape == SeriesShape::growing;
  }
  if (all_decay) {
    report.verdict = Verdict::scattering_consistent;
    report.detail = "increments non-increasing with final/first <= 0.1";
  } else if (any_growth) {
    report.verdict = Verdict::growth_detected;
    report.detail = "final increment exceeds the first";
  } else {
    report.verdict = Verdict::inconclusive;
    report.detail = "increments neither monotone-decaying to 10% nor growing";
  }
  return report;
}

double xnorm_tail(const Trajectory& traj, double t1) { return xnorm_window(traj, t1, traj.final_time()); }

BlowupReport blowup_monitor(const Trajectory& traj) {
  BlowupReport report;
  const double horizon = traj.final_time();
  for (const LedgerRow& row : traj.ledger)
    if (std::isfinite(row.spectral_tail)) report.max_spectral_tail = std::max(report.max_spectral_tail, row.spectral_tail);
  report.resolution_loss = report.max_spectral_tail > kResolutionLossTail;

  if (horizon > 0.0) {
    for (double a : {horizon / 8.0, horizon / 4.0, horizon / 2.0})
      report.window_mass.push_back(xaccumulator_window(traj, a, 2.0 * a));
    // Windows double in length, so linear accumulation doubles the mass.
    const auto& m = report.window_mass;
    report.superlinear_growth = m[0] > 0.0 && m[1] > 2.0 * m[0] && m[2] > 2.0 * m[1];
  }
  const bool diverged = traj.status == RunStatus::diverged;
  const bool growth = report.superlinear_growth || diverged;

  if (growth && report.resolution_loss) {
    report.status = BlowupStatus::suspected_blowup;
    report.detail = "X-accumulator growth with spectral tail above threshold";
  } else if (report.resolution_loss) {
    report.status = BlowupStatus::underresolved;
    report.detail = "spectral tail above threshold without X growth";
  } else if (diverged) {
    report.status = BlowupStatus::underresolved;
    report.detail = "solver diverged before the spectral tail was recorded: " + traj.status_detail;
  } else {
    report.status = BlowupStatus::healthy;
    report.detail = growth ? "superlinear X growth without resolution loss" : "no growth";
  }
  return report;
}

SmallnessCertificate small_data_certificate(const Field& v0, const ProblemParams& params) {
  if (v0.grid().dim() != params.n) throw std::invalid_argument("grid dimension differs from n");
  const ExponentSet e = derive_exponents(params);
  SmallnessCertificate cert;
  cert.lebesgue_term = lebesgue_norm(v0, to_double(e.q13));
  cert.weighted_term = weighted_l2_norm(v0, to_double(e.alpha));
  cert.hs2_term = homogeneous_sobolev_norm(v0, to_double(e.s2));
  cert.lebesgue_smallness = cert.lebesgue_term + cert.hs2_term;
  cert.weighted_smallness = cert.weighted_term + cert.hs2_term;
  return cert;
}

void attach_window(SmallnessCertificate& cert, const Trajectory& traj) {
  if (traj.times.empty()) throw std::invalid_argument("empty trajectory");
  cert.has_window = true;
  cert.window_xnorm = xnorm_window(traj, traj.times.front(), traj.final_time());
  cert.window_bound_satisfied = cert.window_xnorm <= 2.0 * cert.lebesgue_smallness;
}

}  // namespace ggp
