#include "ggp/commands.hpp"

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace ggp {

using nlohmann::json;

namespace {

// Shortest text that round-trips.
std::string num(double v) { return fmt::format("{}", v); }

json pair_json(const PairPoint& pt, int n) {
  return {{"x", to_string(pt.x)}, {"y", to_string(pt.y)}, {"pi", to_string(scaling_index(pt, n))}};
}

std::string pair_text(const PairPoint& pt) { return "(" + to_string(pt.x) + ", " + to_string(pt.y) + ")"; }

}  // namespace

int cmd_exponents(const ExponentsArgs& args, std::ostream& out, std::ostream& err) {
  ProblemParams params;
  try {
    if (args.n != 1 && args.n != 2) throw std::invalid_argument("n must be 1 or 2");
    params = make_params(args.n, parse_rational(args.p), args.mu);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (!params.in_range && !args.allow_out_of_range) {
    err << "error: p outside " << range_description(params.n) << "\n";
    return kExitFailed;
  }
  if (!params.in_range) spdlog::warn("p = {} outside {}", to_string(params.p), range_description(params.n));

  const ExponentSet e = derive_exponents(params);
  const PairSet pairs = derive_pairs(params);
  const IdentityReport identities = verify_pair_identities(pairs, e, params.n);
  const bool ok = identities.all_hard_pass();

  if (args.json) {
    json j;
    j["n"] = params.n;
    j["p"] = to_string(params.p);
    j["mu"] = params.mu;
    j["in_range"] = params.in_range;
    j["range"] = range_description(params.n);
    j["k1"] = to_string(e.k1);
    j["k2"] = to_string(e.k2);
    j["km"] = to_string(e.km);
    j["kSt"] = {{"exact", e.kst.str()}, {"value", e.kst.value()}};
    j["s0"] = to_string(e.s0);
    j["s1"] = to_string(e.s1);
    j["s2"] = to_string(e.s2);
    j["alpha"] = to_string(e.alpha);
    j["q13"] = to_string(e.q13);
    j["pairs"] = {{"P1", pair_json(pairs.p1, params.n)},       {"P1bar", pair_json(pairs.p1bar, params.n)},
                  {"P2", pair_json(pairs.p2, params.n)},       {"P2bar", pair_json(pairs.p2bar, params.n)},
                  {"P2p", pair_json(pairs.p2p, params.n)},     {"P2pbar", pair_json(pairs.p2pbar, params.n)}};
    json checks = json::array();
    for (const IdentityCheck& c : identities.checks)
      checks.push_back({{"name", c.name},
                        {"kind", c.hard ? "hard" : "diagnostic"},
                        {"residual", to_string(c.residual)},
                        {"status", c.passed() ? "pass" : (c.hard ? "fail" : "mismatch")}});
    j["identities"] = checks;
    j["all_identities_pass"] = ok;
    out << j.dump(2) << "\n";
  } else {
    out << "n = " << params.n << ", p = " << to_string(params.p) << ", mu = " << params.mu
        << (params.in_range ? "" : "  [outside " + range_description(params.n) + "]") << "\n";
    out << "k1 = " << to_string(e.k1) << "  k2 = " << to_string(e.k2) << "  km = " << to_string(e.km)
        << "  kSt = " << e.kst.str() << " ≈ " << num(e.kst.value()) << "\n";
    out << "s0 = " << to_string(e.s0) << "  s1 = " << to_string(e.s1) << "  s2 = " << to_string(e.s2)
        << "  alpha = " << to_string(e.alpha) << "  q13 = " << to_string(e.q13) << "\n";
    out << "P1 = " << pair_text(pairs.p1) << "  P1bar = " << pair_text(pairs.p1bar) << "\n";
    out << "P2 = " << pair_text(pairs.p2) << "  P2bar = " << pair_text(pairs.p2bar) << "\n";
    out << "P2' = " << pair_text(pairs.p2p) << "  P2'bar = " << pair_text(pairs.p2pbar) << "\n";
    for (const IdentityCheck& c : identities.checks)
      out << (c.passed() ? "  pass  " : (c.hard ? "  FAIL  " : "  diff  ")) << c.name
          << (c.passed() ? "" : "  residual " + to_string(c.residual)) << "\n";
  }
  return ok ? kExitOk : kExitFailed;
}

RunResult execute_run(const RunConfig& config) {
  const ProblemParams params = config.params();
  const GridPtr grid = config.grid();
  const Field v0 = initial_field(config, grid);
  SolverConfig solver = config.solver;
  if (config.init.type == InitType::plane_wave_perturbation && solver.boundary_guard) {
    spdlog::warn("plane-wave perturbation does not decay; boundary guard disabled for this run");
    solver.boundary_guard = false;
  }

  RunResult result;
  if (solver.method == Method::strang) {
    result.trajectory = run_split_step(v0, solver, params);
  } else {
    if (spectral_tail_fraction(v0) > solver.coarse_grid_threshold)
      throw std::invalid_argument("grid too coarse for the initial data");
    result.trajectory = picard_solve(GuideFlow::linear(v0), solver.horizon, solver, params);
  }
  const Trajectory& traj = result.trajectory;

  const LedgerRow& first = traj.ledger.front();
  for (const LedgerRow& row : traj.ledger) {
    result.mass_drift = std::max(result.mass_drift, std::abs(row.mass - first.mass) / first.mass);
    const double scale = first.energy != 0.0 ? std::abs(first.energy) : 1.0;
    result.energy_drift = std::max(result.energy_drift, std::abs(row.energy - first.energy) / scale);
  }

  try {
    result.scattering = scattering_profile(traj, config.sigma_list, config.checkpoints);
  } catch (const std::invalid_argument& e) {
    result.scattering_error = e.what();
  }
  result.blowup = blowup_monitor(traj);
  result.certificate = small_data_certificate(v0, params);
  attach_window(result.certificate, traj);
  return result;
}

std::string ledger_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "t,mass,energy,hs0,hs1,hs2,l_p1,w_p2,acc_p1,acc_p2,boundary_fraction,spectral_tail,mean_re,mean_im\n";
  for (const LedgerRow& r : traj.ledger) {
    os << num(r.t) << ',' << num(r.mass) << ',' << num(r.energy) << ',' << num(r.hs0) << ',' << num(r.hs1) << ','
       << num(r.hs2) << ',' << num(r.l_p1) << ',' << num(r.w_p2) << ',' << num(r.acc_p1) << ',' << num(r.acc_p2)
       << ',' << num(r.boundary_fraction) << ',' << num(r.spectral_tail) << ',' << num(r.mean.real()) << ','
       << num(r.mean.imag()) << '\n';
  }
  return os.str();
}

std::string increments_csv(const RunResult& result) {
  std::ostringstream os;
  os << "t_k,inc_Hs0,inc_Hs1,xnorm_tail\n";
  if (!result.scattering) return os.str();
  const ScatteringReport& s = *result.scattering;
  for (std::size_t k = 1; k < s.checkpoints.size(); ++k)
    os << num(s.checkpoints[k]) << ',' << num(s.inc_hs0[k - 1]) << ',' << num(s.inc_hs1[k - 1]) << ','
       << num(s.xnorm_tails[k]) << '\n';
  return os.str();
}

namespace {

json scattering_json(const RunResult& r) {
  if (!r.scattering) return {{"verdict", nullptr}, {"refused", r.scattering_error}};
  const ScatteringReport& s = *r.scattering;
  json sig = json::array();
  for (std::size_t j = 0; j < s.sigmas.size(); ++j) sig.push_back({{"sigma", s.sigmas[j]}, {"increments", s.inc_sigma[j]}});
  return {{"verdict", std::string(name_of(s.verdict))},
          {"detail", s.detail},
          {"checkpoints", s.checkpoints},
          {"inc_Hs0", s.inc_hs0},
          {"inc_Hs1", s.inc_hs1},
          {"inc_sigma", sig},
          {"xnorm_tails", s.xnorm_tails},
          {"xnorm_total", s.xnorm_total}};
}

json certificate_json(const SmallnessCertificate& c) {
  return {{"lebesgue_term", c.lebesgue_term},
          {"weighted_term", c.weighted_term},
          {"hs2_term", c.hs2_term},
          {"lebesgue_smallness", c.lebesgue_smallness},
          {"weighted_smallness", c.weighted_smallness},
          {"window_xnorm", c.window_xnorm},
          {"window_bound_satisfied", c.window_bound_satisfied}};
}

json blowup_json(const BlowupReport& b) {
  return {{"status", std::string(name_of(b.status))},
          {"detail", b.detail},
          {"window_mass", b.window_mass},
          {"superlinear_growth", b.superlinear_growth},
          {"max_spectral_tail", b.max_spectral_tail},
          {"resolution_loss", b.resolution_loss}};
}

}  // namespace

json report_json(const RunConfig& config, const RunResult& r) {
  const Trajectory& t = r.trajectory;
  const ExponentSet e = derive_exponents(t.params);
  json j;
  j["config"] = to_json(config);
  j["exponents"] = {{"s0", to_string(e.s0)}, {"s1", to_string(e.s1)}, {"s2", to_string(e.s2)},
                    {"alpha", to_string(e.alpha)}, {"q13", to_string(e.q13)}, {"in_range", t.params.in_range}};
  j["status"] = std::string(name_of(t.status));
  j["status_detail"] = t.status_detail;
  j["final_time"] = t.final_time();
  j["snapshots"] = t.times.size();
  j["mass_drift"] = r.mass_drift;
  j["energy_drift"] = r.energy_drift;
  j["xnorm_window"] = r.certificate.window_xnorm;
  j["scattering"] = scattering_json(r);
  j["verdict"] = r.scattering ? json(std::string(name_of(r.scattering->verdict))) : json(nullptr);
  j["blowup"] = blowup_json(r.blowup);
  j["certificate"] = certificate_json(r.certificate);
  if (t.picard) {
    j["picard"] = {{"iterations", t.picard->iterations},
                   {"subinterval_starts", t.picard->subinterval_starts},
                   {"contraction_ratio", t.picard->contraction_ratio()}};
  }
  return j;
}

json probe_json(const RunConfig& config, const RunResult& r) {
  json j;
  j["params"] = to_json(config)["params"];
  j["certificate"] = certificate_json(r.certificate);
  j["verdict"] = r.scattering ? json(std::string(name_of(r.scattering->verdict))) : json(nullptr);
  if (!r.scattering) j["refused"] = r.scattering_error;
  j["status"] = std::string(name_of(r.trajectory.status));
  j["blowup"] = std::string(name_of(r.blowup.status));
  return j;
}

namespace {

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, std::ostream& err) {
  RunConfig config;
  try {
    config = load_run_config(config_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  RunResult result;
  try {
    result = execute_run(config);
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return kExitRuntime;
  }
  try {
    std::filesystem::create_directories(out_dir);
    write_atomically(out_dir / "ledger.csv", ledger_csv(result.trajectory));
    write_atomically(out_dir / "increments.csv", increments_csv(result));
    if (config.write_checkpoint) write_checkpoint(out_dir / "checkpoint.bin", result.trajectory);
    write_atomically(out_dir / "report.json", report_json(config, result).dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "output failed: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_probe(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = load_run_config(config_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    out << probe_json(config, execute_run(config)).dump(2) << "\n";
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

std::string sweep_csv_header() {
  return "index,n,p,mu,amplitude,status,verdict,blowup,lebesgue_smallness,weighted_smallness,window_xnorm,"
         "window_bound_satisfied,energy_drift,mass_drift\n";
}

std::string sweep_csv_row(std::size_t index, const RunConfig& c, const RunResult& r) {
  std::ostringstream os;
  os << index << ',' << c.n << ',' << to_string(c.p) << ',' << c.mu << ',' << num(c.init.amplitude) << ','
     << name_of(r.trajectory.status) << ',' << (r.scattering ? std::string(name_of(r.scattering->verdict)) : "refused")
     << ',' << name_of(r.blowup.status) << ',' << num(r.certificate.lebesgue_smallness) << ','
     << num(r.certificate.weighted_smallness) << ',' << num(r.certificate.window_xnorm) << ','
     << (r.certificate.window_bound_satisfied ? "true" : "false") << ',' << num(r.energy_drift) << ','
     << num(r.mass_drift) << '\n';
  return os.str();
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

int cmd_sweep(const std::filesystem::path& config_path, const std::filesystem::path& out_csv, std::ostream& err) {
  std::vector<RunConfig> runs;
  int width = 1;
  try {
    const SweepConfig sweep = load_sweep_config(config_path);
    runs = sweep.expand();
    width = sweep.parallelism;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (const char* env = std::getenv("GGP_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) {
      err << "config error: GGP_THREADS must be a positive integer\n";
      return kExitConfig;
    }
    if (cap < width) spdlog::info("sweep parallelism capped at {} by GGP_THREADS", cap);
    width = std::min<int>(width, static_cast<int>(cap));
  }
  width = std::max(1, std::min<int>(width, static_cast<int>(runs.size())));

  std::vector<std::string> rows(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        rows[i] = sweep_csv_row(i, runs[i], execute_run(runs[i]));
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << i << ',' << runs[i].n << ',' << to_string(runs[i].p) << ',' << runs[i].mu << ','
           << num(runs[i].init.amplitude) << ',' << csv_quote(std::string("error: ") + e.what())
           << ",,,,,,,,\n";
        rows[i] = os.str();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < width; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::string content = sweep_csv_header();
  for (const auto& r : rows) content += r;
  try {
    if (out_csv.has_parent_path()) std::filesystem::create_directories(out_csv.parent_path());
    write_atomically(out_csv, content);
  } catch (const std::exception& e) {
    err << "output failed: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace ggp
