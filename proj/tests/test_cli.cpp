#include "ggp/commands.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace ggp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("ggp_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

json small_run() {
  return json::parse(R"({
    "params": {"n": 1, "p": "5", "mu": 1},
    "grid": {"L": "20pi", "N": 256},
    "init": {"type": "gaussian", "amplitude": 0.05, "width": 2.0},
    "solver": {"method": "strang", "dt": 0.0078125, "T": 1, "snapshot_every": 4},
    "seed": 3
  })");
}

fs::path write_json(const fs::path& dir, const std::string& name, const json& doc) {
  const fs::path p = dir / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("exponents subcommand") {
  std::ostringstream out, err;
  ExponentsArgs a;
  a.json = true;
  CHECK(cmd_exponents(a, out, err) == kExitOk);
  const json j = json::parse(out.str());
  CHECK(j["s2"] == "1/4");
  CHECK(j["pairs"]["P1"]["x"] == "1/5");
  CHECK(j["all_identities_pass"] == true);

  std::ostringstream out2, err2;
  a = ExponentsArgs{};
  a.n = 2;
  CHECK(cmd_exponents(a, out2, err2) == kExitFailed);
  CHECK(err2.str().find("(2+√2, 4)") != std::string::npos);
  a.allow_out_of_range = true;
  std::ostringstream out3, err3;
  CHECK(cmd_exponents(a, out3, err3) == kExitOk);
  a.p = "nonsense";
  CHECK(cmd_exponents(a, out3, err3) == kExitConfig);
}

TEST_CASE("run config parsing rejects bad documents") {
  CHECK_NOTHROW(parse_run_config(small_run()));
  const RunConfig c = parse_run_config(small_run());
  CHECK(c.length == doctest::Approx(20.0 * 3.141592653589793));
  CHECK(c.p == Rational(5));

  auto broken = [](auto edit) {
    json doc = small_run();
    edit(doc);
    return doc;
  };
  CHECK_THROWS_AS(parse_run_config(broken([](json& d) { d["solver"]["dt"] = -1.0; })), ConfigError);
  CHECK_THROWS_AS(parse_run_config(broken([](json& d) { d["solver"]["T"] = 0.3; })), ConfigError);
  CHECK_THROWS_AS(parse_run_config(broken([](json& d) { d["params"]["p"] = "7"; })), ConfigError);
  CHECK_NOTHROW(parse_run_config(broken([](json& d) {
    d["params"]["p"] = "7";
    d["solver"]["allow_out_of_range"] = true;
  })));
  CHECK_THROWS_AS(parse_run_config(broken([](json& d) { d["params"]["n"] = 3; })), ConfigError);
  CHECK_THROWS_AS(parse_run_config(broken([](json& d) { d["grid"]["N"] = 100; })), ConfigError);
  CHECK_THROWS_AS(parse_run_config(broken([](json& d) { d["init"]["type"] = "soliton"; })), ConfigError);
  CHECK_THROWS_AS(parse_run_config(broken([](json& d) { d["solver"]["typo"] = 1; })), ConfigError);
  CHECK_THROWS_AS(parse_run_config(broken([](json& d) { d["diagnostics"]["sigma_list"] = {4.5}; })), ConfigError);
  CHECK_THROWS_AS(parse_run_config(broken([](json& d) {
                    d["init"]["type"] = "plane_wave_perturbation";
                    d["init"]["frequency"] = 0.123;
                  })),
                  ConfigError);
}

TEST_CASE("simulate writes nothing on a configuration error") {
  TempDir dir("bad_config");
  const fs::path cfg = dir.path / "bad.json";
  std::ofstream(cfg) << "{ \"params\": ";
  std::ostringstream err;
  CHECK(cmd_simulate(cfg, dir.path / "out", err) == kExitConfig);
  CHECK_FALSE(fs::exists(dir.path / "out"));
  CHECK(err.str().find("config error") != std::string::npos);

  json doc = small_run();
  doc["grid"]["N"] = 30;
  std::ostringstream err2;
  CHECK(cmd_simulate(write_json(dir.path, "n30.json", doc), dir.path / "out", err2) == kExitConfig);
  CHECK_FALSE(fs::exists(dir.path / "out"));
  std::ostringstream err3;
  CHECK(cmd_simulate(dir.path / "missing.json", dir.path / "out", err3) == kExitConfig);
}

TEST_CASE("simulate writes ledger, increments and report") {
  TempDir dir("simulate");
  json doc = small_run();
  doc["output"] = {{"checkpoint", true}};
  std::ostringstream err;
  REQUIRE(cmd_simulate(write_json(dir.path, "run.json", doc), dir.path / "out", err) == kExitOk);
  const std::string ledger = slurp(dir.path / "out" / "ledger.csv");
  CHECK(ledger.rfind("t,mass,energy,hs0,hs1,hs2,l_p1,w_p2,acc_p1,acc_p2,boundary_fraction,spectral_tail,mean_re,mean_im\n", 0) == 0);
  CHECK(count_lines(ledger) == 1 + 33);
  const std::string inc = slurp(dir.path / "out" / "increments.csv");
  CHECK(count_lines(inc) == 1 + 4);
  const json report = json::parse(slurp(dir.path / "out" / "report.json"));
  CHECK(report["status"] == "ok");
  CHECK(report["mass_drift"].get<double>() <= 1e-10);
  CHECK(report["config"]["params"]["p"] == "5");
  CHECK(fs::exists(dir.path / "out" / "checkpoint.bin"));
  CHECK(read_checkpoint(dir.path / "out" / "checkpoint.bin").times.size() == 33);
}

TEST_CASE("theta-constant initial data stay put with zero energy") {
  json doc = small_run();
  doc["init"] = {{"type", "theta_constant"}, {"phase", 0.9}};
  const RunConfig c = parse_run_config(doc);
  const RunResult r = execute_run(c);
  CHECK(r.trajectory.status == RunStatus::ok);
  const Field& first = r.trajectory.fields.front();
  const Field& last = r.trajectory.fields.back();
  CHECK((first.values() - last.values()).abs().maxCoeff() <= 1e-13);
  for (const LedgerRow& row : r.trajectory.ledger) CHECK(std::abs(row.energy) <= 1e-20);
}

TEST_CASE("probe on zero data") {
  TempDir dir("probe");
  json doc = small_run();
  doc["init"]["amplitude"] = 0.0;
  std::ostringstream out, err;
  REQUIRE(cmd_probe(write_json(dir.path, "zero.json", doc), out, err) == kExitOk);
  const json j = json::parse(out.str());
  CHECK(j["certificate"]["lebesgue_smallness"] == 0.0);
  CHECK(j["verdict"] == "scattering_consistent");
  CHECK(j["blowup"] == "healthy");
}

TEST_CASE("sweep rows come out in axis order and do not depend on the thread count") {
  TempDir dir("sweep");
  const json sweep = {{"template", small_run()},
                      {"axes", {{"p", {"5", "11/2"}}, {"mu", {1, -1}}, {"amplitude", {0.01, 0.02}}}},
                      {"parallelism", 3}};
  const SweepConfig parsed = parse_sweep_config(sweep);
  CHECK(parsed.size() == 8);
  const std::vector<RunConfig> runs = parsed.expand();
  CHECK(runs[1].init.amplitude == 0.02);
  CHECK(runs[2].mu == -1);
  CHECK(runs[4].p == Rational(11, 2));

  const fs::path cfg = write_json(dir.path, "sweep.json", sweep);
  std::ostringstream err;
  REQUIRE(cmd_sweep(cfg, dir.path / "wide.csv", err) == kExitOk);
  ::setenv("GGP_THREADS", "1", 1);
  REQUIRE(cmd_sweep(cfg, dir.path / "narrow.csv", err) == kExitOk);
  ::setenv("GGP_THREADS", "zero", 1);
  CHECK(cmd_sweep(cfg, dir.path / "bad.csv", err) == kExitConfig);
  ::unsetenv("GGP_THREADS");
  const std::string wide = slurp(dir.path / "wide.csv");
  CHECK(wide == slurp(dir.path / "narrow.csv"));
  CHECK(count_lines(wide) == 9);
  std::istringstream lines(wide);
  std::string line;
  std::getline(lines, line);
  CHECK(line + "\n" == sweep_csv_header());
  for (int i = 0; i < 8; ++i) {
    std::getline(lines, line);
    CHECK(line.rfind(std::to_string(i) + ",", 0) == 0);
  }
  CHECK_FALSE(fs::exists(dir.path / "bad.csv"));

  json too_many = sweep;
  too_many["max_runs"] = 4;
  CHECK_THROWS_AS(parse_sweep_config(too_many), ConfigError);
}
