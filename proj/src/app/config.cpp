#include "ggp/config.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace ggp {

using nlohmann::json;

std::string_view name_of(InitType t) {
  switch (t) {
    case InitType::gaussian: return "gaussian";
    case InitType::plane_wave_perturbation: return "plane_wave_perturbation";
    case InitType::theta_constant: return "theta_constant";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

// Reads keys of one JSON object and rejects whatever was not consumed.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }
  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key)) fail(where(key), "unknown key");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* raw(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& required(const std::string& key) {
    const json* v = raw(key);
    if (!v) fail(where(key), "missing required key");
    return *v;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = raw(key);
    if (!v) {
      if (!fallback) fail(where(key), "missing required key");
      return *fallback;
    }
    if (!v->is_number()) fail(where(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) fail(where(key), "must be finite");
    return d;
  }

  double positive(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const double d = number(key, fallback);
    if (!(d > 0)) fail(where(key), "must be positive");
    return d;
  }

  long long integer(const std::string& key, std::optional<long long> fallback = std::nullopt) {
    const json* v = raw(key);
    if (!v) {
      if (!fallback) fail(where(key), "missing required key");
      return *fallback;
    }
    if (!v->is_number_integer()) fail(where(key), "expected an integer");
    return v->get<long long>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(where(key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const json* v = raw(key);
    if (!v) {
      if (!fallback) fail(where(key), "missing required key");
      return *fallback;
    }
    if (!v->is_string()) fail(where(key), "expected a string");
    return v->get<std::string>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Rational read_p(const json& v, const std::string& path) {
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_number()) {
    if (!std::isfinite(v.get<double>())) fail(path, "must be finite");
    text = v.dump();
  } else {
    fail(path, "expected a rational string such as \"7/2\"");
  }
  bool decimal = false;
  Rational p;
  try {
    p = parse_rational(text, &decimal);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  if (v.is_number() || decimal)
    spdlog::warn("{}: decimal value {} rationalized exactly to {}", path, text, to_string(p));
  return p;
}

double read_length(const json& v, const std::string& path) {
  if (v.is_number()) {
    const double d = v.get<double>();
    if (!(d > 0) || !std::isfinite(d)) fail(path, "must be positive and finite");
    return d;
  }
  if (v.is_string()) {
    // "<k>pi" or "<k>*pi"
    std::string s = v.get<std::string>();
    const auto pos = s.rfind("pi");
    if (pos != std::string::npos && pos + 2 == s.size()) {
      std::string k = s.substr(0, pos);
      if (!k.empty() && k.back() == '*') k.pop_back();
      try {
        std::size_t used = 0;
        const double factor = k.empty() ? 1.0 : std::stod(k, &used);
        if (used == k.size() && factor > 0 && std::isfinite(factor)) return factor * std::numbers::pi;
      } catch (const std::exception&) {
      }
    }
    fail(path, "expected a positive number or a string like \"80pi\"");
  }
  fail(path, "expected a positive number or a string like \"80pi\"");
}

json parse_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": malformed JSON: " + e.what());
  }
}

}  // namespace

ProblemParams RunConfig::params() const { return make_params(n, p, mu); }

GridPtr RunConfig::grid() const { return make_grid(n, length, samples); }

RunConfig parse_run_config(const json& doc) {
  RunConfig cfg;
  Reader top(doc, "");

  {
    Reader r(top.required("params"), "params");
    const long long n = r.integer("n");
    if (n != 1 && n != 2) fail("params.n", "must be 1 or 2");
    cfg.n = static_cast<int>(n);
    cfg.p = read_p(r.required("p"), "params.p");
    if (!(cfg.p > 2)) fail("params.p", "must be > 2");
    const long long mu = r.integer("mu", 1);
    if (mu != 1 && mu != -1) fail("params.mu", "must be +1 or -1");
    cfg.mu = static_cast<int>(mu);
  }
  {
    Reader r(top.required("grid"), "grid");
    cfg.length = read_length(r.required("L"), "grid.L");
    const long long N = r.integer("N");
    if (N < 8 || N > (1 << 20) || (N & (N - 1)) != 0) fail("grid.N", "must be a power of two >= 8");
    cfg.samples = static_cast<int>(N);
  }
  {
    Reader r(top.required("init"), "init");
    const std::string type = r.string("type");
    if (type == "gaussian") cfg.init.type = InitType::gaussian;
    else if (type == "plane_wave_perturbation") cfg.init.type = InitType::plane_wave_perturbation;
    else if (type == "theta_constant") cfg.init.type = InitType::theta_constant;
    else fail("init.type", "must be gaussian, plane_wave_perturbation or theta_constant");
    cfg.init.amplitude = r.number("amplitude", 0.0);
    if (cfg.init.amplitude < 0) fail("init.amplitude", "must be >= 0");
    cfg.init.width = r.positive("width", 1.0);
    cfg.init.frequency = r.number("frequency", 0.0);
    cfg.init.phase = r.number("phase", 0.0);
  }
  {
    Reader r(top.required("solver"), "solver");
    SolverConfig& s = cfg.solver;
    try {
      s.method = parse_method(r.string("method", "strang"));
    } catch (const std::invalid_argument& e) {
      fail("solver.method", e.what());
    }
    s.dt = r.positive("dt");
    s.horizon = r.positive("T");
    const long long max_iter = r.integer("picard_max_iter", 50);
    if (max_iter < 1) fail("solver.picard_max_iter", "must be >= 1");
    s.picard_max_iter = static_cast<int>(max_iter);
    s.picard_tol = r.positive("picard_tol", 1e-10);
    s.subdivision_m = r.positive("subdivision_m", 0.5);
    const long long every = r.integer("snapshot_every", 1);
    if (every < 1) fail("solver.snapshot_every", "must be >= 1");
    s.snapshot_every = static_cast<int>(every);
    s.allow_out_of_range = r.boolean("allow_out_of_range", false);
    s.boundary_guard = r.boolean("boundary_guard", true);
    s.contamination_threshold = r.positive("contamination_threshold", 1e-6);
    s.coarse_grid_threshold = r.positive("coarse_grid_threshold", 1e-6);
    s.divergence_threshold = r.positive("divergence_threshold", 1e6);
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      fail("solver", e.what());
    }
  }
  if (const json* d = top.raw("diagnostics")) {
    Reader r(*d, "diagnostics");
    if (const json* list = r.raw("sigma_list")) {
      if (!list->is_array()) fail("diagnostics.sigma_list", "expected an array of numbers");
      for (const json& v : *list) {
        if (!v.is_number() || !std::isfinite(v.get<double>()))
          fail("diagnostics.sigma_list", "expected finite numbers");
        cfg.sigma_list.push_back(v.get<double>());
      }
    }
    const long long k = r.integer("checkpoints", 5);
    if (k < 4 || k > 30) fail("diagnostics.checkpoints", "must be between 4 and 30");
    cfg.checkpoints = static_cast<int>(k);
  }
  const long long seed = top.integer("seed", 1);
  if (seed < 0) fail("seed", "must be >= 0");
  cfg.seed = static_cast<std::uint64_t>(seed);
  if (const json* o = top.raw("output")) {
    Reader r(*o, "output");
    cfg.write_checkpoint = r.boolean("checkpoint", false);
  }

  // Cross-field checks.
  ProblemParams params;
  try {
    params = cfg.params();
  } catch (const std::invalid_argument& e) {
    fail("params", e.what());
  }
  if (!params.in_range && !cfg.solver.allow_out_of_range)
    fail("params.p", "p = " + to_string(cfg.p) + " outside " + range_description(cfg.n) +
                         " (set solver.allow_out_of_range to explore)");
  const double k1 = to_double(cfg.p) - 1.0;
  for (double s : cfg.sigma_list)
    if (!(s >= 0 && s < k1)) fail("diagnostics.sigma_list", "sigma must lie in [0, k1) = [0, " + to_string(cfg.p - 1) + ")");
  if (cfg.init.type == InitType::plane_wave_perturbation) {
    const double mode = cfg.init.frequency * cfg.length / (2.0 * std::numbers::pi);
    if (std::abs(mode - std::round(mode)) > 1e-9 * std::max(1.0, std::abs(mode)))
      fail("init.frequency", "plane wave frequency must be a grid wavenumber 2πk/L");
    if (std::abs(std::round(mode)) >= cfg.samples / 2) fail("init.frequency", "plane wave frequency beyond Nyquist");
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(parse_document(path)); }

json to_json(const RunConfig& c) {
  json j;
  j["params"] = {{"n", c.n}, {"p", to_string(c.p)}, {"mu", c.mu}};
  j["grid"] = {{"L", c.length}, {"N", c.samples}};
  j["init"] = {{"type", std::string(name_of(c.init.type))},
               {"amplitude", c.init.amplitude},
               {"width", c.init.width},
               {"frequency", c.init.frequency},
               {"phase", c.init.phase}};
  const SolverConfig& s = c.solver;
  j["solver"] = {{"method", std::string(name_of(s.method))},
                 {"dt", s.dt},
                 {"T", s.horizon},
                 {"picard_max_iter", s.picard_max_iter},
                 {"picard_tol", s.picard_tol},
                 {"subdivision_m", s.subdivision_m},
                 {"snapshot_every", s.snapshot_every},
                 {"allow_out_of_range", s.allow_out_of_range},
                 {"boundary_guard", s.boundary_guard},
                 {"contamination_threshold", s.contamination_threshold},
                 {"coarse_grid_threshold", s.coarse_grid_threshold},
                 {"divergence_threshold", s.divergence_threshold}};
  j["diagnostics"] = {{"sigma_list", c.sigma_list}, {"checkpoints", c.checkpoints}};
  j["seed"] = c.seed;
  j["output"] = {{"checkpoint", c.write_checkpoint}};
  return j;
}

Field initial_field(const RunConfig& c, const GridPtr& grid) {
  const InitSpec& init = c.init;
  switch (init.type) {
    case InitType::gaussian: {
      const double w2 = init.width * init.width;
      return sample_field(grid, [&](double x, double y) {
        return init.amplitude * std::exp(-(x * x + y * y) / (2.0 * w2)) *
               std::polar(1.0, init.frequency * x + init.phase);
      });
    }
    case InitType::plane_wave_perturbation:
      return sample_field(grid, [&](double x, double) {
        return init.amplitude * std::polar(1.0, init.frequency * x + init.phase);
      });
    case InitType::theta_constant: {
      const Complex value = std::polar(1.0, init.phase) - 1.0;
      return Field(grid, ComplexArray::Constant(grid->size(), value));
    }
  }
  throw std::logic_error("unhandled init type");
}

std::vector<RunConfig> SweepConfig::expand() const {
  std::vector<json> docs;
  const std::vector<std::optional<std::string>> ps =
      p_axis.empty() ? std::vector<std::optional<std::string>>{std::nullopt}
                     : std::vector<std::optional<std::string>>(p_axis.begin(), p_axis.end());
  const std::vector<std::optional<int>> mus = mu_axis.empty() ? std::vector<std::optional<int>>{std::nullopt}
                                                              : std::vector<std::optional<int>>(mu_axis.begin(), mu_axis.end());
  const std::vector<std::optional<double>> amps =
      amplitude_axis.empty() ? std::vector<std::optional<double>>{std::nullopt}
                             : std::vector<std::optional<double>>(amplitude_axis.begin(), amplitude_axis.end());
  std::vector<RunConfig> runs;
  for (const auto& p : ps)
    for (const auto& mu : mus)
      for (const auto& a : amps) {
        json doc = base;
        if (p) doc["params"]["p"] = *p;
        if (mu) doc["params"]["mu"] = *mu;
        if (a) doc["init"]["amplitude"] = *a;
        const std::size_t index = runs.size();
        try {
          runs.push_back(parse_run_config(doc));
        } catch (const ConfigError& e) {
          throw ConfigError("sweep run " + std::to_string(index) + ": " + e.what());
        }
      }
  return runs;
}

std::size_t SweepConfig::size() const {
  return std::max<std::size_t>(p_axis.size(), 1) * std::max<std::size_t>(mu_axis.size(), 1) *
         std::max<std::size_t>(amplitude_axis.size(), 1);
}

SweepConfig parse_sweep_config(const json& doc) {
  SweepConfig cfg;
  Reader top(doc, "");
  cfg.base = top.required("template");
  if (const json* axes = top.raw("axes")) {
    Reader r(*axes, "axes");
    if (const json* ps = r.raw("p")) {
      if (!ps->is_array()) fail("axes.p", "expected an array");
      for (const json& v : *ps) {
        read_p(v, "axes.p");
        cfg.p_axis.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    }
    if (const json* mus = r.raw("mu")) {
      if (!mus->is_array()) fail("axes.mu", "expected an array");
      for (const json& v : *mus) {
        if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1)) fail("axes.mu", "entries must be +1 or -1");
        cfg.mu_axis.push_back(v.get<int>());
      }
    }
    if (const json* as = r.raw("amplitude")) {
      if (!as->is_array()) fail("axes.amplitude", "expected an array");
      for (const json& v : *as) {
        if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() < 0)
          fail("axes.amplitude", "entries must be finite and >= 0");
        cfg.amplitude_axis.push_back(v.get<double>());
      }
    }
  }
  const long long width = top.integer("parallelism", 1);
  if (width < 1) fail("parallelism", "must be >= 1");
  cfg.parallelism = static_cast<int>(width);
  const long long cap = top.integer("max_runs", 1024);
  if (cap < 1) fail("max_runs", "must be >= 1");
  cfg.max_runs = static_cast<int>(cap);
  if (cfg.size() > static_cast<std::size_t>(cfg.max_runs))
    fail("axes", "cross product of " + std::to_string(cfg.size()) + " runs exceeds max_runs = " +
                     std::to_string(cfg.max_runs));
  // Validate every combination now so a bad axis value fails before any run.
  cfg.expand();
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) { return parse_sweep_config(parse_document(path)); }

}  // namespace ggp
