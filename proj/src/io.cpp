#include "krf/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>

#include "krf/curvature.hpp"
#include "krf/errors.hpp"

namespace krf {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

void check_version(const json& j, const std::string& where) {
  if (!j.contains("format_version")) return;
  const std::string v = j.at("format_version").get<std::string>();
  const int major = std::atoi(v.c_str());
  if (major > std::atoi(kFormatVersion))
    throw ConfigError(where + ": format version " + v + " is newer than " +
                      kFormatVersion);
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

void store_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json profile_to_json(const RadialProfile& P) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "radial_profile";
  j["n"] = P.n;
  j["L"] = P.scheme().s_max();
  j["grid"] = P.grid();
  j["F"] = P.F;
  j["boundary_model"] = {{"a", P.boundary_model.a},
                         {"b", P.boundary_model.b},
                         {"c_south", P.boundary_model.c_south},
                         {"c_north", P.boundary_model.c_north}};
  j["metadata"] = {{"norm_convention", kNormConvention},
                   {"c_norm", c_norm(P.n)},
                   {"tolerances", {{"tol_bc", P.tol_bc}}}};
  return j;
}

RadialProfile profile_from_json(const nlohmann::json& j) {
  check_version(j, "profile snapshot");
  require_keys(j, {"format_version", "kind", "n", "L", "grid", "F", "boundary_model",
                   "metadata"},
               "profile snapshot");
  for (const char* key : {"n", "grid", "F"})
    if (!j.contains(key))
      throw ConfigError(std::string("profile snapshot: missing field '") + key + "'");
  if (j.value("kind", "radial_profile") != std::string("radial_profile"))
    throw ConfigError("profile snapshot: wrong kind");
  const int n = j.at("n").get<int>();
  auto grid = j.at("grid").get<std::vector<double>>();
  auto F = j.at("F").get<std::vector<double>>();
  if (grid.size() != F.size())
    throw ConfigError("profile snapshot: grid and F lengths differ");
  double tol_bc = 1e-6;
  if (j.contains("metadata") && j.at("metadata").contains("tolerances"))
    tol_bc = j.at("metadata").at("tolerances").value("tol_bc", 1e-6);
  return RadialProfile(n, std::move(grid), std::move(F), tol_bc);
}

void write_profile(const std::filesystem::path& path, const RadialProfile& P) {
  store_json(path, profile_to_json(P));
}

RadialProfile read_profile(const std::filesystem::path& path) {
  return profile_from_json(load_json(path));
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  check_version(j, "run config");
  require_keys(j,
               {"format_version", "manifold", "grid", "initial", "flow", "budget",
                "monitors", "eps_n", "gauge_projection", "stop_when_ric0_below",
                "output", "seed"},
               "run config");
  RunConfig cfg;

  const auto& manifold = j.at("manifold");
  require_keys(manifold, {"n"}, "manifold");
  cfg.flow.n = manifold.at("n").get<int>();
  if (cfg.flow.n < 1) throw ConfigError("manifold.n must be >= 1");

  if (j.contains("grid")) {
    const auto& grid = j.at("grid");
    require_keys(grid, {"L", "nodes", "kind"}, "grid");
    cfg.flow.L = grid.value("L", 12.0);
    cfg.flow.nodes = grid.value("nodes", 256);
    cfg.flow.grid_kind = grid.value("kind", "fs_arclength");
  }

  if (j.contains("initial")) {
    const auto& init = j.at("initial");
    require_keys(init, {"type", "amplitude", "shape", "seed"}, "initial");
    cfg.flow.initial.type = init.value("type", "fs");
    cfg.flow.initial.amplitude = init.value("amplitude", 0.0);
    cfg.flow.initial.shape = init.value("shape", "sech");
    cfg.flow.initial.seed = init.value("seed", 0ull);
  }

  if (j.contains("flow")) {
    const auto& fl = j.at("flow");
    require_keys(fl, {"dt_policy", "t_end", "cadence"}, "flow");
    cfg.flow.t_end = fl.value("t_end", 1.0);
    cfg.flow.cadence = fl.value("cadence", 0.01);
    if (fl.contains("dt_policy")) {
      const auto& pol = fl.at("dt_policy");
      require_keys(pol, {"type", "dt", "cfl"}, "dt_policy");
      const std::string type = pol.value("type", "adaptive");
      if (type == "adaptive") {
        cfg.flow.dt_policy.kind = DtPolicy::Kind::adaptive;
      } else if (type == "fixed") {
        cfg.flow.dt_policy.kind = DtPolicy::Kind::fixed;
      } else {
        throw ConfigError("dt_policy.type must be adaptive or fixed");
      }
      cfg.flow.dt_policy.dt = pol.value("dt", 1e-4);
      cfg.flow.dt_policy.cfl = pol.value("cfl", 0.8);
      if (cfg.flow.dt_policy.cfl <= 0.0 || cfg.flow.dt_policy.cfl > 1.0)
        throw ConfigError("dt_policy.cfl must lie in (0, 1]");
      if (cfg.flow.dt_policy.dt <= 0.0) throw ConfigError("dt_policy.dt must be positive");
    }
  }

  if (j.contains("budget")) {
    const auto& b = j.at("budget");
    require_keys(b, {"delta", "Lambda", "c_n"}, "budget");
    cfg.flow.has_budget = true;
    cfg.flow.budget = make_budget(cfg.flow.n, b.at("delta").get<double>(),
                                  b.at("Lambda").get<double>(), b.value("c_n", 8.0));
  }

  cfg.flow.eps_n = j.value("eps_n", 0.1);
  cfg.flow.gauge_projection = j.value("gauge_projection", true);
  cfg.flow.stop_when_ric0_below = j.value("stop_when_ric0_below", 0.0);
  cfg.flow.config_seed = j.value("seed", 0ull);

  if (j.contains("monitors")) {
    for (const auto& m : j.at("monitors")) {
      const std::string name = m.get<std::string>();
      if (name != "doubling_time" && name != "pinching_window" &&
          name != "continuation" && name != "convergence")
        throw ConfigError("unknown monitor: " + name);
      cfg.monitors.push_back(name);
    }
  }

  if (j.contains("output")) {
    const auto& o = j.at("output");
    require_keys(o, {"directory", "formats"}, "output");
    cfg.out_dir = o.value("directory", "out");
    if (o.contains("formats"))
      cfg.formats = o.at("formats").get<std::vector<std::string>>();
  }
  return cfg;
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
  json j;
  j["format_version"] = kFormatVersion;
  j["manifold"] = {{"n", cfg.flow.n}};
  j["grid"] = {{"L", cfg.flow.L}, {"nodes", cfg.flow.nodes}, {"kind", cfg.flow.grid_kind}};
  j["initial"] = {{"type", cfg.flow.initial.type},
                  {"amplitude", cfg.flow.initial.amplitude},
                  {"shape", cfg.flow.initial.shape},
                  {"seed", cfg.flow.initial.seed}};
  j["flow"] = {
      {"dt_policy",
       {{"type", cfg.flow.dt_policy.kind == DtPolicy::Kind::adaptive ? "adaptive" : "fixed"},
        {"dt", cfg.flow.dt_policy.dt},
        {"cfl", cfg.flow.dt_policy.cfl}}},
      {"t_end", cfg.flow.t_end},
      {"cadence", cfg.flow.cadence}};
  if (cfg.flow.has_budget)
    j["budget"] = {{"delta", cfg.flow.budget.delta},
                   {"Lambda", cfg.flow.budget.Lambda},
                   {"c_n", cfg.flow.budget.c_n}};
  j["eps_n"] = cfg.flow.eps_n;
  j["gauge_projection"] = cfg.flow.gauge_projection;
  j["stop_when_ric0_below"] = cfg.flow.stop_when_ric0_below;
  j["seed"] = cfg.flow.config_seed;
  j["monitors"] = cfg.monitors;
  j["output"] = {{"directory", cfg.out_dir}, {"formats", cfg.formats}};
  return j;
}

RunConfig read_run_config(const std::filesystem::path& path) {
  return run_config_from_json(load_json(path));
}

uint64_t config_hash(const nlohmann::json& canonical) {
  const std::string s = canonical.dump();
  uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t run_identity_hash(const RunConfig& cfg) {
  const json full = run_config_to_json(cfg);
  json identity;
  for (const char* key : {"manifold", "grid", "initial", "eps_n", "gauge_projection"})
    if (full.contains(key)) identity[key] = full.at(key);
  if (full.contains("budget")) identity["budget"] = full.at("budget");
  if (full.contains("flow") && full.at("flow").contains("dt_policy"))
    identity["dt_policy"] = full.at("flow").at("dt_policy");
  return config_hash(identity);
}

void write_series_csv(const std::filesystem::path& path,
                      const std::vector<SeriesRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "t,E0,E1,dE1_formula,l2_ric0,l2_scalar,l2_Q0,ric_min,riem_sup,diameter,"
         "lambda1\n";
  for (const auto& r : rows) {
    out << format_g17(r.t) << ',' << format_g17(r.E0) << ',' << format_g17(r.E1) << ','
        << format_g17(r.dE1_formula) << ',' << format_g17(r.l2_ric0) << ','
        << format_g17(r.l2_scalar) << ',' << format_g17(r.l2_Q0) << ','
        << format_g17(r.ric_min) << ',' << format_g17(r.riem_sup) << ','
        << format_g17(r.diameter) << ',' << format_g17(r.lambda1) << '\n';
  }
}

std::vector<SeriesRow> read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty series file");
  std::vector<SeriesRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SeriesRow r;
    double* cols[] = {&r.t,     &r.E0,       &r.E1,       &r.dE1_formula,
                      &r.l2_ric0, &r.l2_scalar, &r.l2_Q0,   &r.ric_min,
                      &r.riem_sup, &r.diameter, &r.lambda1};
    size_t pos = 0;
    for (double* c : cols) {
      const size_t next = line.find(',', pos);
      *c = std::strtod(line.c_str() + pos, nullptr);
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    rows.push_back(r);
  }
  return rows;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "checkpoint";
  j["t"] = ck.t;
  j["phi"] = ck.phi;
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, ck.config_hash);
  j["config_hash"] = buf;
  store_json(path, j);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  const json j = load_json(path);
  check_version(j, "checkpoint");
  require_keys(j, {"format_version", "kind", "t", "phi", "config_hash"}, "checkpoint");
  if (j.value("kind", "") != std::string("checkpoint"))
    throw ConfigError("not a checkpoint file");
  Checkpoint ck;
  ck.t = j.at("t").get<double>();
  ck.phi = j.at("phi").get<std::vector<double>>();
  ck.config_hash = std::strtoull(j.at("config_hash").get<std::string>().c_str(), nullptr, 16);
  return ck;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const nlohmann::json& config,
                    const std::vector<std::string>& outputs) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "manifest";
  j["command"] = command;
  j["config"] = config;
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, config_hash(config));
  j["config_hash"] = buf;
  j["outputs"] = outputs;
  store_json(dir / "manifest.json", j);
}

}  // namespace krf
