// krflab: command-line laboratory for the normalized Kahler-Ricci flow on
// U(n)-invariant CP^n profiles.
//
// Subcommands: flow, analyze, constants, certify, spectrum, segment-check.
// Exit codes: 0 clean, 1 configuration or numerical error, 2 monitor or
// certificate failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "krf/analysis.hpp"
#include "krf/curvature.hpp"
#include "krf/errors.hpp"
#include "krf/flow.hpp"
#include "krf/functionals.hpp"
#include "krf/geodesic.hpp"
#include "krf/grid.hpp"
#include "krf/io.hpp"
#include "krf/monitors.hpp"
#include "krf/parallel.hpp"
#include "krf/stability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace krf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMonitorFailure = 2;

json digest_to_json(const GeometryDigest& g) {
  return json{{"diameter",
               {{"value", g.diameter.value},
                {"radial", g.diameter.radial},
                {"divisor", g.diameter.divisor},
                {"circle_max", g.diameter.circle_max}}},
              {"lambda1",
               {{"value", g.spectrum.lambda1},
                {"invariant_sector", g.spectrum.lambda1_invariant},
                {"charged_sector", g.spectrum.lambda1_k1},
                {"sector_bound_only", g.spectrum.sector_bound_only}}},
              {"sobolev_proxy", g.sobolev_proxy},
              {"poincare_proxy", g.poincare_proxy},
              {"liyau_applicable", g.liyau_applicable},
              {"liyau_ok", g.liyau_ok}};
}

json certificate_to_json(const AdmissibilityCertificate& c) {
  return json{{"pass", c.pass},
              {"ricci", {{"pass", c.pass_ricci}, {"value", c.ric_lower}, {"margin", c.ric_margin}}},
              {"riemann", {{"pass", c.pass_riem}, {"value", c.riem_sup}, {"margin", c.riem_margin}}},
              {"energy", {{"pass", c.pass_energy}, {"value", c.E1}, {"margin", c.E1_margin}}}};
}

json budget_to_json(const StabilityBudget& b) {
  return json{{"n", b.n},       {"delta", b.delta}, {"Lambda", b.Lambda},
              {"c_n", b.c_n},   {"eps0", b.eps0},   {"T6_primary", b.T6_primary},
              {"T6_alt", b.T6_alt}, {"T", b.T},     {"eps", b.eps}};
}

int cmd_flow(const std::string& config_path, const std::string& out_override,
             long long seed_override, int nodes_override, double t_end_override,
             const std::string& resume_path) {
  RunConfig cfg = read_run_config(config_path);
  if (seed_override >= 0) {
    cfg.flow.initial.seed = static_cast<uint64_t>(seed_override);
    cfg.flow.config_seed = static_cast<uint64_t>(seed_override);
  }
  if (nodes_override > 0) cfg.flow.nodes = nodes_override;
  if (t_end_override > 0) cfg.flow.t_end = t_end_override;
  if (!out_override.empty()) cfg.out_dir = out_override;

  const json cfg_json = run_config_to_json(cfg);
  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);

  FlowEngine engine(cfg.flow);
  write_profile(dir / "snapshot_initial.json", engine.current_profile());

  if (!resume_path.empty()) {
    const Checkpoint ck = read_checkpoint(resume_path);
    if (ck.config_hash != run_identity_hash(cfg))
      throw ConfigError("checkpoint does not match this configuration");
    engine.restore(ck.t, ck.phi);
  }

  json verdicts;
  int exit_code = kExitOk;

  if (cfg.flow.has_budget) {
    const auto cert = admissibility_certificate(engine.current_profile(), cfg.flow.budget);
    verdicts["admissibility"] = certificate_to_json(cert);
    verdicts["budget"] = budget_to_json(cfg.flow.budget);
    if (!cert.pass && resume_path.empty()) exit_code = kExitMonitorFailure;
  }

  // integrate, collecting rows from the current time
  std::vector<SeriesRow> rows;
  rows.push_back(engine.digest_row());
  const double cadence = cfg.flow.cadence;
  const long first_tick = std::lround(std::floor(engine.t() / cadence + 1e-9)) + 1;
  const long ticks = std::lround(std::ceil(cfg.flow.t_end / cadence - 1e-12));
  bool stiff = false;
  std::string stiff_message;
  try {
    for (long m = first_tick; m <= ticks; ++m) {
      const double tick = std::min(m * cadence, cfg.flow.t_end);
      while (engine.t() < tick - 1e-13) engine.advance(tick - engine.t());
      engine.restore(tick, std::vector<double>(engine.phi()));
      rows.push_back(engine.digest_row());
    }
  } catch (const StiffnessError& e) {
    stiff = true;
    stiff_message = e.what();
  }

  std::vector<std::string> outputs = {"snapshot_initial.json"};
  if (std::find(cfg.formats.begin(), cfg.formats.end(), "csv") != cfg.formats.end()) {
    write_series_csv(dir / "series.csv", rows);
    outputs.push_back("series.csv");
  }
  write_profile(dir / "snapshot_final.json", engine.current_profile());
  outputs.push_back("snapshot_final.json");
  write_checkpoint(dir / "checkpoint_final.json",
                   {engine.t(), engine.phi(), run_identity_hash(cfg)});
  outputs.push_back("checkpoint_final.json");

  for (const auto& m : cfg.monitors) {
    if (m == "doubling_time" && cfg.flow.has_budget) {
      const auto v = doubling_time_monitor(rows, cfg.flow.budget.Lambda);
      verdicts["doubling_time"] = {{"pass", v.pass},
                                   {"c_fit", v.c_fit},
                                   {"window_end", v.window_end},
                                   {"max_riem_in_window", v.max_riem_in_window},
                                   {"first_violation_t", v.first_violation_t}};
      if (!v.pass) exit_code = kExitMonitorFailure;
    } else if (m == "pinching_window" && cfg.flow.has_budget) {
      const auto v = pinching_window_check(rows, cfg.flow.budget, cfg.flow.eps_n);
      verdicts["pinching_window"] = {{"pass", v.pass},
                                     {"coverage_ok", v.coverage_ok},
                                     {"energy_gate", v.energy_gate},
                                     {"spacetime_l2", v.spacetime_l2},
                                     {"spacetime_bound", v.spacetime_bound},
                                     {"ric0_sup_window", v.ric0_sup_window},
                                     {"q0_sup_window", v.q0_sup_window},
                                     {"moser_ratio", v.moser_ratio},
                                     {"failed_window", v.failed_window}};
      if (!v.pass) exit_code = kExitMonitorFailure;
    } else if (m == "continuation" && cfg.flow.has_budget) {
      const auto v = continuation_driver(rows, cfg.flow.budget, cfg.flow.eps_n);
      verdicts["continuation"] = {{"initial_ok", v.initial_ok},
                                  {"reached_end", v.reached_end},
                                  {"reached_t", v.reached_t},
                                  {"violated", v.violated},
                                  {"violation_t", v.violation_t},
                                  {"lp_bound", v.lp_bound},
                                  {"tail_monotone", v.tail_monotone}};
      if (!v.reached_end) exit_code = kExitMonitorFailure;
    } else if (m == "convergence") {
      const auto v = convergence_detector(rows);
      const char* kind = v.kind == ConvergenceVerdict::Kind::positive ? "positive"
                         : v.kind == ConvergenceVerdict::Kind::degenerate
                             ? "degenerate"
                             : "inconclusive";
      verdicts["convergence"] = {{"kind", kind},
                                 {"rate", v.rate},
                                 {"r2", v.r2},
                                 {"window", {v.window_t0, v.window_t1}}};
    }
  }
  {
    std::vector<double> col;
    for (const auto& r : rows) col.push_back(r.ric0_sup);
    verdicts["beta_invariant_upper_bound"] = beta_invariant_estimate(col);
  }
  if (stiff) {
    verdicts["stiffness_failure"] = stiff_message;
    exit_code = kExitError;
  }
  {
    std::ofstream out(dir / "verdicts.json");
    out << verdicts.dump(2) << "\n";
  }
  outputs.push_back("verdicts.json");
  write_manifest(dir, "flow", cfg_json, outputs);
  std::cout << "flow: " << rows.size() << " rows to " << cfg.out_dir
            << " (exit " << exit_code << ")\n";
  return exit_code;
}

int cmd_analyze(const std::string& snapshot_path, const std::string& out_dir) {
  const RadialProfile P = read_profile(snapshot_path);
  P.validate();
  const auto digest = geometry_digest(P);
  auto ref = fubini_study_profile(P.n, P.scheme_ptr());
  const auto rep = energy_report(P.psi(), std::vector<double>(P.F.size(), 0.0), ref, true);

  json j;
  j["format_version"] = kFormatVersion;
  j["geometry"] = digest_to_json(digest);
  j["energy"] = {{"E0", rep.E0},
                 {"E1", rep.E1},
                 {"Ek", rep.Ek},
                 {"Jk", rep.Jk},
                 {"l2_ric0", rep.l2_ric0},
                 {"l2_scalar", rep.l2_scalar},
                 {"l2_Q0", rep.l2_Q0},
                 {"identity_rel_error", rep.identity_rel_error}};
  j["curvature"] = {{"ric_min", ricci_lower_bound(P)},
                    {"riem_sup", riem_sup_norm(P)},
                    {"norm_convention", kNormConvention}};
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "digest.json");
    out << j.dump(2) << "\n";
    write_manifest(out_dir, "analyze", json{{"snapshot", snapshot_path}},
                   {"digest.json"});
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_constants(int n, double delta, double Lambda, double c_n, bool as_json) {
  const auto b = make_budget(n, delta, Lambda, c_n);
  json j = budget_to_json(b);
  if (n >= 2) j["condition_star"] = condition_star(n).str();
  j["epsilon0_maximizer"] = epsilon0_maximizer(n);
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("stability budget (n=%d, delta=%g, Lambda=%g, c_n=%g)\n", n, delta,
                Lambda, c_n);
    std::printf("  epsilon0(n)   = %.17g  (maximizer N* = %g)\n", b.eps0,
                epsilon0_maximizer(n));
    std::printf("  6T (primary)  = %.17g\n", b.T6_primary);
    std::printf("  6T (alt)      = %.17g\n", b.T6_alt);
    std::printf("  T             = %.17g\n", b.T);
    std::printf("  eps budget    = %.17g\n", b.eps);
    if (n >= 2)
      std::printf("  condition (*) = %s\n", condition_star(n).str().c_str());
  }
  return kExitOk;
}

int cmd_certify(const std::string& snapshot_path, double delta, double Lambda,
                double c_n) {
  const RadialProfile P = read_profile(snapshot_path);
  P.validate();
  const auto budget = make_budget(P.n, delta, Lambda, c_n);
  const auto cert = admissibility_certificate(P, budget);
  json j = {{"budget", budget_to_json(budget)},
            {"certificate", certificate_to_json(cert)}};
  std::cout << j.dump(2) << "\n";
  return cert.pass ? kExitOk : kExitMonitorFailure;
}

int cmd_spectrum(const std::string& snapshot_path) {
  const RadialProfile P = read_profile(snapshot_path);
  P.validate();
  const auto sp = lambda1(P);
  json j = {{"lambda1", sp.lambda1},
            {"invariant_sector", sp.lambda1_invariant},
            {"charged_sector", sp.lambda1_k1},
            {"sector_bound_only", sp.sector_bound_only}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_segment_check(const std::string& snapshot_path, double radius, int pairs,
                      long long seed, const std::string& out_dir) {
  const RadialProfile P = read_profile(snapshot_path);
  P.validate();
  const auto rep = segment_inequality_check(P, radius, pairs,
                                            static_cast<uint64_t>(seed));
  json j = {{"format_version", kFormatVersion},
            {"lhs", rep.lhs},
            {"rhs", rep.rhs},
            {"ratio", rep.ratio},
            {"constant", rep.constant},
            {"pairs_requested", rep.pairs_requested},
            {"pairs_used", rep.pairs_used},
            {"pairs_skipped", rep.pairs_skipped},
            {"skip_flag", rep.skip_flag},
            {"holds", rep.holds}};
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "segment_report.json");
    out << j.dump(2) << "\n";
    write_manifest(out_dir, "segment-check",
                   json{{"snapshot", snapshot_path},
                        {"radius", radius},
                        {"pairs", pairs},
                        {"seed", seed}},
                   {"segment_report.json"});
  }
  std::cout << j.dump(2) << "\n";
  return rep.holds ? kExitOk : kExitMonitorFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the normalized Kahler-Ricci flow on CP^n"};
  app.require_subcommand(1);

  // flow
  std::string config_path, out_dir, resume_path;
  long long seed_override = -1;
  int nodes_override = 0;
  double t_end_override = 0.0;
  auto* flow = app.add_subcommand("flow", "integrate a configured flow run");
  flow->add_option("--config", config_path, "run configuration JSON")->required();
  flow->add_option("--out", out_dir, "output directory override");
  flow->add_option("--seed", seed_override, "perturbation seed override");
  flow->add_option("--grid-nodes", nodes_override, "grid node count override");
  flow->add_option("--t-end", t_end_override, "end time override");
  flow->add_option("--resume", resume_path, "checkpoint to resume from");

  // analyze
  std::string snapshot_path, analyze_out;
  auto* analyze = app.add_subcommand("analyze", "one-shot diagnostics of a snapshot");
  analyze->add_option("--snapshot", snapshot_path, "profile snapshot JSON")->required();
  analyze->add_option("--out", analyze_out, "output directory");

  // constants
  int cn_n = 1;
  double cn_delta = 0.5, cn_lambda = 2.0, cn_cn = 8.0;
  bool cn_json = false;
  auto* constants = app.add_subcommand("constants", "stability budget table");
  constants->add_option("--n", cn_n, "complex dimension")->required();
  constants->add_option("--delta", cn_delta, "Ricci pinching margin")->required();
  constants->add_option("--Lambda", cn_lambda, "curvature bound")->required();
  constants->add_option("--c-n", cn_cn, "universal constant c(n)");
  constants->add_flag("--json", cn_json, "emit JSON");

  // certify
  std::string cert_snapshot;
  double cert_delta = 0.5, cert_lambda = 2.0, cert_cn = 8.0;
  auto* certify = app.add_subcommand("certify", "admissibility certificate");
  certify->add_option("--snapshot", cert_snapshot)->required();
  certify->add_option("--delta", cert_delta)->required();
  certify->add_option("--Lambda", cert_lambda)->required();
  certify->add_option("--c-n", cert_cn);

  // spectrum
  std::string spec_snapshot;
  auto* spectrum = app.add_subcommand("spectrum", "first Laplace eigenvalue");
  spectrum->add_option("--snapshot", spec_snapshot)->required();

  // segment-check
  std::string seg_snapshot, seg_out;
  double seg_radius = 0.2;
  int seg_pairs = 500;
  long long seg_seed = 1;
  auto* segment = app.add_subcommand("segment-check", "segment inequality Monte Carlo");
  segment->add_option("--snapshot", seg_snapshot)->required();
  segment->add_option("--radius", seg_radius, "polar cap radius");
  segment->add_option("--pairs", seg_pairs, "Monte Carlo pairs");
  segment->add_option("--seed", seg_seed, "sampling seed");
  segment->add_option("--out", seg_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*flow)
      return cmd_flow(config_path, out_dir, seed_override, nodes_override,
                      t_end_override, resume_path);
    if (*analyze) return cmd_analyze(snapshot_path, analyze_out);
    if (*constants) return cmd_constants(cn_n, cn_delta, cn_lambda, cn_cn, cn_json);
    if (*certify) return cmd_certify(cert_snapshot, cert_delta, cert_lambda, cert_cn);
    if (*spectrum) return cmd_spectrum(spec_snapshot);
    if (*segment)
      return cmd_segment_check(seg_snapshot, seg_radius, seg_pairs, seg_seed, seg_out);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitError;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
