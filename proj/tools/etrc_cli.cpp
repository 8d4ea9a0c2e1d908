// etrc — command-line front end for the event-triggered robust control
// toolkit. Verbs:
//
//   presets               list built-in scenarios (or print one with a name)
//   synthesize            run the robust design pipeline and report it
//   bounds                report Lipschitz data and analytic inter-event bounds
//   simulate              integrate one closed loop, write the trace CSV
//   compare               run periodic/static/dynamic side by side
//
// All verbs exit 0 only when every certificate attached to the work passed;
// failures print a machine-readable `error category=<Name>` line on stderr.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "etrc/design.hpp"
#include "etrc/errors.hpp"
#include "etrc/iet_bounds.hpp"
#include "etrc/linalg.hpp"
#include "etrc/scenario_io.hpp"

namespace {

using namespace etrc;

int log_level() {
  // ETRC_LOG: quiet (default) | info | debug
  const char* v = std::getenv("ETRC_LOG");
  if (!v) return 0;
  const std::string s(v);
  if (s == "debug") return 2;
  if (s == "info") return 1;
  return 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[etrc] " << msg << "\n";
}

std::string mat9(const Matrix& m) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += format_sig9(m(i, j));
    }
    out += "]";
  }
  return out + "]";
}

std::string vec9(const Vec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_sig9(v[i]);
  }
  return out + "]";
}

const char* mech_name(TriggerKind k) {
  switch (k) {
    case TriggerKind::static_rule: return "static";
    case TriggerKind::dynamic_rule: return "dynamic";
    case TriggerKind::periodic_rule: return "periodic";
  }
  return "static";
}

struct CommonArgs {
  std::string scenario;
  std::vector<std::string> sets;
  std::string out;
  double dt = 0.0;       // 0 = keep scenario value
  double horizon = 0.0;  // 0 = keep scenario value
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_scenario = true) {
  auto* opt = cmd->add_option("--scenario", args.scenario,
                              "preset name or path to a scenario file");
  if (needs_scenario) opt->required();
  cmd->add_option("--set", args.sets,
                  "override a scenario field, e.g. --set trigger.sigma=0.9 (repeatable)");
  cmd->add_option("--out", args.out, "output path (verb-specific)");
  cmd->add_option("--dt", args.dt, "override the integration step");
  cmd->add_option("--horizon", args.horizon, "override the simulation horizon");
}

ScenarioConfig load_with_overrides(const CommonArgs& args) {
  ScenarioConfig cfg = load_scenario(args.scenario);
  for (const std::string& kv : args.sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCategory::ValidationError, "--set expects key=value, got '" + kv + "'");
    apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (args.dt > 0.0) cfg.sim.dt = args.dt;
  if (args.horizon > 0.0) cfg.sim.horizon = args.horizon;
  log_info("loaded scenario '" + cfg.name + "'");
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCategory::IoError, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error(ErrorCategory::IoError, "write failed for '" + path + "'");
}

std::string design_report(const ScenarioConfig& cfg, const DesignResult& d) {
  std::string out;
  out += "scenario: " + cfg.name + " (" +
         (cfg.kind == UncertaintyKind::matched ? "matched" : "unmatched") + ")\n";
  out += "grid points: " + std::to_string(d.p_grid.size()) + "\n";
  out += "S = " + mat9(d.synthesis.s) + "\n";
  out += "K = " + mat9(d.synthesis.k) + "\n";
  if (cfg.kind == UncertaintyKind::unmatched) {
    out += "L = " + mat9(d.synthesis.l) + "\n";
    out += "L (derived) = " + mat9(d.synthesis.l_derived) + "\n";
  }
  out += "riccati residual = " + format_sig9(d.synthesis.residual) + "\n";
  out += "closed-loop spectral abscissa = " +
         format_sig9(d.synthesis.closed_loop_spectral_abscissa) + "\n";
  out += "lambda_min(Q cert) = " + format_sig9(d.lambda_min_q) + "\n";
  if (cfg.kind == UncertaintyKind::matched && !d.p_worst.empty())
    out += "worst-case parameter = " + vec9(d.p_worst) + "\n";
  out += "mu = " + format_sig9(d.mu) + "\n";
  return out;
}

std::string bounds_report(const ScenarioConfig& cfg, const DesignResult& d) {
  const double st = static_tau(d.lip.l1, d.lip.l2, d.mu);
  const double dy =
      dynamic_tau(d.lip.l1, d.lip.l2, d.mu, cfg.trigger.theta, cfg.trigger.lambda());
  std::string out;
  out += "scenario: " + cfg.name + "\n";
  out += "l1 = " + format_sig9(d.lip.l1) + "\n";
  out += "l2 = " + format_sig9(d.lip.l2) + "\n";
  out += "l3 = " + format_sig9(d.lip.l3) + "\n";
  out += "mu = " + format_sig9(d.mu) + "\n";
  out += "static tau >= " + format_sig9(st) + "\n";
  out += "dynamic tau >= " + format_sig9(dy) + "\n";
  return out;
}

std::string metrics_line(const std::string& name, const SimMetrics& m) {
  return name + ": tau_max=" + format_sig9(m.tau_max) + " tau_min=" + format_sig9(m.tau_min) +
         " tau_avg=" + format_sig9(m.tau_avg) + " u_total=" + std::to_string(m.u_total) + "\n";
}

/// Run the decrease diagnostics for a triggered trace. Returns a human line
/// and sets `ok` accordingly; periodic runs are exempt (no triggered
/// certificate applies to them).
std::string diagnostics_line(const SimTrace& trace, const DesignResult& d,
                             const ScenarioConfig& cfg, TriggerKind kind, bool& ok) {
  if (kind == TriggerKind::periodic_rule) {
    ok = true;
    return "";
  }
  const DecreaseReport rep =
      lyapunov_diagnostics(trace, d.synthesis, d.q_cert, cfg.trigger.sigma);
  ok = rep.pass;
  return std::string(mech_name(kind)) + " decrease certificate: " +
         (rep.pass ? "pass" : "FAIL") + " (max violation " + format_sig9(rep.max_violation) +
         ", tolerance " + format_sig9(rep.tolerance) + ")\n";
}

int cmd_presets(const std::string& name) {
  if (name.empty()) {
    for (const std::string& p : preset_names()) std::cout << p << "\n";
  } else {
    std::cout << preset_text(name);
  }
  return 0;
}

int cmd_synthesize(const CommonArgs& args) {
  const ScenarioConfig cfg = load_with_overrides(args);
  const DesignResult d = design_scenario(cfg);
  const std::string report = design_report(cfg, d);
  std::cout << report;
  if (!args.out.empty()) write_text(args.out, report);
  return 0;
}

int cmd_bounds(const CommonArgs& args) {
  const ScenarioConfig cfg = load_with_overrides(args);
  const DesignResult d = design_scenario(cfg);
  const std::string report = bounds_report(cfg, d);
  std::cout << report;
  if (!args.out.empty()) write_text(args.out, report);
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  const ScenarioConfig cfg = load_with_overrides(args);
  const DesignResult d = design_scenario(cfg);
  const TriggerKind kind = cfg.trigger.kind;
  log_info(std::string("simulating mechanism '") + mech_name(kind) + "'");

  const SimTrace trace = simulate(make_run(cfg, d, kind));
  const std::string out_path =
      args.out.empty() ? cfg.name + "_" + mech_name(kind) + "_trace.csv" : args.out;
  write_trace_csv(trace, out_path);

  std::cout << "trace: " << out_path << "\n";
  std::cout << metrics_line(mech_name(kind), trace.metrics);
  bool ok = true;
  std::cout << diagnostics_line(trace, d, cfg, kind, ok);
  if (!ok)
    throw Error(ErrorCategory::CertificateFailed,
                "decrease certificate failed for scenario '" + cfg.name + "'");
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  const ScenarioConfig cfg = load_with_overrides(args);
  const DesignResult d = design_scenario(cfg);

  const std::string dir = args.out.empty() ? "." : args.out;
  std::filesystem::create_directories(dir);

  const TriggerKind order[] = {TriggerKind::periodic_rule, TriggerKind::static_rule,
                               TriggerKind::dynamic_rule};
  std::vector<std::pair<std::string, SimMetrics>> rows;
  std::string diag;
  bool all_ok = true;
  for (const TriggerKind kind : order) {
    log_info(std::string("running mechanism '") + mech_name(kind) + "'");
    const SimTrace trace = simulate(make_run(cfg, d, kind));
    write_trace_csv(trace,
                    dir + "/" + cfg.name + "_" + mech_name(kind) + "_trace.csv");
    rows.emplace_back(mech_name(kind), trace.metrics);
    bool ok = true;
    diag += diagnostics_line(trace, d, cfg, kind, ok);
    all_ok = all_ok && ok;
  }

  const std::string table = metrics_table(rows);
  write_text(dir + "/" + cfg.name + "_metrics.csv", table);
  std::cout << table << diag;
  if (!all_ok)
    throw Error(ErrorCategory::CertificateFailed,
                "decrease certificate failed for scenario '" + cfg.name + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"etrc — event-triggered robust control toolkit"};
  app.require_subcommand(1);

  std::string preset_arg;
  CLI::App* presets = app.add_subcommand("presets", "list built-in scenarios");
  presets->add_option("name", preset_arg, "print this preset's scenario text");

  CommonArgs syn_args, bnd_args, sim_args, cmp_args;
  CLI::App* synthesize = app.add_subcommand("synthesize", "run the robust design pipeline");
  add_common(synthesize, syn_args);
  CLI::App* bounds = app.add_subcommand("bounds", "report analytic inter-event bounds");
  add_common(bounds, bnd_args);
  CLI::App* simulate = app.add_subcommand("simulate", "integrate one closed loop");
  add_common(simulate, sim_args);
  CLI::App* compare = app.add_subcommand("compare", "run all three mechanisms");
  add_common(compare, cmp_args);

  try {
    app.parse(argc, argv);
    if (presets->parsed()) return cmd_presets(preset_arg);
    if (synthesize->parsed()) return cmd_synthesize(syn_args);
    if (bounds->parsed()) return cmd_bounds(bnd_args);
    if (simulate->parsed()) return cmd_simulate(sim_args);
    if (compare->parsed()) return cmd_compare(cmp_args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const etrc::Error& e) {
    std::cerr << "error category=" << etrc::to_string(e.category()) << ": " << e.detail()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error category=Internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
