#include "etrc/scenario_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "etrc/errors.hpp"

namespace etrc {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw Error(ErrorCategory::ParseError, "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCategory::ValidationError, field + ": " + what);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& s, int line) {
  const std::string t = trim(s);
  if (t.empty()) parse_fail(line, "expected a number");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) parse_fail(line, "bad number '" + t + "'");
  return v;
}

/// "[a, b, c]" -> vector (also accepts "[]").
Vec parse_vector(const std::string& s, int line) {
  const std::string t = trim(s);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    parse_fail(line, "expected a bracketed vector, got '" + t + "'");
  const std::string body = trim(t.substr(1, t.size() - 2));
  Vec out;
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, line));
  return out;
}

/// "[[a, b], [c, d]]" -> matrix (rows must agree in length).
Matrix parse_matrix(const std::string& s, int line) {
  const std::string t = trim(s);
  if (t.size() < 4 || t.front() != '[' || t.back() != ']')
    parse_fail(line, "expected a bracketed row list, got '" + t + "'");
  const std::string body = t.substr(1, t.size() - 2);
  std::vector<Vec> rows;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && (std::isspace(static_cast<unsigned char>(body[i])) || body[i] == ','))
      ++i;
    if (i >= body.size()) break;
    if (body[i] != '[') parse_fail(line, "expected '[' inside row list");
    const std::size_t close = body.find(']', i);
    if (close == std::string::npos) parse_fail(line, "unterminated row");
    rows.push_back(parse_vector(body.substr(i, close - i + 1), line));
    i = close + 1;
  }
  if (rows.empty()) parse_fail(line, "empty matrix");
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int r = 0; r < m.rows(); ++r) {
    if (static_cast<int>(rows[r].size()) != m.cols()) parse_fail(line, "ragged matrix rows");
    for (int c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vector_text(const Vec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_full(v[i]);
  }
  return out + "]";
}

std::string matrix_text(const Matrix& m) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ", ";
      out += format_full(m(i, j));
    }
    out += "]";
  }
  return out + "]";
}

const char* kind_name(UncertaintyKind k) {
  return k == UncertaintyKind::matched ? "matched" : "unmatched";
}

const char* trigger_name(TriggerKind k) {
  switch (k) {
    case TriggerKind::static_rule: return "static";
    case TriggerKind::dynamic_rule: return "dynamic";
    case TriggerKind::periodic_rule: return "periodic";
  }
  return "static";
}

TriggerKind parse_trigger_kind(const std::string& v, int line) {
  if (v == "static") return TriggerKind::static_rule;
  if (v == "dynamic") return TriggerKind::dynamic_rule;
  if (v == "periodic") return TriggerKind::periodic_rule;
  parse_fail(line, "trigger kind must be static|dynamic|periodic, got '" + v + "'");
}

const char* traj_name(PTrajectory::Kind k) {
  switch (k) {
    case PTrajectory::Kind::constant: return "constant";
    case PTrajectory::Kind::sinusoid: return "sinusoid";
    case PTrajectory::Kind::piecewise: return "piecewise";
  }
  return "constant";
}

/// Validate a fully assembled configuration (used by the parser and after
/// command-line overrides).
void validate(const ScenarioConfig& c) {
  const int n = c.a_nominal.rows();
  if (n == 0 || c.a_nominal.cols() != n) invalid("plant.a_nominal", "must be square and nonempty");
  if (c.b.rows() != n || c.b.cols() == 0) invalid("plant.b", "must be n x m");
  for (const Matrix& d : c.delta_coeffs)
    if (d.rows() != n || d.cols() != n) invalid("plant.delta_coeff", "must be n x n");
  const std::size_t np = c.delta_coeffs.size();
  if (c.p_min.size() != np || c.p_max.size() != np)
    invalid("plant.p_min/p_max", "must list one bound per delta_coeff");
  for (std::size_t i = 0; i < np; ++i)
    if (c.p_min[i] > c.p_max[i]) invalid("plant.p_min/p_max", "empty parameter interval");

  const PTrajectory& tr = c.p_trajectory;
  const auto in_box = [&](const Vec& p) {
    for (std::size_t i = 0; i < np; ++i)
      if (p[i] < c.p_min[i] - 1e-12 || p[i] > c.p_max[i] + 1e-12) return false;
    return true;
  };
  switch (tr.kind) {
    case PTrajectory::Kind::constant:
      if (tr.value.size() != np) invalid("plant.p_value", "dimension mismatch");
      if (!in_box(tr.value)) invalid("plant.p_value", "outside the parameter box");
      break;
    case PTrajectory::Kind::sinusoid: {
      if (tr.amplitude.size() != np) invalid("plant.p_amplitude", "dimension mismatch");
      Vec hi(np), lo(np);
      for (std::size_t i = 0; i < np; ++i) {
        hi[i] = std::abs(tr.amplitude[i]);
        lo[i] = -hi[i];
      }
      if (!in_box(hi) || !in_box(lo)) invalid("plant.p_amplitude", "outside the parameter box");
      break;
    }
    case PTrajectory::Kind::piecewise:
      if (tr.times.size() < 2 || tr.values.size() != tr.times.size())
        invalid("plant.p_times/p_values", "need matching knot lists (>= 2 knots)");
      for (std::size_t i = 1; i < tr.times.size(); ++i)
        if (tr.times[i] <= tr.times[i - 1]) invalid("plant.p_times", "must be strictly increasing");
      for (const Vec& v : tr.values) {
        if (v.size() != np) invalid("plant.p_values", "dimension mismatch");
        if (!in_box(v)) invalid("plant.p_values", "knot outside the parameter box");
      }
      break;
  }

  if (c.kind == UncertaintyKind::matched) {
    if (!c.q || !c.r) invalid("weights", "matched scenarios need q and r");
    if (c.q->rows() != n || c.q->cols() != n) invalid("weights.q", "must be n x n");
    if (c.r->rows() != c.b.cols() || c.r->cols() != c.b.cols()) invalid("weights.r", "must be m x m");
  } else {
    if (!(c.alpha > 0.0)) invalid("params.alpha", "must be positive");
    if (!(c.rho > 0.0)) invalid("params.rho", "must be positive");
    if (!(c.beta > 0.0)) invalid("params.beta", "must be positive");
  }

  if (!(c.trigger.sigma > 0.0 && c.trigger.sigma < 1.0))
    invalid("trigger.sigma", "must lie in (0, 1)");
  if (!(c.trigger.theta > 0.0)) invalid("trigger.theta", "must be positive");
  if (c.trigger.k < 0.0) invalid("trigger.k", "must be nonnegative");
  if (c.trigger.lambda_override && *c.trigger.lambda_override < 0.0)
    invalid("trigger.lambda", "must be nonnegative");
  if (c.trigger.eta0 < 0.0) invalid("trigger.eta0", "must be nonnegative");
  if (!(c.trigger.period > 0.0)) invalid("trigger.period", "must be positive");

  if (static_cast<int>(c.sim.x0.size()) != n) invalid("sim.x0", "dimension mismatch");
  if (!(c.sim.dt > 0.0)) invalid("sim.dt", "must be positive");
  if (!(c.sim.horizon >= c.sim.dt)) invalid("sim.horizon", "must be at least dt");
  if (!(c.sim.grid_step > 0.0)) invalid("sim.grid_step", "must be positive");
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  ScenarioConfig c;
  // Trajectory pieces are collected and assembled after the scan.
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool traj_kind_seen = false;

  while (std::getline(in, raw)) {
    ++line;
    // Strip comments and surrounding whitespace.
    const std::size_t hash = raw.find_first_of("#;");
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;

    if (s.front() == '[' && s.back() == ']') {
      section = trim(s.substr(1, s.size() - 2));
      if (section != "scenario" && section != "plant" && section != "weights" &&
          section != "params" && section != "bounds" && section != "trigger" && section != "sim")
        parse_fail(line, "unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) parse_fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (section.empty()) parse_fail(line, "key outside any section");

    if (section == "scenario") {
      if (key == "name") c.name = val;
      else if (key == "kind") {
        if (val == "matched") c.kind = UncertaintyKind::matched;
        else if (val == "unmatched") c.kind = UncertaintyKind::unmatched;
        else parse_fail(line, "kind must be matched|unmatched");
      } else parse_fail(line, "unknown key '" + key + "' in [scenario]");
    } else if (section == "plant") {
      if (key == "a_nominal") c.a_nominal = parse_matrix(val, line);
      else if (key == "b") c.b = parse_matrix(val, line);
      else if (key == "delta_coeff") c.delta_coeffs.push_back(parse_matrix(val, line));
      else if (key == "p_min") c.p_min = parse_vector(val, line);
      else if (key == "p_max") c.p_max = parse_vector(val, line);
      else if (key == "p_trajectory") {
        traj_kind_seen = true;
        if (val == "constant") c.p_trajectory.kind = PTrajectory::Kind::constant;
        else if (val == "sinusoid") c.p_trajectory.kind = PTrajectory::Kind::sinusoid;
        else if (val == "piecewise") c.p_trajectory.kind = PTrajectory::Kind::piecewise;
        else parse_fail(line, "p_trajectory must be constant|sinusoid|piecewise");
      } else if (key == "p_value") c.p_trajectory.value = parse_vector(val, line);
      else if (key == "p_amplitude") c.p_trajectory.amplitude = parse_vector(val, line);
      else if (key == "p_frequency") c.p_trajectory.frequency = parse_double(val, line);
      else if (key == "p_times") c.p_trajectory.times = parse_vector(val, line);
      else if (key == "p_values") {
        const Matrix rows = parse_matrix(val, line);
        c.p_trajectory.values.clear();
        for (int i = 0; i < rows.rows(); ++i) {
          Vec v(static_cast<std::size_t>(rows.cols()));
          for (int j = 0; j < rows.cols(); ++j) v[j] = rows(i, j);
          c.p_trajectory.values.push_back(std::move(v));
        }
      } else parse_fail(line, "unknown key '" + key + "' in [plant]");
    } else if (section == "weights") {
      if (key == "q") c.q = parse_matrix(val, line);
      else if (key == "r") c.r = parse_matrix(val, line);
      else parse_fail(line, "unknown key '" + key + "' in [weights]");
    } else if (section == "params") {
      if (key == "alpha") c.alpha = parse_double(val, line);
      else if (key == "rho") c.rho = parse_double(val, line);
      else if (key == "beta") c.beta = parse_double(val, line);
      else if (key == "l_formula") {
        if (val == "derived") c.l_formula = LFormula::derived;
        else if (val == "printed") c.l_formula = LFormula::printed;
        else parse_fail(line, "l_formula must be derived|printed");
      } else parse_fail(line, "unknown key '" + key + "' in [params]");
    } else if (section == "bounds") {
      if (key == "f_m") c.f_m = parse_matrix(val, line);
      else if (key == "f") c.f = parse_matrix(val, line);
      else if (key == "f_u") c.f_u = parse_matrix(val, line);
      else if (key == "h") c.h = parse_matrix(val, line);
      else parse_fail(line, "unknown key '" + key + "' in [bounds]");
    } else if (section == "trigger") {
      if (key == "kind") c.trigger.kind = parse_trigger_kind(val, line);
      else if (key == "sigma") c.trigger.sigma = parse_double(val, line);
      else if (key == "theta") c.trigger.theta = parse_double(val, line);
      else if (key == "k") c.trigger.k = parse_double(val, line);
      else if (key == "lambda") c.trigger.lambda_override = parse_double(val, line);
      else if (key == "eta0") c.trigger.eta0 = parse_double(val, line);
      else if (key == "period") c.trigger.period = parse_double(val, line);
      else parse_fail(line, "unknown key '" + key + "' in [trigger]");
    } else if (section == "sim") {
      if (key == "x0") c.sim.x0 = parse_vector(val, line);
      else if (key == "horizon") c.sim.horizon = parse_double(val, line);
      else if (key == "dt") c.sim.dt = parse_double(val, line);
      else if (key == "grid_step") c.sim.grid_step = parse_double(val, line);
      else parse_fail(line, "unknown key '" + key + "' in [sim]");
    }
  }

  if (!traj_kind_seen && !c.delta_coeffs.empty())
    invalid("plant.p_trajectory", "missing trajectory for an uncertain plant");
  validate(c);
  return c;
}

std::string serialize_scenario(const ScenarioConfig& c) {
  std::string out;
  out += "[scenario]\n";
  out += "name = " + c.name + "\n";
  out += "kind = " + std::string(kind_name(c.kind)) + "\n\n";

  out += "[plant]\n";
  out += "a_nominal = " + matrix_text(c.a_nominal) + "\n";
  out += "b = " + matrix_text(c.b) + "\n";
  for (const Matrix& d : c.delta_coeffs) out += "delta_coeff = " + matrix_text(d) + "\n";
  out += "p_min = " + vector_text(c.p_min) + "\n";
  out += "p_max = " + vector_text(c.p_max) + "\n";
  out += "p_trajectory = " + std::string(traj_name(c.p_trajectory.kind)) + "\n";
  switch (c.p_trajectory.kind) {
    case PTrajectory::Kind::constant:
      out += "p_value = " + vector_text(c.p_trajectory.value) + "\n";
      break;
    case PTrajectory::Kind::sinusoid:
      out += "p_amplitude = " + vector_text(c.p_trajectory.amplitude) + "\n";
      out += "p_frequency = " + format_full(c.p_trajectory.frequency) + "\n";
      break;
    case PTrajectory::Kind::piecewise: {
      out += "p_times = " + vector_text(c.p_trajectory.times) + "\n";
      std::string rows = "[";
      for (std::size_t i = 0; i < c.p_trajectory.values.size(); ++i) {
        if (i) rows += ", ";
        rows += vector_text(c.p_trajectory.values[i]);
      }
      out += "p_values = " + rows + "]\n";
      break;
    }
  }
  out += "\n";

  if (c.q || c.r) {
    out += "[weights]\n";
    if (c.q) out += "q = " + matrix_text(*c.q) + "\n";
    if (c.r) out += "r = " + matrix_text(*c.r) + "\n";
    out += "\n";
  }

  out += "[params]\n";
  out += "alpha = " + format_full(c.alpha) + "\n";
  out += "rho = " + format_full(c.rho) + "\n";
  out += "beta = " + format_full(c.beta) + "\n";
  out += "l_formula = " + std::string(c.l_formula == LFormula::derived ? "derived" : "printed") +
         "\n\n";

  if (c.f_m || c.f || c.f_u || c.h) {
    out += "[bounds]\n";
    if (c.f_m) out += "f_m = " + matrix_text(*c.f_m) + "\n";
    if (c.f) out += "f = " + matrix_text(*c.f) + "\n";
    if (c.f_u) out += "f_u = " + matrix_text(*c.f_u) + "\n";
    if (c.h) out += "h = " + matrix_text(*c.h) + "\n";
    out += "\n";
  }

  out += "[trigger]\n";
  out += "kind = " + std::string(trigger_name(c.trigger.kind)) + "\n";
  out += "sigma = " + format_full(c.trigger.sigma) + "\n";
  out += "theta = " + format_full(c.trigger.theta) + "\n";
  out += "k = " + format_full(c.trigger.k) + "\n";
  if (c.trigger.lambda_override)
    out += "lambda = " + format_full(*c.trigger.lambda_override) + "\n";
  out += "eta0 = " + format_full(c.trigger.eta0) + "\n";
  out += "period = " + format_full(c.trigger.period) + "\n\n";

  out += "[sim]\n";
  out += "x0 = " + vector_text(c.sim.x0) + "\n";
  out += "horizon = " + format_full(c.sim.horizon) + "\n";
  out += "dt = " + format_full(c.sim.dt) + "\n";
  out += "grid_step = " + format_full(c.sim.grid_step) + "\n";
  return out;
}

namespace {

// Built-in scenarios. The text doubles as format documentation; see the
// README for the field reference.
const char* const kExample1 = R"(# Second-order plant with matched sinusoidal uncertainty.
[scenario]
name = example1
kind = matched

[plant]
a_nominal = [[0, 1], [1, 0]]
b = [[0], [1]]
delta_coeff = [[0, 0], [1, 1]]
p_min = [-2]
p_max = [2]
p_trajectory = sinusoid
p_amplitude = [2]
p_frequency = 1

[weights]
q = [[10, 0], [0, 10]]
r = [[2]]

[bounds]
f_m = [[8, 8], [8, 8]]

[trigger]
kind = static
sigma = 0.98
theta = 0.1
k = 0.6
eta0 = 0.01
period = 0.001

[sim]
x0 = [0.2, -0.35]
horizon = 4.5
dt = 0.0001
grid_step = 0.01
)";

const char* const kExample2 = R"(# Second-order plant with unmatched sinusoidal uncertainty.
[scenario]
name = example2
kind = unmatched

[plant]
a_nominal = [[0, 1], [1, 0]]
b = [[0], [1]]
delta_coeff = [[0, 1], [0, 0]]
p_min = [-2]
p_max = [2]
p_trajectory = sinusoid
p_amplitude = [2]
p_frequency = 1

[params]
alpha = 1
rho = 0.05
beta = 10
l_formula = printed

[bounds]
f_u = [[0, 0], [0, 0]]

[trigger]
kind = static
sigma = 0.98
theta = 0.1
k = 0.6
eta0 = 0.01
period = 0.001

[sim]
x0 = [0.2, -0.35]
horizon = 3.5
dt = 0.0001
grid_step = 0.01
)";

}  // namespace

std::vector<std::string> preset_names() { return {"example1", "example2"}; }

std::string preset_text(const std::string& name) {
  if (name == "example1") return kExample1;
  if (name == "example2") return kExample2;
  throw Error(ErrorCategory::UnknownPreset, "no preset named '" + name + "'");
}

ScenarioConfig preset(const std::string& name) { return parse_scenario(preset_text(name)); }

ScenarioConfig load_scenario(const std::string& name_or_path) {
  for (const std::string& p : preset_names())
    if (name_or_path == p) return preset(p);
  std::ifstream in(name_or_path, std::ios::binary);
  if (!in)
    throw Error(ErrorCategory::UnknownPreset,
                "'" + name_or_path + "' is neither a preset nor a readable file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

UncertainPlant make_plant(const ScenarioConfig& c) {
  UncertainPlant plant;
  plant.a_nominal = c.a_nominal;
  plant.b = c.b;
  plant.delta_coeffs = c.delta_coeffs;
  plant.p_min = c.p_min;
  plant.p_max = c.p_max;
  plant.p_trajectory = c.p_trajectory;
  return plant;
}

BoundParams make_bound_params(const ScenarioConfig& c) {
  BoundParams bp;
  bp.f_m = c.f_m;
  bp.f = c.f;
  bp.f_u = c.f_u;
  bp.h = c.h;
  bp.alpha = c.alpha;
  bp.rho = c.rho;
  bp.beta = c.beta;
  return bp;
}

void apply_override(ScenarioConfig& c, const std::string& key, const std::string& value) {
  const auto num = [&] { return parse_double(value, 0); };
  const auto mat = [&] { return parse_matrix(value, 0); };
  const auto vec = [&] { return parse_vector(value, 0); };

  if (key == "scenario.name") c.name = value;
  else if (key == "trigger.kind") c.trigger.kind = parse_trigger_kind(value, 0);
  else if (key == "trigger.sigma") c.trigger.sigma = num();
  else if (key == "trigger.theta") c.trigger.theta = num();
  else if (key == "trigger.k") c.trigger.k = num();
  else if (key == "trigger.lambda") c.trigger.lambda_override = num();
  else if (key == "trigger.eta0") c.trigger.eta0 = num();
  else if (key == "trigger.period") c.trigger.period = num();
  else if (key == "sim.x0") c.sim.x0 = vec();
  else if (key == "sim.horizon") c.sim.horizon = num();
  else if (key == "sim.dt") c.sim.dt = num();
  else if (key == "sim.grid_step") c.sim.grid_step = num();
  else if (key == "params.alpha") c.alpha = num();
  else if (key == "params.rho") c.rho = num();
  else if (key == "params.beta") c.beta = num();
  else if (key == "params.l_formula") {
    if (value == "derived") c.l_formula = LFormula::derived;
    else if (value == "printed") c.l_formula = LFormula::printed;
    else invalid("params.l_formula", "must be derived|printed");
  } else if (key == "weights.q") c.q = mat();
  else if (key == "weights.r") c.r = mat();
  else if (key == "bounds.f_m") c.f_m = mat();
  else if (key == "bounds.f") c.f = mat();
  else if (key == "bounds.f_u") c.f_u = mat();
  else if (key == "bounds.h") c.h = mat();
  else invalid(key, "unsupported override path");
}

std::string format_sig9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string trace_csv(const SimTrace& trace) {
  const int n = trace.states.empty() ? 0 : static_cast<int>(trace.states[0].size());
  const int m = trace.inputs.empty() ? 0 : static_cast<int>(trace.inputs[0].size());
  std::string out = "t";
  for (int i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  for (int i = 1; i <= m; ++i) out += ",u" + std::to_string(i);
  out += ",err_norm,threshold,eta,event_flag\n";
  for (std::size_t r = 0; r < trace.times.size(); ++r) {
    out += format_sig9(trace.times[r]);
    for (int i = 0; i < n; ++i) out += "," + format_sig9(trace.states[r][i]);
    for (int i = 0; i < m; ++i) out += "," + format_sig9(trace.inputs[r][i]);
    out += "," + format_sig9(trace.error_norms[r]);
    out += "," + format_sig9(trace.thresholds[r]);
    out += "," + format_sig9(trace.eta[r]);
    out += "," + std::to_string(trace.event_flags[r]);
    out += "\n";
  }
  return out;
}

void write_trace_csv(const SimTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::IoError, "cannot open '" + path + "' for writing");
  out << trace_csv(trace);
  if (!out) throw Error(ErrorCategory::IoError, "write failed for '" + path + "'");
}

SimTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::IoError, "cannot open '" + path + "' for reading");
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCategory::ParseError, "empty trace file");

  // Column counts from the header.
  int n = 0, m = 0;
  {
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ',')) {
      if (col.size() > 1 && col[0] == 'x') ++n;
      if (col.size() > 1 && col[0] == 'u') ++m;
    }
  }

  SimTrace trace;
  std::string row;
  int line = 1;
  while (std::getline(in, row)) {
    ++line;
    if (trim(row).empty()) continue;
    std::stringstream ss(row);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != 1 + n + m + 4)
      parse_fail(line, "wrong number of columns");
    std::size_t k = 0;
    trace.times.push_back(parse_double(cells[k++], line));
    Vec x(static_cast<std::size_t>(n)), u(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i) x[i] = parse_double(cells[k++], line);
    for (int i = 0; i < m; ++i) u[i] = parse_double(cells[k++], line);
    trace.states.push_back(std::move(x));
    trace.inputs.push_back(std::move(u));
    trace.error_norms.push_back(parse_double(cells[k++], line));
    trace.thresholds.push_back(parse_double(cells[k++], line));
    trace.eta.push_back(parse_double(cells[k++], line));
    const int flag = static_cast<int>(parse_double(cells[k++], line));
    trace.event_flags.push_back(flag);
    if (flag) trace.events.push_back(trace.times.back());
  }
  trace.metrics = compute_metrics(trace.events);
  return trace;
}

std::string metrics_table(const std::vector<std::pair<std::string, SimMetrics>>& runs) {
  std::string out = "mechanism,tau_max,tau_min,tau_avg,u_total\n";
  for (const auto& [name, m] : runs) {
    out += name + "," + format_sig9(m.tau_max) + "," + format_sig9(m.tau_min) + "," +
           format_sig9(m.tau_avg) + "," + std::to_string(m.u_total) + "\n";
  }
  return out;
}

void write_metrics_table(const std::vector<std::pair<std::string, SimMetrics>>& runs,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::IoError, "cannot open '" + path + "' for writing");
  out << metrics_table(runs);
  if (!out) throw Error(ErrorCategory::IoError, "write failed for '" + path + "'");
}

}  // namespace etrc
