#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "etrc/errors.hpp"
#include "etrc/scenario_io.hpp"

using namespace etrc;

namespace {

/// A configuration exercising every optional field at once.
ScenarioConfig full_config() {
  ScenarioConfig c;
  c.name = "kitchen-sink";
  c.kind = UncertaintyKind::unmatched;
  c.a_nominal = Matrix{{0, 1}, {1, 0}};
  c.b = Matrix::column({0.0, 1.0});
  c.delta_coeffs = {Matrix{{0, 1}, {0, 0}}, Matrix{{0, 0}, {0.25, 0}}};
  c.p_min = {-2.0, -1.0};
  c.p_max = {2.0, 1.0};
  c.p_trajectory.kind = PTrajectory::Kind::piecewise;
  c.p_trajectory.times = {0.0, 0.5, 2.0};
  c.p_trajectory.values = {{0.0, 0.1}, {1.5, -0.9}, {-2.0, 1.0}};
  c.q = Matrix::diagonal({3.0, 4.0});
  c.r = Matrix{{2.0}};
  c.alpha = 1.25;
  c.rho = 0.05;
  c.beta = 10.0;
  c.l_formula = LFormula::printed;
  c.f_u = Matrix::zeros(2, 2);
  c.h = Matrix::diagonal({0.0, 4.2});
  c.trigger.kind = TriggerKind::dynamic_rule;
  c.trigger.sigma = 0.9;
  c.trigger.theta = 0.2;
  c.trigger.k = 0.3;
  c.trigger.lambda_override = 0.017;
  c.trigger.eta0 = 0.02;
  c.trigger.period = 0.002;
  c.sim.x0 = {0.1, -0.2};
  c.sim.horizon = 1.5;
  c.sim.dt = 5e-4;
  c.sim.grid_step = 0.125;
  return c;
}

SimTrace tiny_trace() {
  SimTrace t;
  t.times = {0.0, 0.1, 0.2, 0.3};
  t.states = {{0.5, -0.25}, {0.4, -0.2}, {0.3, -0.15}, {0.25, -0.125}};
  t.inputs = {{1.5}, {1.5}, {0.75}, {0.5}};
  t.error_norms = {0.0, 0.125, 0.0, 0.0};
  t.thresholds = {0.25, 0.2, 0.15, 0.125};
  t.eta = {0.01, 0.005, 0.0025, 0.00125};
  t.event_flags = {1, 0, 1, 1};
  t.events = {0.0, 0.2, 0.3};
  t.metrics = compute_metrics(t.events);
  return t;
}

}  // namespace

TEST_SUITE("scenario_io") {

TEST_CASE("built-in scenarios parse with their documented fields") {
  const ScenarioConfig c1 = preset("example1");
  CHECK(c1.name == "example1");
  CHECK(c1.kind == UncertaintyKind::matched);
  CHECK(c1.a_nominal == Matrix{{0, 1}, {1, 0}});
  CHECK(c1.b == Matrix::column({0.0, 1.0}));
  REQUIRE(c1.delta_coeffs.size() == 1);
  CHECK(c1.delta_coeffs[0] == Matrix{{0, 0}, {1, 1}});
  REQUIRE(c1.q.has_value());
  CHECK(*c1.q == 10.0 * Matrix::identity(2));
  REQUIRE(c1.r.has_value());
  CHECK((*c1.r)(0, 0) == 2.0);
  REQUIRE(c1.f_m.has_value());
  CHECK(*c1.f_m == Matrix{{8, 8}, {8, 8}});
  CHECK(c1.trigger.sigma == 0.98);
  CHECK(c1.trigger.theta == 0.1);
  CHECK(c1.trigger.k == 0.6);
  CHECK(c1.trigger.lambda() == doctest::Approx((1.0 - 0.98) * 0.6));
  CHECK(c1.trigger.eta0 == 0.01);
  CHECK(c1.trigger.period == 1e-3);
  CHECK(c1.sim.x0 == Vec{0.2, -0.35});
  CHECK(c1.sim.horizon == 4.5);
  CHECK(c1.sim.dt == 1e-4);

  const ScenarioConfig c2 = preset("example2");
  CHECK(c2.kind == UncertaintyKind::unmatched);
  CHECK(c2.delta_coeffs[0] == Matrix{{0, 1}, {0, 0}});
  CHECK(c2.alpha == 1.0);
  CHECK(c2.rho == 0.05);
  CHECK(c2.beta == 10.0);
  CHECK(c2.l_formula == LFormula::printed);
  REQUIRE(c2.f_u.has_value());
  CHECK(*c2.f_u == Matrix::zeros(2, 2));
  CHECK_FALSE(c2.h.has_value());
  CHECK(c2.sim.horizon == 3.5);
}

TEST_CASE("serialization round-trips the built-in scenarios exactly") {
  for (const std::string& name : preset_names()) {
    const ScenarioConfig c = preset(name);
    CHECK(parse_scenario(serialize_scenario(c)) == c);
  }
}

TEST_CASE("serialization round-trips every optional field exactly") {
  const ScenarioConfig c = full_config();
  const ScenarioConfig back = parse_scenario(serialize_scenario(c));
  CHECK(back == c);
  // Twice more to make sure the fixed point is immediate.
  CHECK(serialize_scenario(back) == serialize_scenario(c));
}

TEST_CASE("parse errors carry the offending line number") {
  const std::string bad_key = "[scenario]\nname = x\nbogus_key = 1\n";
  try {
    parse_scenario(bad_key);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_scenario("[nosuch]\n"), Error);
  CHECK_THROWS_AS(parse_scenario("key_outside_section = 1\n"), Error);
  CHECK_THROWS_AS(parse_scenario("[sim]\nx0 = [1, oops]\n"), Error);
  CHECK_THROWS_AS(parse_scenario("[weights]\nq = [[1, 2], [3]]\n"), Error);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nname no equals sign\n"), Error);
}

TEST_CASE("inconsistent configurations are refused with a field name") {
  // sigma outside (0, 1)
  std::string text = preset_text("example1");
  ScenarioConfig c = parse_scenario(text);
  c.trigger.sigma = 1.2;
  CHECK_THROWS_AS(parse_scenario(serialize_scenario(c)), Error);

  // state dimension mismatch
  c = parse_scenario(text);
  c.sim.x0 = {1.0};
  CHECK_THROWS_AS(parse_scenario(serialize_scenario(c)), Error);

  // trajectory leaving the parameter box
  c = parse_scenario(text);
  c.p_trajectory.amplitude = {3.0};
  try {
    parse_scenario(serialize_scenario(c));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::ValidationError);
    CHECK(std::string(e.what()).find("p_amplitude") != std::string::npos);
  }

  // matched scenario without weights
  c = parse_scenario(text);
  c.q.reset();
  CHECK_THROWS_AS(parse_scenario(serialize_scenario(c)), Error);
}

TEST_CASE("dotted-path overrides reach every documented field") {
  ScenarioConfig c = preset("example1");
  apply_override(c, "trigger.sigma", "0.5");
  CHECK(c.trigger.sigma == 0.5);
  apply_override(c, "trigger.kind", "dynamic");
  CHECK(c.trigger.kind == TriggerKind::dynamic_rule);
  apply_override(c, "sim.horizon", "2.5");
  CHECK(c.sim.horizon == 2.5);
  apply_override(c, "sim.x0", "[1, 2]");
  CHECK(c.sim.x0 == Vec{1.0, 2.0});
  apply_override(c, "weights.q", "[[1, 0], [0, 1]]");
  CHECK(*c.q == Matrix::identity(2));
  apply_override(c, "params.l_formula", "derived");
  CHECK(c.l_formula == LFormula::derived);
  CHECK_THROWS_AS(apply_override(c, "sim.flux_capacitor", "1"), Error);
}

TEST_CASE("scenarios load from preset names and from files") {
  CHECK(load_scenario("example2").name == "example2");

  const std::string path = "roundtrip_scenario.ini";
  {
    std::ofstream out(path);
    out << serialize_scenario(preset("example1"));
  }
  CHECK(load_scenario(path) == preset("example1"));
  std::remove(path.c_str());

  try {
    load_scenario("example99");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::UnknownPreset);
  }
}

TEST_CASE("trace CSV layout: exact header, newline endings, 9 digits") {
  const std::string csv = trace_csv(tiny_trace());
  CHECK(csv.rfind("t,x1,x2,u1,err_norm,threshold,eta,event_flag\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.back() == '\n');
  // Second row: decimal points, comma separation, the flag as an integer.
  CHECK(csv.find("0.1,0.4,-0.2,1.5,0.125,0.2,0.005,0\n") != std::string::npos);
}

TEST_CASE("nine significant digits survive the CSV format") {
  CHECK(format_sig9(0.0537240964) == "0.0537240964");
  CHECK(format_sig9(123456789.0) == "123456789");
  CHECK(format_sig9(-2.5e-7) == "-2.5e-07");
}

TEST_CASE("a written trace reads back with identical events and metrics") {
  const SimTrace t = tiny_trace();
  const std::string path = "tiny_trace.csv";
  write_trace_csv(t, path);
  const SimTrace back = read_trace_csv(path);
  std::remove(path.c_str());

  REQUIRE(back.times.size() == t.times.size());
  // Short decimal values round-trip bit-exact through %.9g.
  CHECK(back.times == t.times);
  CHECK(back.states == t.states);
  CHECK(back.inputs == t.inputs);
  CHECK(back.error_norms == t.error_norms);
  CHECK(back.eta == t.eta);
  CHECK(back.event_flags == t.event_flags);
  CHECK(back.events == t.events);
  CHECK(back.metrics.tau_max == t.metrics.tau_max);
  CHECK(back.metrics.u_total == t.metrics.u_total);
}

TEST_CASE("metrics tables print the reporting layout") {
  CHECK(metrics_table({}) == "mechanism,tau_max,tau_min,tau_avg,u_total\n");

  SimMetrics m;
  m.tau_max = 0.0683;
  m.tau_min = 0.0302;
  m.tau_avg = 0.0537240964;
  m.u_total = 84;
  const std::string table = metrics_table({{"static", m}});
  CHECK(table ==
        "mechanism,tau_max,tau_min,tau_avg,u_total\n"
        "static,0.0683,0.0302,0.0537240964,84\n");
}

TEST_CASE("io failures surface as such") {
  CHECK_THROWS_AS(write_trace_csv(tiny_trace(), "/nonexistent-dir/x.csv"), Error);
  CHECK_THROWS_AS(read_trace_csv("/nonexistent-dir/x.csv"), Error);
}

}  // TEST_SUITE
