#include "lieint/config.hpp"
#include "lieint/json_schema.hpp"
#include "lieint/sweep.hpp"

#include <doctest.h>

using namespace lieint;
using nlohmann::json;

namespace {

const std::string kSource = LIEINT_SOURCE_DIR;

bool rejects(const std::string& text, const std::string& needle = "") {
  try {
    (void)parse_config_text(text);
  } catch (const ValidationError& e) {
    return needle.empty() || std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("schema validator keywords") {
  const json schema = json::parse(R"j({
    "type": "object", "required": ["a"], "additionalProperties": false,
    "properties": {
      "a": {"type": "integer", "minimum": 1, "maximum": 3},
      "b": {"type": "array", "minItems": 1, "maxItems": 2, "items": {"$ref": "#/$defs/pos"}},
      "c": {"enum": ["x", "y"]},
      "d": {"oneOf": [{"type": "string"}, {"type": "number"}]},
      "e": {"type": "number", "exclusiveMinimum": 0}
    },
    "$defs": {"pos": {"type": "number", "exclusiveMinimum": 0}}
  })j");
  CHECK(schema_violations(schema, json::parse(R"j({"a": 2, "b": [1.5], "c": "x", "d": 3, "e": 1})j")).empty());
  CHECK(schema_violations(schema, json::parse(R"j({"a": 2.0})j")).empty());
  CHECK(schema_violations(schema, json::parse(R"j({})j")).size() == 1);
  CHECK(schema_violations(schema, json::parse(R"j({"a": 4})j")).size() == 1);
  CHECK(schema_violations(schema, json::parse(R"j({"a": 1.5})j")).size() == 1);
  CHECK(schema_violations(schema, json::parse(R"j({"a": 1, "z": 0})j")).size() == 1);
  CHECK(schema_violations(schema, json::parse(R"j({"a": 1, "b": []})j")).size() == 1);
  CHECK(schema_violations(schema, json::parse(R"j({"a": 1, "b": [1, -1]})j")).front().find("/b/1") == 0);
  CHECK(schema_violations(schema, json::parse(R"j({"a": 1, "c": "z"})j")).size() == 1);
  CHECK(schema_violations(schema, json::parse(R"j({"a": 1, "d": true})j")).size() == 1);
  CHECK(schema_violations(schema, json::parse(R"j({"a": 1, "e": 0})j")).size() == 1);
}

TEST_CASE("shipped schema parses and every bundled config validates") {
  CHECK(config_schema().contains("$defs"));
  for (const char* name : {"mp_demo.json", "mp_sweep_omega0.json", "mp_stability_chart.json", "mp_sweep_c.json",
                           "heisenberg_center.json", "so3_half_turn.json", "rigid_body_kinematics.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW((void)load_config(kSource + "/configs/" + name));
  }
}

TEST_CASE("Milne-Pinney config") {
  const RunConfig cfg = parse_config_text(R"j({"preset": "milne_pinney", "c": 2.0, "omega": "1 + 0.2*cos(t)",
                                             "numerics": {"steps_per_period": 500, "seed": 3}})j");
  CHECK(cfg.c == 2.0);
  CHECK(cfg.numerics.steps_per_period == 500);
  CHECK(cfg.numerics.seed == 3);
  const LieHamiltonianSystem sys = build_system(cfg);
  CHECK(sys.algebra().dim() == 3);
  CHECK(sys.space().name(0) == "q");
  CHECK(initial_point(cfg, sys.space()) == Eigen::VectorXd(Eigen::Vector2d(2, 0)));
  CHECK(tunable_parameters(cfg) == std::vector<std::string>{"c"});
  CHECK(with_parameters(cfg, {{"c", 0.5}}).c == 0.5);
  CHECK_THROWS_AS(with_parameters(cfg, {{"eps", 0.5}}), ValidationError);
}

TEST_CASE("generic config with domain and sample box") {
  const RunConfig cfg = parse_config_text(R"j({
    "algebra": "sp1R",
    "hamiltonians": ["p*q/2", "-p^2/4 + (q^2 - c/q^2)/4", "-p^2/4 - (q^2 + c/q^2)/4"],
    "coefficients": ["0", "-(1 - w^2)", "-(1 + w^2)"],
    "parameters": {"c": 1.0, "w": 0.3},
    "domain": {"q": [">", 0.0, "<", 10]},
    "sample_box": {"q": [1, 2]}
  })j");
  const LieHamiltonianSystem sys = build_system(cfg);
  CHECK(sys.closure_residual() <= 1e-10);
  REQUIRE(sys.space().bounds().size() == 1);
  CHECK(*sys.space().bounds()[0].upper == 10.0);
  CHECK(build_sample_box(cfg, sys.space())[0] == std::pair(1.0, 2.0));
  CHECK(initial_point(cfg, sys.space())(0) == 1.5);
}

TEST_CASE("config rejections") {
  CHECK(rejects("{", "not valid JSON"));
  CHECK(rejects("[]"));
  CHECK(rejects(R"j({"preset": "vdp"})j"));
  CHECK(rejects(R"j({"preset": "milne_pinney", "c": -1})j", "/c"));
  CHECK(rejects(R"j({"preset": "milne_pinney", "colour": 1})j", "unknown key"));
  CHECK(rejects(R"j({"coefficients": ["1"]})j", "preset"));
  CHECK(rejects(R"j({"algebra": "so3", "c": 1})j", "milne_pinney"));
  CHECK(rejects(R"j({"preset": "milne_pinney", "algebra": "so3"})j", "conflicts"));
  CHECK(rejects(R"j({"algebra": "so3", "coefficients": ["1","0","0"], "numerics": {"steps_per_period": 4}})j"));
  CHECK(rejects(R"j({"algebra": "so3", "domain": {"q": ["=", 0]}})j", "operator"));
  CHECK(rejects(R"j({"algebra": "so3", "domain": {"q": [">", 0, ">", 1]}})j", "two lower"));
  CHECK(rejects(R"j({"algebra": "so3", "sample_box": {"q": [2, 1]}})j", "lo < hi"));
  CHECK(rejects(R"j({"algebra": "so3", "parameters": {"t": 1}})j", "reserved"));
  CHECK(rejects(R"j({"algebra": "so3", "coordinates": {"q": ["a"], "p": ["b", "c"]}})j"));
}

TEST_CASE("sweep specs") {
  const std::string base = R"j({"preset": "milne_pinney", "omega": "w0 + eps*cos(t)", "parameters": {"w0": 0.3, "eps": 0},
                               "sweep": {"axes": [AXES]}})j";
  auto with_axes = [&](const std::string& axes) {
    std::string s = base;
    s.replace(s.find("AXES"), 4, axes);
    return s;
  };
  CHECK_NOTHROW((void)parse_config_text(with_axes(R"j({"parameter": "w0", "min": 0.1, "max": 0.2, "count": 2})j")));
  CHECK(rejects(with_axes(R"j({"parameter": "w0", "min": 0.1, "max": 0.2, "count": 1})j"), "count >= 2"));
  CHECK(rejects(with_axes(R"j({"parameter": "w0", "min": 0.2, "max": 0.2, "count": 3})j"), "min < max"));
  CHECK(rejects(with_axes(R"j({"parameter": "nope", "min": 0.1, "max": 0.2, "count": 3})j"), "unknown parameter"));
  CHECK(rejects(with_axes(R"j({"parameter": "w0", "min": 0.1, "max": 0.2, "count": 2},
                             {"parameter": "w0", "min": 0.1, "max": 0.2, "count": 2})j"), "repeated"));

  const RunConfig cfg = parse_config_text(with_axes(R"j({"parameter": "w0", "min": 0.1, "max": 0.4, "count": 4},
                                                       {"parameter": "eps", "min": 0, "max": 0.1, "count": 2})j"));
  const SweepSpec& spec = *cfg.sweep;
  CHECK(spec.cells() == 8);
  CHECK(spec.axes[0].value(3) == 0.4);
  const auto cells = run_sweep(cfg, spec, 1);
  REQUIRE(cells.size() == 8);
  CHECK(cells[1].parameters == std::vector<double>{0.1, 0.1});
  CHECK(cells[2].parameters[0] == doctest::Approx(0.2));
  CHECK(cells[2].parameters[1] == 0.0);
  for (const auto& c : cells) CHECK(c.error.empty());
  CHECK(sweep_csv(cfg, spec, cells) == sweep_csv(cfg, spec, run_sweep(cfg, spec, 3)));
}

TEST_CASE("a failing sweep cell is isolated") {
  // k = 0 makes the second coefficient undefined.
  const RunConfig cfg = parse_config_text(R"j({"algebra": "so3", "coefficients": ["cos(t)", "1/k", "0.2"],
      "parameters": {"k": 1}, "sweep": {"axes": [{"parameter": "k", "min": -1, "max": 1, "count": 3}]}})j");
  const auto cells = run_sweep(cfg, *cfg.sweep, 2);
  REQUIRE(cells.size() == 3);
  CHECK(cells[0].error.empty());
  CHECK_FALSE(cells[1].error.empty());
  CHECK(cells[2].error.empty());
  const std::string csv = sweep_csv(cfg, *cfg.sweep, cells);
  CHECK(csv.find("division by zero") != std::string::npos);
}

TEST_CASE("bare algebra files") {
  const RunConfig cfg = parse_config_text(R"j({"dim": 2, "brackets": [{"i": 1, "j": 2, "k": 2, "c": 1}], "complete_antisymmetric": true})j");
  CHECK(cfg.algebra_only);
  const LieAlgebra g = build_algebra(cfg);
  CHECK(g.constant(1, 0, 1) == -1.0);
  CHECK_THROWS_AS(build_algebra(load_config(kSource + "/configs/sp1R_bad_tensor.json")), AntisymmetryViolation);
  CHECK(rejects(R"j({"dim": 0})j"));
  CHECK_THROWS_AS(build_algebra(parse_config_text(R"j({"dim": 2, "tensor": [0, 0, 0]})j")), DimensionMismatch);
}
