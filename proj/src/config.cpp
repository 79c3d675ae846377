#include "lieint/config.hpp"

#include "lieint/csv.hpp"
#include "lieint/json_schema.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lieint {

using nlohmann::json;

double SweepAxis::value(int i) const {
  if (i == count - 1) return max;
  return min + (max - min) * i / (count - 1);
}

std::size_t SweepSpec::cells() const {
  std::size_t n = axes.empty() ? 0 : 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(std::max(a.count, 0));
  return n;
}

bool SweepSpec::records(const std::string& kind) const {
  return record.empty() || std::find(record.begin(), record.end(), kind) != record.end();
}

namespace {

std::string joined(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += "\n  " + l;
  return out;
}

std::vector<double> numbers(const json& j) { return j.get<std::vector<double>>(); }

void parse_numerics(const json& j, NumericsConfig& n) {
  if (j.contains("steps_per_period")) n.steps_per_period = j["steps_per_period"].get<int>();
  if (j.contains("flow_steps_per_period")) n.flow_steps_per_period = j["flow_steps_per_period"].get<int>();
  if (j.contains("horizon_periods")) n.horizon_periods = j["horizon_periods"].get<double>();
  if (j.contains("x0")) n.x0 = numbers(j["x0"]);
  if (j.contains("xi0")) n.xi0 = numbers(j["xi0"]);
  if (j.contains("alpha")) n.alpha = numbers(j["alpha"]);
  if (j.contains("closure_samples")) n.closure_samples = j["closure_samples"].get<int>();
  if (j.contains("closure_tolerance")) n.closure_tolerance = j["closure_tolerance"].get<double>();
  if (j.contains("seed")) n.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("jacobi_tolerance")) n.jacobi_tolerance = j["jacobi_tolerance"].get<double>();
}

DomainConstraint parse_domain(const std::string& name, const json& spec) {
  if (spec.size() % 2 != 0) throw ValidationError("domain of '" + name + "' must alternate operator and bound");
  DomainConstraint d{name, std::nullopt, std::nullopt};
  for (std::size_t i = 0; i < spec.size(); i += 2) {
    if (!spec[i].is_string() || !spec[i + 1].is_number()) {
      throw ValidationError("domain of '" + name + "' must look like [\">\", 0.0] or [\">\", 0, \"<\", 5]");
    }
    const std::string op = spec[i].get<std::string>();
    const double bound = spec[i + 1].get<double>();
    if (op == ">") {
      if (d.lower) throw ValidationError("domain of '" + name + "' has two lower bounds");
      d.lower = bound;
    } else if (op == "<") {
      if (d.upper) throw ValidationError("domain of '" + name + "' has two upper bounds");
      d.upper = bound;
    } else {
      throw ValidationError("domain operator must be \">\" or \"<\", got \"" + op + "\"");
    }
  }
  return d;
}

void expand_heisenberg_center(RunConfig& cfg) {
  const RunConfig preset = heisenberg_center_config();
  cfg.algebra = preset.algebra;
  cfg.hamiltonians = preset.hamiltonians;
  cfg.coefficients = preset.coefficients;
  cfg.q_names = preset.q_names;
  cfg.p_names = preset.p_names;
}

void check_semantics(const RunConfig& cfg) {
  if (cfg.algebra_only) return;
  if (cfg.preset.empty() && cfg.algebra.is_null()) {
    throw ValidationError("config needs either \"preset\" or \"algebra\"");
  }
  if (cfg.q_names.size() != cfg.p_names.size()) {
    throw DimensionMismatch("coordinates.p", cfg.q_names.size(), cfg.p_names.size());
  }
  for (const auto& [name, value] : cfg.parameters) {
    if (name == "t") throw ValidationError("'t' is reserved for time and cannot be a parameter");
    if (!std::isfinite(value)) throw ValidationError("parameter '" + name + "' is not finite");
  }
  const auto& n = cfg.numerics;
  if (n.horizon_periods > 1e6) throw ValidationError("numerics.horizon_periods is unreasonably large");
  if (cfg.sweep) validate_sweep(cfg, *cfg.sweep);
}

}  // namespace

RunConfig parse_config(const json& document) {
  if (!document.is_object()) throw ValidationError("config must be a JSON object");
  RunConfig cfg;

  if (document.contains("dim")) {
    json wrapper = {{"$ref", "#/$defs/algebra_object"}, {"$defs", config_schema()["$defs"]}};
    const auto problems = schema_violations(wrapper, document);
    if (!problems.empty()) throw ValidationError("algebra file does not match the schema:" + joined(problems));
    cfg.algebra = document;
    cfg.algebra_only = true;
    return cfg;
  }

  const auto problems = schema_violations(config_schema(), document);
  if (!problems.empty()) throw ValidationError("config does not match the schema:" + joined(problems));

  cfg.preset = document.value("preset", std::string());
  const bool mp = cfg.preset == "milne_pinney";
  if (!mp && (document.contains("c") || document.contains("omega"))) {
    throw ValidationError("\"c\" and \"omega\" are only meaningful with preset milne_pinney");
  }
  if (!cfg.preset.empty()) {
    for (const char* key : {"algebra", "hamiltonians", "coefficients", "coordinates", "period", "periodic"}) {
      if (document.contains(key)) {
        throw ValidationError(std::string("\"") + key + "\" conflicts with preset " + cfg.preset);
      }
    }
  }
  if (mp) {
    cfg.c = document.value("c", 1.0);
    cfg.omega = document.value("omega", cfg.omega);
    cfg.domain = {{"q", 0.0, std::nullopt}};
  } else if (cfg.preset == "heisenberg_center") {
    expand_heisenberg_center(cfg);
  }

  if (document.contains("algebra")) cfg.algebra = document["algebra"];
  if (document.contains("hamiltonians")) cfg.hamiltonians = document["hamiltonians"].get<std::vector<std::string>>();
  if (document.contains("coefficients")) cfg.coefficients = document["coefficients"].get<std::vector<std::string>>();
  if (document.contains("period")) cfg.period = document["period"].get<double>();
  if (document.contains("periodic")) cfg.periodic = document["periodic"].get<bool>();
  if (document.contains("parameters")) {
    for (const auto& [k, v] : document["parameters"].items()) cfg.parameters[k] = v.get<double>();
  }
  if (document.contains("coordinates")) {
    cfg.q_names = document["coordinates"]["q"].get<std::vector<std::string>>();
    cfg.p_names = document["coordinates"]["p"].get<std::vector<std::string>>();
  }
  if (document.contains("domain")) {
    if (mp) throw ValidationError("the milne_pinney preset fixes its domain to q > 0");
    for (const auto& [k, v] : document["domain"].items()) cfg.domain.push_back(parse_domain(k, v));
  }
  if (document.contains("sample_box")) {
    for (const auto& [k, v] : document["sample_box"].items()) {
      const double lo = v[0].get<double>(), hi = v[1].get<double>();
      if (!(lo < hi)) throw ValidationError("sample_box for '" + k + "' needs lo < hi");
      cfg.sample_box[k] = {lo, hi};
    }
  }
  if (document.contains("numerics")) parse_numerics(document["numerics"], cfg.numerics);
  if (document.contains("output") && document["output"].contains("dir")) {
    cfg.output_dir = document["output"]["dir"].get<std::string>();
  }
  if (document.contains("sweep")) {
    SweepSpec spec;
    for (const auto& a : document["sweep"]["axes"]) {
      spec.axes.push_back({a["parameter"].get<std::string>(), a["min"].get<double>(), a["max"].get<double>(),
                           a["count"].get<int>()});
    }
    if (document["sweep"].contains("record")) spec.record = document["sweep"]["record"].get<std::vector<std::string>>();
    cfg.sweep = std::move(spec);
  }
  check_semantics(cfg);
  return cfg;
}

RunConfig parse_config_text(std::string_view text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(document);
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config_text(read_text_file(path)); }

RunConfig milne_pinney_config(double c, std::string omega) {
  RunConfig cfg;
  cfg.preset = "milne_pinney";
  cfg.c = c;
  cfg.omega = std::move(omega);
  cfg.domain = {{"q", 0.0, std::nullopt}};
  return cfg;
}

RunConfig heisenberg_center_config() {
  RunConfig cfg;
  cfg.preset = "heisenberg_center";
  cfg.algebra = "heisenberg3";
  cfg.hamiltonians = {"p1", "q1*p2", "p2"};
  cfg.coefficients = {"cos(t)", "1 + 0.5*sin(t)", "0.3"};
  cfg.q_names = {"q1", "q2"};
  cfg.p_names = {"p1", "p2"};
  return cfg;
}

std::vector<std::string> tunable_parameters(const RunConfig& config) {
  std::vector<std::string> out;
  if (config.preset == "milne_pinney") out.push_back("c");
  for (const auto& [name, value] : config.parameters) {
    (void)value;
    out.push_back(name);
  }
  return out;
}

RunConfig with_parameters(const RunConfig& config, const Environment& overrides) {
  RunConfig out = config;
  for (const auto& [name, value] : overrides) {
    if (config.preset == "milne_pinney" && name == "c") {
      out.c = value;
    } else if (auto it = out.parameters.find(name); it != out.parameters.end()) {
      it->second = value;
    } else {
      throw ValidationError("unknown parameter '" + name + "'");
    }
  }
  return out;
}

LieAlgebra build_algebra(const RunConfig& config) {
  if (config.preset == "milne_pinney") return mp_algebra();
  const json& a = config.algebra;
  if (a.is_string()) return preset_algebra(a.get<std::string>());
  if (!a.is_object()) throw ValidationError("config has no algebra");
  const int n = a["dim"].get<int>();
  const double tol = a.value("jacobi_tolerance", config.numerics.jacobi_tolerance.value_or(kDefaultJacobiTolerance));
  std::vector<std::string> labels;
  if (a.contains("labels")) labels = a["labels"].get<std::vector<std::string>>();
  if (a.contains("tensor")) {
    if (a.contains("brackets")) throw ValidationError("algebra gives both \"tensor\" and \"brackets\"");
    return LieAlgebra::from_tensor(n, a["tensor"].get<std::vector<double>>(), std::move(labels), tol);
  }
  std::vector<StructureConstant> entries;
  if (a.contains("brackets")) {
    for (const auto& b : a["brackets"]) {
      entries.push_back({b["i"].get<int>(), b["j"].get<int>(), b["k"].get<int>(), b["c"].get<double>()});
    }
  }
  return LieAlgebra::from_brackets(n, entries, std::move(labels), a.value("complete_antisymmetric", false), tol);
}

MPParams build_mp_params(const RunConfig& config) {
  MPParams p = mp_params(config.c, config.omega, config.parameters);
  p.seed = config.numerics.seed;
  p.closure_samples = config.numerics.closure_samples;
  return p;
}

CoefficientCurve build_curve(const RunConfig& config) {
  if (config.preset == "milne_pinney") return mp_curve(build_mp_params(config));
  if (config.coefficients.empty()) throw ValidationError("config has no coefficients");
  std::vector<Expression> b;
  for (const auto& s : config.coefficients) b.push_back(parse(s));
  return CoefficientCurve(std::move(b), config.period, config.periodic, config.parameters);
}

PhaseSpace build_phase_space(const RunConfig& config) {
  if (config.preset == "milne_pinney") return mp_basis(build_mp_params(config)).space();
  PhaseSpace names(config.q_names, config.p_names);
  std::vector<CoordinateBound> bounds;
  for (const auto& d : config.domain) {
    const int idx = names.index_of(d.coordinate);
    if (idx < 0) throw ValidationError("domain names unknown coordinate '" + d.coordinate + "'");
    bounds.push_back({idx, d.lower, d.upper});
  }
  return PhaseSpace(config.q_names, config.p_names, std::move(bounds));
}

SampleBox build_sample_box(const RunConfig& config, const PhaseSpace& space) {
  SampleBox box = default_sample_box(space);
  for (const auto& [name, range] : config.sample_box) {
    const int idx = space.index_of(name);
    if (idx < 0) throw ValidationError("sample_box names unknown coordinate '" + name + "'");
    box[static_cast<std::size_t>(idx)] = range;
  }
  return box;
}

LieHamiltonianSystem build_system(const RunConfig& config) {
  const double tol = config.numerics.closure_tolerance;
  auto check = [&](LieHamiltonianSystem sys) {
    if (!sys.closure_ok(tol)) {
      throw ValidationError("Hamiltonians do not realize the algebra: closure residual " +
                            format_real(sys.closure_residual()) + " exceeds " + format_real(tol));
    }
    return sys;
  };
  if (config.preset == "milne_pinney") {
    const MPParams mp = build_mp_params(config);
    if (config.sample_box.empty()) return check(mp_system(mp));
    HamiltonianBasis basis = mp_basis(mp);
    const auto samples = sample_points(build_sample_box(config, basis.space()), mp.closure_samples, mp.seed);
    return check(LieHamiltonianSystem(mp_algebra(), std::move(basis), mp_curve(mp), samples));
  }

  LieAlgebra algebra = build_algebra(config);
  PhaseSpace space = build_phase_space(config);
  if (config.hamiltonians.empty()) throw ValidationError("config has no hamiltonians");
  std::vector<Expression> hs;
  for (const auto& s : config.hamiltonians) hs.push_back(parse(s));
  HamiltonianBasis basis(space, std::move(hs), config.parameters);
  const auto samples = sample_points(build_sample_box(config, space), config.numerics.closure_samples,
                                     config.numerics.seed);
  return check(LieHamiltonianSystem(std::move(algebra), std::move(basis), build_curve(config), samples));
}

PhasePoint initial_point(const RunConfig& config, const PhaseSpace& space) {
  if (config.numerics.x0) {
    const auto& v = *config.numerics.x0;
    if (static_cast<int>(v.size()) != space.dim()) {
      throw DimensionMismatch("numerics.x0", static_cast<std::size_t>(space.dim()), v.size());
    }
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  if (config.preset == "milne_pinney") return Eigen::Vector2d(2.0, 0.0);
  const SampleBox box = build_sample_box(config, space);
  PhasePoint x(space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    x(i) = 0.5 * (box[static_cast<std::size_t>(i)].first + box[static_cast<std::size_t>(i)].second);
  }
  return x;
}

void validate_sweep(const RunConfig& config, const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2) throw ValidationError("sweep needs one or two axes");
  const auto tunable = tunable_parameters(config);
  std::set<std::string> seen;
  for (const auto& a : spec.axes) {
    if (a.count < 2) throw ValidationError("sweep axis '" + a.parameter + "' needs count >= 2");
    if (!(a.min < a.max)) throw ValidationError("sweep axis '" + a.parameter + "' needs min < max");
    if (std::find(tunable.begin(), tunable.end(), a.parameter) == tunable.end()) {
      throw ValidationError("sweep axis names unknown parameter '" + a.parameter + "'");
    }
    if (!seen.insert(a.parameter).second) throw ValidationError("sweep axis '" + a.parameter + "' repeated");
  }
  for (const auto& r : spec.record) {
    if (std::find(kSweepRecordKinds.begin(), kSweepRecordKinds.end(), r) == kSweepRecordKinds.end()) {
      throw ValidationError("unknown sweep record kind '" + r + "'");
    }
  }
}

}  // namespace lieint
