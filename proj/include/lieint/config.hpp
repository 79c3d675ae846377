#pragma once

#include "lieint/hamiltonian.hpp"
#include "lieint/milne_pinney.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lieint {

struct NumericsConfig {
  int steps_per_period = 4000;
  std::optional<int> flow_steps_per_period;  // defaults to steps_per_period
  double horizon_periods = 2.0;
  std::optional<std::vector<double>> x0;
  std::optional<std::vector<double>> xi0;
  std::optional<std::vector<double>> alpha;
  int closure_samples = 50;
  double closure_tolerance = 1e-8;
  std::uint64_t seed = 1;
  std::optional<double> jacobi_tolerance;

  int flow_steps() const { return flow_steps_per_period.value_or(steps_per_period); }
};

struct SweepAxis {
  std::string parameter;
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  /// min + i (max - min) / (count - 1), hitting max exactly at the end.
  double value(int i) const;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  /// Column groups to emit; empty means all of kSweepRecordKinds.
  std::vector<std::string> record;

  std::size_t cells() const;
  bool records(const std::string& kind) const;
};

inline const std::vector<std::string> kSweepRecordKinds = {"max_modulus_deviation", "max_modulus", "tags",
                                                           "spectrum", "generator_count"};

struct DomainConstraint {
  std::string coordinate;
  std::optional<double> lower;
  std::optional<double> upper;
};

/// Everything a subcommand needs, after schema validation and preset expansion.
struct RunConfig {
  /// "", "milne_pinney" or "heisenberg_center".
  std::string preset;
  /// Milne-Pinney fields.
  double c = 1.0;
  std::string omega = "1 + 0.1*cos(t)";

  /// Preset name or algebra object; null when absent.
  nlohmann::json algebra;
  std::vector<std::string> hamiltonians;
  std::vector<std::string> coefficients;
  double period = kTwoPi;
  bool periodic = true;
  Environment parameters;
  std::vector<std::string> q_names{"q"};
  std::vector<std::string> p_names{"p"};
  std::vector<DomainConstraint> domain;
  std::map<std::string, std::pair<double, double>> sample_box;
  NumericsConfig numerics;
  std::optional<std::string> output_dir;
  std::optional<SweepSpec> sweep;

  /// True when the file held only an algebra object.
  bool algebra_only = false;
};

/// Schema validation plus semantic checks. Throws ValidationError listing every
/// schema violation.
RunConfig parse_config(const nlohmann::json& document);
RunConfig parse_config_text(std::string_view text);
/// Throws IoError when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

/// Config for the bundled Milne-Pinney run.
RunConfig milne_pinney_config(double c = 1.0, std::string omega = "1 + 0.1*cos(t)");

/// Heisenberg algebra realized by H = (p1, q1 p2, p2) on two degrees of freedom,
/// where H3 = p2 spans the center.
RunConfig heisenberg_center_config();

/// Names a sweep may vary: "c" for Milne-Pinney plus every declared parameter.
std::vector<std::string> tunable_parameters(const RunConfig& config);

/// Copy with parameter values replaced. Unknown names are a ValidationError.
RunConfig with_parameters(const RunConfig& config, const Environment& overrides);

LieAlgebra build_algebra(const RunConfig& config);
CoefficientCurve build_curve(const RunConfig& config);
MPParams build_mp_params(const RunConfig& config);
PhaseSpace build_phase_space(const RunConfig& config);
SampleBox build_sample_box(const RunConfig& config, const PhaseSpace& space);

/// Builds the system and rejects it (ValidationError) if the closure residual
/// exceeds numerics.closure_tolerance.
LieHamiltonianSystem build_system(const RunConfig& config);

/// numerics.x0, else (2, 0) for Milne-Pinney, else the sample-box center.
PhasePoint initial_point(const RunConfig& config, const PhaseSpace& space);

/// Validates count >= 2, min < max and that every axis names a tunable parameter.
void validate_sweep(const RunConfig& config, const SweepSpec& spec);

}  // namespace lieint
