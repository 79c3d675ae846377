#pragma once

#include "lieint/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lieint {

struct SweepCell {
  /// One value per axis, in axis order.
  std::vector<double> parameters;
  std::optional<FloquetClassification> classification;
  std::size_t generator_count = 0;
  /// Empty on success; the diagnostic of the failure otherwise.
  std::string error;
};

/// Cells in grid order (the last axis varies fastest). Each cell rebuilds the
/// curve with its parameter values and runs the Floquet analysis; a failing
/// cell records its error and the sweep continues. `jobs` <= 0 uses all cores.
std::vector<SweepCell> run_sweep(const RunConfig& base, const SweepSpec& spec, int jobs = 1);

/// Columns: axis parameters, then the recorded groups (max_modulus_deviation,
/// max_abs_lambda, tags, lambda_k_re/lambda_k_im, generator_count), then error.
std::string sweep_csv(const RunConfig& base, const SweepSpec& spec, const std::vector<SweepCell>& cells);

}  // namespace lieint
