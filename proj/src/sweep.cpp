#include "lieint/sweep.hpp"

#include "lieint/csv.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace lieint {

namespace {

std::vector<double> cell_values(const SweepSpec& spec, std::size_t index) {
  std::vector<double> values(spec.axes.size());
  for (std::size_t a = spec.axes.size(); a-- > 0;) {
    const auto count = static_cast<std::size_t>(spec.axes[a].count);
    values[a] = spec.axes[a].value(static_cast<int>(index % count));
    index /= count;
  }
  return values;
}

SweepCell compute_cell(const RunConfig& base, const SweepSpec& spec, std::size_t index) {
  SweepCell cell;
  cell.parameters = cell_values(spec, index);
  try {
    Environment overrides;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) overrides[spec.axes[a].parameter] = cell.parameters[a];
    const RunConfig cfg = with_parameters(base, overrides);
    const FloquetAnalysis analysis = analyze_floquet(build_algebra(cfg), build_curve(cfg), cfg.numerics.steps_per_period);
    cell.classification = analysis.classification;
    cell.generator_count = analysis.search.generators.size();
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

std::vector<SweepCell> run_sweep(const RunConfig& base, const SweepSpec& spec, int jobs) {
  validate_sweep(base, spec);
  const std::size_t total = spec.cells();
  std::vector<SweepCell> cells(total);
  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs) : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) cells[i] = compute_cell(base, spec, i);
    return cells;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < total; i = next++) cells[i] = compute_cell(base, spec, i);
    });
  }
  for (auto& t : pool) t.join();
  return cells;
}

std::string sweep_csv(const RunConfig& base, const SweepSpec& spec, const std::vector<SweepCell>& cells) {
  const int n = build_algebra(base).dim();
  std::vector<std::string> header;
  for (const auto& a : spec.axes) header.push_back(a.parameter);
  if (spec.records("max_modulus_deviation")) header.push_back("max_modulus_deviation");
  if (spec.records("max_modulus")) header.push_back("max_abs_lambda");
  if (spec.records("tags")) header.push_back("tags");
  if (spec.records("spectrum")) {
    for (int k = 1; k <= n; ++k) {
      header.push_back("lambda_" + std::to_string(k) + "_re");
      header.push_back("lambda_" + std::to_string(k) + "_im");
    }
  }
  if (spec.records("generator_count")) header.push_back("generator_count");
  header.push_back("error");

  std::string out = csv_line(header);
  for (const auto& cell : cells) {
    std::vector<std::string> row;
    for (double v : cell.parameters) row.push_back(format_real(v));
    const auto* c = cell.classification ? &*cell.classification : nullptr;
    if (spec.records("max_modulus_deviation")) row.push_back(c ? format_real(c->max_modulus_deviation()) : "");
    if (spec.records("max_modulus")) row.push_back(c ? format_real(c->max_modulus()) : "");
    if (spec.records("tags")) row.push_back(c ? c->tag_summary() : "");
    if (spec.records("spectrum")) {
      for (int k = 0; k < n; ++k) {
        const bool have = c && static_cast<std::size_t>(k) < c->eigenpairs.size();
        row.push_back(have ? format_real(c->eigenpairs[static_cast<std::size_t>(k)].value.real()) : "");
        row.push_back(have ? format_real(c->eigenpairs[static_cast<std::size_t>(k)].value.imag()) : "");
      }
    }
    if (spec.records("generator_count")) row.push_back(c ? std::to_string(cell.generator_count) : "");
    row.push_back(cell.error);
    out += csv_line(row);
  }
  return out;
}

}  // namespace lieint
