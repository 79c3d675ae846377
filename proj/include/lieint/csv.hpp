#pragma once

// Plot-ready CSV tables. Every float is written with 17 significant digits
// ("%.16e"), so output is byte-stable and round-trips exactly.

#include "lieint/floquet.hpp"
#include "lieint/hamiltonian.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace lieint {

std::string format_real(double x);

/// Joins cells with ',' and appends '\n'. Cells containing ',', '"' or a
/// newline are quoted.
std::string csv_line(const std::vector<std::string>& cells);

/// t, xi_1..xi_n
std::string xi_csv(const std::vector<TimedVector>& curve);

/// re_lambda, im_lambda, abs_lambda, admissibility, tag
std::string classification_csv(const FloquetClassification& classification);

/// period_multiple, provenance, residual, v_1..v_n
std::string generators_csv(const std::vector<PeriodicGenerator>& generators, int dim);

/// t, q_1..q_m, p_1..p_m, I_1..I_r with one column per integral.
std::string trajectory_csv(const PhaseTrajectory& trajectory, int degrees,
                           const std::vector<std::function<double(double, const PhasePoint&)>>& integrals);

/// Creates parent directories as needed. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace lieint
