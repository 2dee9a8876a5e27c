#pragma once

#include "tracereg/problem_io.hpp"
#include "tracereg/solver.hpp"

#include <optional>
#include <string>

namespace tracereg {

/// JSON document for a SolveReport:
///
///   {"format": "tracereg-report", "version": 1,
///    "formulation": "penalized" | "constrained",
///    "X": matrix, "U": matrix (optional, original coordinates Q X),
///    "primal_obj", "dual_obj", "gap", "saddle_gap": number,
///    "iterations": integer, "wall_time": seconds, "converged": bool,
///    "derived": {"L", "sigma_U", "D_U", "r", "iter_bound"},
///    "trajectory": [{"k", "f", "g", "gap"}, ...]}
///
/// Matrices use the layout of matrix_to_json.
nlohmann::json report_to_json(const SolveReport &report, const std::optional<Matrix> &U = std::nullopt);
SolveReport report_from_json(const nlohmann::json &j);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

/// Trajectory as CSV with header "k,f,g,gap" and LF line endings.
std::string trajectory_csv(const std::vector<TrajectorySample> &trajectory);

} // namespace tracereg
