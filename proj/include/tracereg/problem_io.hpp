#pragma once

#include "tracereg/problem.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace tracereg {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Matrices are stored as {"rows": r, "cols": c, "data": [...]} with data in
/// row-major order.
nlohmann::json matrix_to_json(const Matrix &m);
Matrix matrix_from_json(const nlohmann::json &j, const std::string &field);

nlohmann::json instance_to_json(const RawInstance &raw);
nlohmann::json reduced_to_json(const ReducedProblem &problem);

/// An instance file holds either raw (A, B) data or an already reduced
/// problem. `raw` is set only for the former; `reduced` is always filled.
struct LoadedInstance {
    std::optional<RawInstance> raw;
    ReducedProblem reduced;
};

LoadedInstance instance_from_json(const nlohmann::json &j);

void write_json_file(const std::filesystem::path &path, const nlohmann::json &j);
nlohmann::json read_json_file(const std::filesystem::path &path);

LoadedInstance load_instance(const std::filesystem::path &path);

} // namespace tracereg
