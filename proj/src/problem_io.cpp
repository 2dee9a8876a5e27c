#include "tracereg/problem_io.hpp"

#include <fstream>

namespace tracereg {

namespace {
constexpr const char *kFormat = "tracereg-instance";
}

nlohmann::json matrix_to_json(const Matrix &m) {
    nlohmann::json data = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            data.push_back(m(i, j));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const nlohmann::json &j, const std::string &field) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw IoError("field '" + field + "' must be an object with rows, cols and data");
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto &data = j.at("data");
    if (rows < 0 || cols < 0 || !data.is_array() ||
        data.size() != static_cast<std::size_t>(rows * cols))
        throw IoError("field '" + field + "': data length does not match rows * cols");
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = data[k++].get<double>();
    return m;
}

nlohmann::json instance_to_json(const RawInstance &raw) {
    return {{"format", kFormat},
            {"version", 1},
            {"kind", "raw"},
            {"A", matrix_to_json(raw.A)},
            {"B", matrix_to_json(raw.B)}};
}

nlohmann::json reduced_to_json(const ReducedProblem &problem) {
    nlohmann::json lam = nlohmann::json::array();
    for (Eigen::Index i = 0; i < problem.lambda_diag.size(); ++i)
        lam.push_back(problem.lambda_diag(i));
    return {{"format", kFormat},
            {"version", 1},
            {"kind", "reduced"},
            {"lambda_diag", std::move(lam)},
            {"H", matrix_to_json(problem.H)},
            {"Q", matrix_to_json(problem.Q)},
            {"normB_sq", problem.normB_sq}};
}

LoadedInstance instance_from_json(const nlohmann::json &j) {
    try {
        if (j.value("format", "") != kFormat)
            throw IoError("not a tracereg-instance document");
        const std::string kind = j.at("kind").get<std::string>();
        LoadedInstance out;
        if (kind == "raw") {
            RawInstance raw{matrix_from_json(j.at("A"), "A"), matrix_from_json(j.at("B"), "B")};
            out.reduced = reduce(raw);
            out.raw = std::move(raw);
        } else if (kind == "reduced") {
            const auto lam = j.at("lambda_diag").get<std::vector<double>>();
            out.reduced.lambda_diag = Eigen::Map<const Vector>(lam.data(), static_cast<Eigen::Index>(lam.size()));
            out.reduced.H = matrix_from_json(j.at("H"), "H");
            out.reduced.Q = j.contains("Q") ? matrix_from_json(j.at("Q"), "Q")
                                            : Matrix::Identity(out.reduced.H.rows(), out.reduced.H.rows());
            out.reduced.normB_sq = j.value("normB_sq", out.reduced.H.squaredNorm());
            out.reduced.validate();
        } else {
            throw IoError("unknown instance kind '" + kind + "'");
        }
        return out;
    } catch (const nlohmann::json::exception &e) {
        throw IoError(std::string("malformed instance: ") + e.what());
    }
}

void write_json_file(const std::filesystem::path &path, const nlohmann::json &j) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
    if (!out)
        throw IoError("write to '" + path.string() + "' failed");
}

nlohmann::json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

LoadedInstance load_instance(const std::filesystem::path &path) {
    return instance_from_json(read_json_file(path));
}

} // namespace tracereg
