#include "tracereg/report_io.hpp"

#include <charconv>
#include <cmath>

namespace tracereg {

namespace {
constexpr const char *kFormat = "tracereg-report";
}

std::string format_double(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

nlohmann::json report_to_json(const SolveReport &report, const std::optional<Matrix> &U) {
    nlohmann::json traj = nlohmann::json::array();
    for (const TrajectorySample &s : report.trajectory)
        traj.push_back({{"k", s.k}, {"f", s.f}, {"g", s.g}, {"gap", s.gap}});
    nlohmann::json j = {{"format", kFormat},
                        {"version", 1},
                        {"formulation", to_string(report.formulation)},
                        {"X", matrix_to_json(report.X)}};
    if (U)
        j["U"] = matrix_to_json(*U);
    j["primal_obj"] = report.primal_obj;
    j["dual_obj"] = report.dual_obj;
    j["gap"] = report.gap;
    j["saddle_gap"] = report.saddle_gap;
    j["iterations"] = report.iterations;
    j["wall_time"] = report.wall_time;
    j["converged"] = report.converged;
    j["derived"] = {{"L", report.derived.L},
                    {"sigma_U", report.derived.sigma_U},
                    {"D_U", report.derived.D_U},
                    {"r", report.derived.r},
                    {"iter_bound", report.derived.iter_bound}};
    j["trajectory"] = std::move(traj);
    return j;
}

SolveReport report_from_json(const nlohmann::json &j) {
    try {
        if (j.value("format", "") != kFormat)
            throw IoError("not a tracereg-report document");
        if (j.value("version", 0) != 1)
            throw IoError("unsupported tracereg-report version");
        SolveReport rep;
        const std::string form = j.at("formulation").get<std::string>();
        if (form == "penalized")
            rep.formulation = Formulation::penalized;
        else if (form == "constrained")
            rep.formulation = Formulation::constrained;
        else
            throw IoError("unknown formulation '" + form + "'");
        rep.X = matrix_from_json(j.at("X"), "X");
        rep.primal_obj = j.at("primal_obj").get<double>();
        rep.dual_obj = j.at("dual_obj").get<double>();
        rep.gap = j.at("gap").get<double>();
        rep.saddle_gap = j.at("saddle_gap").get<double>();
        rep.iterations = j.at("iterations").get<std::int64_t>();
        rep.wall_time = j.at("wall_time").get<double>();
        rep.converged = j.at("converged").get<bool>();
        const auto &d = j.at("derived");
        rep.derived.L = d.at("L").get<double>();
        rep.derived.sigma_U = d.at("sigma_U").get<double>();
        rep.derived.D_U = d.at("D_U").get<double>();
        rep.derived.r = d.at("r").get<double>();
        rep.derived.iter_bound = d.at("iter_bound").get<std::int64_t>();
        for (const auto &s : j.at("trajectory"))
            rep.trajectory.push_back({s.at("k").get<std::int64_t>(), s.at("f").get<double>(),
                                      s.at("g").get<double>(), s.at("gap").get<double>()});
        return rep;
    } catch (const nlohmann::json::exception &e) {
        throw IoError(std::string("malformed tracereg-report: ") + e.what());
    }
}

std::string trajectory_csv(const std::vector<TrajectorySample> &trajectory) {
    std::string out = "k,f,g,gap\n";
    for (const TrajectorySample &s : trajectory) {
        out += std::to_string(s.k);
        out += ',';
        out += format_double(s.f);
        out += ',';
        out += format_double(s.g);
        out += ',';
        out += format_double(s.gap);
        out += '\n';
    }
    return out;
}

} // namespace tracereg
