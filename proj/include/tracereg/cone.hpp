#pragma once

#include "tracereg/problem.hpp"
#include "tracereg/problem_io.hpp"
#include "tracereg/solver.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tracereg {

/// Constraint blocks of an exported cone program.
enum class ConeBlock : int {
    soc = 1,     ///< (r + 1, r - 1, vec(Lambda X - H)) in the second-order cone
    psd_gap = 2, ///< Y - G(X) + s I >= 0
    psd_y = 3,   ///< Y >= 0
    linear = 4,  ///< scalar row, >= 0
};

/// One coefficient of an affine constraint entry. `var` = -1 marks the
/// constant term. PSD blocks list the upper triangle only (row <= col); SOC
/// and linear blocks use col = 0.
struct ConeEntry {
    ConeBlock block = ConeBlock::soc;
    Eigen::Index var = -1;
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    double value = 0.0;

    bool operator==(const ConeEntry &) const = default;
};

/// Variables in order: r, s, t (penalized only), vec(X) column-major, then
/// the upper triangle of Y column by column (Y(0,0), Y(0,1), Y(1,1), ...).
///
/// Penalized: min 2r + lambda t, linear row t - m s - Tr Y >= 0.
/// Constrained: min 2r, linear row M - m s - Tr Y >= 0.
struct ConeProgram {
    Formulation formulation = Formulation::penalized;
    Eigen::Index p = 0;
    Eigen::Index q = 0;
    std::vector<std::pair<Eigen::Index, double>> objective;
    std::vector<ConeEntry> entries;

    [[nodiscard]] Eigen::Index n() const { return p + q; }
    [[nodiscard]] Eigen::Index soc_dim() const { return p * q + 2; }
    [[nodiscard]] bool has_t() const { return formulation == Formulation::penalized; }
    [[nodiscard]] Eigen::Index var_r() const { return 0; }
    [[nodiscard]] Eigen::Index var_s() const { return 1; }
    [[nodiscard]] Eigen::Index var_t() const;
    [[nodiscard]] Eigen::Index var_x(Eigen::Index i, Eigen::Index j) const;
    /// Index of Y(i, j) = Y(j, i).
    [[nodiscard]] Eigen::Index var_y(Eigen::Index i, Eigen::Index j) const;
    [[nodiscard]] Eigen::Index num_vars() const;

    bool operator==(const ConeProgram &) const = default;
};

ConeProgram export_penalized(const PenalizedSpec &spec);
ConeProgram export_constrained(const ConstrainedSpec &spec);

/// Values for (r, s, t, X, Y); t is ignored for constrained programs.
struct ConePoint {
    double r = 0.0;
    double s = 0.0;
    double t = 0.0;
    Matrix X;
    Matrix Y;
};

struct ConeCheck {
    bool feasible = false;
    /// Smallest of the SOC residual, the two minimum eigenvalues and the
    /// linear slack.
    double worst_slack = 0.0;
    double objective = 0.0;
    double soc_slack = 0.0;
    double psd_gap_min_eig = 0.0;
    double psd_y_min_eig = 0.0;
    double linear_slack = 0.0;
};

/// Feasible iff every residual is >= -1e-6 (1 + scale), scale being the
/// largest absolute entry among the point's values and the program's
/// constants.
ConeCheck verify(const ConeProgram &program, const ConePoint &point);

/// The point (r, s, t, X, Y) = (||Lambda X - H||^2 / 4, 0, sum sigma(X), X,
/// positive eigen-part of G(X)); for the penalized program its objective is
/// the reduced objective at X.
ConePoint lift(const ReducedProblem &problem, const Matrix &x);

/// Plain-text cone file:
///
///   tracereg-cone 1
///   formulation <penalized|constrained>
///   dims <p> <q> <n>
///   vars <count>
///   cones soc <pq+2> psd <n> psd <n> linear 1
///   objective <nnz>
///   <var> <value>                         (one line per coefficient)
///   entries <count>
///   <block> <var> <row> <col> <value>     (one line per coefficient)
///
/// Entries are sorted by (block, row, col, var); numbers use the shortest
/// round-trip decimal form.
std::string cone_to_string(const ConeProgram &program);
ConeProgram cone_from_string(const std::string &text);

void write_cone_file(const ConeProgram &program, const std::filesystem::path &path);
ConeProgram read_cone_file(const std::filesystem::path &path);

} // namespace tracereg
