#pragma once

#include "tracereg/linalg.hpp"

#include <cstdint>
#include <stdexcept>

namespace tracereg {

/// Raw regression data: B = A U + E with A l x p (full column rank) and
/// B l x q.
struct RawInstance {
    Matrix A;
    Matrix B;
};

/// Data after eliminating the observation dimension:
///   A^T A = Q Diag(lambda_diag)^2 Q^T,  H = Diag(lambda_diag)^-1 Q^T A^T B.
/// For X = Q^T U, ||B - A U||_F^2 = ||Lambda X - H||_F^2 - ||H||_F^2 + ||B||_F^2.
struct ReducedProblem {
    Vector lambda_diag;
    Matrix H;
    Matrix Q;
    double normB_sq = 0.0;

    [[nodiscard]] Eigen::Index p() const { return H.rows(); }
    [[nodiscard]] Eigen::Index q() const { return H.cols(); }
    [[nodiscard]] Eigen::Index m() const { return std::min(H.rows(), H.cols()); }
    [[nodiscard]] double lambda_min() const { return lambda_diag.minCoeff(); }
    /// Operator norm of Lambda^-1.
    [[nodiscard]] double inv_lambda_norm() const { return 1.0 / lambda_min(); }

    /// 0.5 * ||Lambda X - H||_F^2
    [[nodiscard]] double fit(const Matrix &x) const;

    void validate() const;
};

/// Problem with A = I: Lambda = I, Q = I and H given directly.
ReducedProblem identity_problem(Matrix H);

/// min 0.5 ||Lambda X - H||^2 + lambda * ||X||_*
struct PenalizedSpec {
    ReducedProblem problem;
    double lambda = 1.0;

    void validate() const;
};

/// min 0.5 ||Lambda X - H||^2  s.t. ||X||_* <= M, solved through the exact
/// penalty gamma * [||X||_* - M]^+ anchored at a strictly feasible xbar.
struct ConstrainedSpec {
    ReducedProblem problem;
    double M = 1.0;
    double gamma = 1.0;
    Matrix xbar;

    void validate() const;
};

/// Build a constrained spec with xbar = 0 and gamma = ||H||_F^2 / M (twice the
/// threshold for that anchor). An explicit gamma may be passed instead.
ConstrainedSpec make_constrained(ReducedProblem problem, double M, double gamma = 0.0);

class RankDeficient : public std::domain_error {
  public:
    RankDeficient(double eigenvalue, double threshold);
    double eigenvalue;
    double threshold;
};

class InfeasibleAnchor : public std::invalid_argument {
  public:
    InfeasibleAnchor(double anchor_norm, double budget);
};

ReducedProblem reduce(const RawInstance &raw);

/// U = Q X.
Matrix recover_U(const ReducedProblem &problem, const Matrix &x);

/// Radius containing the penalized optimum: min{||H||^2/(2 lambda), ||Lambda^-1 H||_*}.
double radius_penalized(const PenalizedSpec &spec);

/// Radius containing the constrained optimum: min{2 ||Lambda H|| / lambda_min^2, M}.
double radius_constrained(const ConstrainedSpec &spec);

/// Smallest penalty for which the penalized and constrained optima coincide
/// (anchor-based bound).
double gamma_bar(const ReducedProblem &problem, double M, const Matrix &xbar);

/// Pull an (approximately) penalized-optimal x back into the budget:
/// (x + theta xbar) / (1 + theta), theta = [||x||_* - M]^+ / (M - ||xbar||_*).
Matrix exact_penalty_recover(const Matrix &x, const Matrix &xbar, double M);

/// Budget M for which a lambda-solution is also a constrained solution.
double everett_budget(const Matrix &x);

/// Random instance with p = 2q, l = 10q and i.i.d. uniform [0,1) entries.
/// A is filled row by row from stream 0 of the seed, B from stream 1.
RawInstance generate_instance(int q, std::uint64_t seed);

} // namespace tracereg
