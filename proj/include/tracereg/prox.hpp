#pragma once

#include "tracereg/linalg.hpp"

#include <stdexcept>

namespace tracereg {

/// Raised when a scalar root finder cannot certify its root within the
/// iteration cap. Never swallowed by the solver.
class RootFindingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kRootTolerance = 1e-12;
inline constexpr int kRootMaxIterations = 200;

/// A point of the capped spectahedron
///   Omega_t = { W symmetric : 0 <= W <= (t/m) I, Tr W = t }
/// stored as W = theta (I - F F^T) + F Diag(weights) F^T with F = basis of
/// 2m orthonormal columns in R^n, n = p + q. The (n - 2m) directions outside
/// F all carry weight theta and are never materialized.
struct FactoredSpectahedronPoint {
    Eigen::Index p = 0;
    Eigen::Index q = 0;
    Eigen::Index cap_m = 0;
    double theta = 0.0;
    Matrix basis;
    Vector weights;
    double trace_t = 1.0;

    [[nodiscard]] Eigen::Index dim() const { return p + q; }

    /// Dense n x n matrix (tests and small problems only).
    [[nodiscard]] Matrix dense() const;

    /// gmap_adjoint(W) evaluated in factored form, O(m p q).
    [[nodiscard]] Matrix adjoint() const;

    /// Largest violation of the Omega_t membership conditions (0 when valid).
    [[nodiscard]] double violation() const;

    /// Uniform point t I / n.
    static FactoredSpectahedronPoint uniform(Eigen::Index p, Eigen::Index q, double t = 1.0);
};

struct BallSubproblemInput {
    double r = 1.0;
    Vector lambda_diag;
    Matrix H;
    Matrix G;
};

struct BallSolution {
    Matrix v;
    double value = 0.0;
    double xi = 0.0;
    int iterations = 0;
};

/// Exact minimizer of 0.5 ||r Lambda v - H||^2 + G . v over ||v||_F <= 1.
/// v(xi) = (r^2 Lambda^2 + xi I)^-1 (r Lambda H - G); xi = 0 when that point
/// is inside the ball, otherwise the root of ||v(xi)||^2 = 1.
BallSolution solve_ball(const BallSubproblemInput &in);
BallSolution solve_ball(double r, const Vector &lambda_diag, const Matrix &H, const Matrix &G);

/// Capped-simplex water-filling: w_i = min(exp(-a_i - 1 - xi), cap) with xi
/// chosen so that sum_i count_i * w_i = 1. `count` lets a block of identical
/// entries be represented once.
struct WaterFill {
    Vector weights;
    double xi = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

WaterFill water_fill(const Vector &a, const Vector &count, double cap);

struct EntropyStep {
    FactoredSpectahedronPoint point;
    /// kappa * (varsigma I + G(h)) . W + Tr(W log W) at the minimizer.
    double value = 0.0;
    double residual = 0.0;
};

/// argmin over Omega_1 of (varsigma I + G(h)) . u + kappa^-1 Tr(u log u).
/// Works from the thin SVD of h so the cost is that of one p x q SVD plus
/// O(m) for the water-filling.
EntropyStep solve_entropy_spectahedron(double kappa, double varsigma, const Matrix &h);
EntropyStep solve_entropy_spectahedron(double kappa, double varsigma, const ThinSVD &svd);

struct EntropyBoxStep {
    double t = 1.0;
    FactoredSpectahedronPoint point;
    /// Value of the inner Omega_1 problem (in its kappa-scaled form).
    double d = 0.0;
    /// Objective of the joint (t, W) problem at the minimizer.
    double value = 0.0;
};

/// argmin over { (t, W) : W in Omega_t, 0 <= t <= 1 } of
///   kappa (varsigma I + G(h)) . W + alpha t + Tr(W log W) + a_coef t log t.
/// Solved as W = t W' with W' from the Omega_1 kernel and
/// t = min(1, exp(-1 - (alpha + d) / (a_coef + 1))).
EntropyBoxStep solve_entropy_box(double kappa, double varsigma, const Matrix &h, double alpha,
                                 double a_coef);
EntropyBoxStep solve_entropy_box(double kappa, double varsigma, const ThinSVD &svd, double alpha,
                                 double a_coef);

} // namespace tracereg
