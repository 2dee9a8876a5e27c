#pragma once

#include "tracereg/problem.hpp"
#include "tracereg/prox.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tracereg {

enum class Formulation { penalized, constrained };

std::string to_string(Formulation f);

/// Step weights alpha_k. `triangular` is alpha_k = (k + 1) / 2, the only rule
/// currently provided.
enum class AlphaRule { triangular };

struct SolverConfig {
    double epsilon = 1e-8;
    std::int64_t max_iters = 1'000'000;
    std::int64_t gap_check_interval = 1;
    AlphaRule alpha_rule = AlphaRule::triangular;
    bool record_trajectory = false;

    void validate() const;
};

/// Constants of the smooth saddle formulation driving the method.
struct SolverDerived {
    double L = 0.0;       ///< Lipschitz constant of the smooth dual objective
    double sigma_U = 0.0; ///< strong convexity of the entropy prox function
    double D_U = 0.0;     ///< prox diameter
    double r = 0.0;       ///< radius of the ball containing the optimum
    std::int64_t iter_bound = 0;

    /// A priori bound on the duality gap after k >= 1 iterations.
    [[nodiscard]] double gap_bound(std::int64_t k) const;
};

struct TrajectorySample {
    std::int64_t k = 0;
    double f = 0.0;
    double g = 0.0;
    double gap = 0.0;
};

struct SolveReport {
    Formulation formulation = Formulation::penalized;
    /// Solution in reduced coordinates (unscaled).
    Matrix X;
    /// Objective of the reduced problem at X.
    double primal_obj = 0.0;
    /// Certified lower bound on the optimal value.
    double dual_obj = 0.0;
    double gap = 0.0;
    /// f - g of the scaled saddle problem at the reported pair.
    double saddle_gap = 0.0;
    std::int64_t iterations = 0;
    double wall_time = 0.0;
    bool converged = false;
    SolverDerived derived;
    std::vector<TrajectorySample> trajectory;
};

/// A point u of the dual set through the two quantities the method needs:
/// gmap_adjoint(W) (p x q) and the trace t of W.
struct DualImage {
    Matrix adjoint;
    double t = 1.0;
};

/// The scaled saddle function
///   phi(u, v) = -c [m r G(v) . W - M t] - 0.5 ||r Lambda v - H||^2
/// over u in Omega_1 (penalized, c = lambda, M t term absent) or the
/// (t, Omega_t) box (constrained, c = gamma), with v in the unit ball.
class SaddleObjective {
  public:
    SaddleObjective(const PenalizedSpec &spec, double r);
    SaddleObjective(const ConstrainedSpec &spec, double r);

    [[nodiscard]] Formulation formulation() const { return formulation_; }
    [[nodiscard]] const ReducedProblem &problem() const { return problem_; }
    [[nodiscard]] double coef() const { return coef_; }
    [[nodiscard]] double radius() const { return r_; }
    [[nodiscard]] double budget() const { return M_; }

    /// Maximizer v(u) of phi(u, .) together with the ball subproblem value.
    [[nodiscard]] BallSolution best_response(const DualImage &u) const;

    /// f(u) = max_v phi(u, v).
    [[nodiscard]] double f(const DualImage &u) const;
    [[nodiscard]] double f(const DualImage &u, const BallSolution &response) const;

    /// g(v) = min_u phi(u, v); -g(v) is the reduced objective at X = r v.
    [[nodiscard]] double g(const Matrix &v) const;
    [[nodiscard]] double g(const Matrix &v, double trace_norm_v) const;

  private:
    Formulation formulation_;
    ReducedProblem problem_;
    double coef_;
    double r_;
    double M_ = 0.0;
    double m_;
};

struct DualPair {
    double f = 0.0;
    double g = 0.0;
};

DualPair eval_primal_dual(const SaddleObjective &objective, const DualImage &u, const Matrix &v);

SolverDerived derive(const PenalizedSpec &spec, const SolverConfig &config);
SolverDerived derive(const ConstrainedSpec &spec, const SolverConfig &config);

/// Ceiling of the a priori iteration complexity for reaching gap epsilon.
/// `coef` is lambda (penalized) or gamma (constrained).
std::int64_t iter_bound(Formulation formulation, double coef, double inv_lambda_norm,
                        Eigen::Index m, Eigen::Index n, double epsilon);

SolveReport solve_penalized(const PenalizedSpec &spec, const SolverConfig &config = {});
SolveReport solve_constrained(const ConstrainedSpec &spec, const SolverConfig &config = {});

} // namespace tracereg
