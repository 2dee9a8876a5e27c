#include "tracereg/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace tracereg {

std::string to_string(Formulation f) {
    return f == Formulation::penalized ? "penalized" : "constrained";
}

void SolverConfig::validate() const {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("SolverConfig: epsilon must be positive");
    if (max_iters < 1)
        throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    if (gap_check_interval < 1)
        throw std::invalid_argument("SolverConfig: gap_check_interval must be >= 1");
}

double SolverDerived::gap_bound(std::int64_t k) const {
    const double kk = static_cast<double>(k);
    return 4.0 * L * D_U / (sigma_U * kk * (kk + 1.0));
}

// ---------------------------------------------------------------------------
// Saddle objective

SaddleObjective::SaddleObjective(const PenalizedSpec &spec, double r)
    : formulation_(Formulation::penalized), problem_(spec.problem), coef_(spec.lambda), r_(r),
      m_(static_cast<double>(spec.problem.m())) {}

SaddleObjective::SaddleObjective(const ConstrainedSpec &spec, double r)
    : formulation_(Formulation::constrained), problem_(spec.problem), coef_(spec.gamma), r_(r),
      M_(spec.M), m_(static_cast<double>(spec.problem.m())) {}

BallSolution SaddleObjective::best_response(const DualImage &u) const {
    return solve_ball(r_, problem_.lambda_diag, problem_.H, (coef_ * m_ * r_) * u.adjoint);
}

double SaddleObjective::f(const DualImage &u, const BallSolution &response) const {
    const double linear = formulation_ == Formulation::constrained ? coef_ * M_ * u.t : 0.0;
    return linear - response.value;
}

double SaddleObjective::f(const DualImage &u) const { return f(u, best_response(u)); }

double SaddleObjective::g(const Matrix &v) const { return g(v, trace_norm(v)); }

double SaddleObjective::g(const Matrix &v, double trace_norm_v) const {
    const double fit = 0.5 * (r_ * problem_.lambda_diag.asDiagonal() * v - problem_.H).squaredNorm();
    const double tn = r_ * trace_norm_v;
    if (formulation_ == Formulation::penalized)
        return -fit - coef_ * tn;
    return -fit - coef_ * std::max(tn - M_, 0.0);
}

DualPair eval_primal_dual(const SaddleObjective &objective, const DualImage &u, const Matrix &v) {
    return {objective.f(u), objective.g(v)};
}

// ---------------------------------------------------------------------------
// Constants

std::int64_t iter_bound(Formulation formulation, double coef, double inv_lambda_norm,
                        Eigen::Index m, Eigen::Index n, double epsilon) {
    const double md = static_cast<double>(m);
    const double log_ratio = std::log(static_cast<double>(n) / md);
    const double spread =
        formulation == Formulation::penalized ? md * log_ratio : md * (1.0 + log_ratio);
    const double bound = 2.0 * std::sqrt(2.0) * coef * inv_lambda_norm / std::sqrt(epsilon) * std::sqrt(spread);
    if (!(bound < 9.0e18))
        return std::numeric_limits<std::int64_t>::max();
    return static_cast<std::int64_t>(std::ceil(bound));
}

namespace {

SolverDerived derive_common(Formulation formulation, const ReducedProblem &pr, double coef, double r,
                            double epsilon) {
    const double m = static_cast<double>(pr.m());
    const double n = static_cast<double>(pr.p() + pr.q());
    const double inv = pr.inv_lambda_norm();
    SolverDerived d;
    d.L = 2.0 * coef * coef * m * m * inv * inv;
    // Constrained: sigma_U = min(a / xi, m) with xi = a / m.
    d.sigma_U = m;
    d.D_U = formulation == Formulation::penalized ? std::log(n / m) : 1.0 + std::log(n / m);
    d.r = r;
    d.iter_bound = iter_bound(formulation, coef, inv, pr.m(), pr.p() + pr.q(), epsilon);
    return d;
}

} // namespace

SolverDerived derive(const PenalizedSpec &spec, const SolverConfig &config) {
    return derive_common(Formulation::penalized, spec.problem, spec.lambda, radius_penalized(spec),
                         config.epsilon);
}

SolverDerived derive(const ConstrainedSpec &spec, const SolverConfig &config) {
    return derive_common(Formulation::constrained, spec.problem, spec.gamma, radius_constrained(spec),
                         config.epsilon);
}

// ---------------------------------------------------------------------------
// The method

namespace {

struct LoopResult {
    Matrix v;            // dual average with the best certified primal value
    double best_g = -std::numeric_limits<double>::infinity();
    double best_f = std::numeric_limits<double>::infinity();
    std::int64_t iterations = 0;
    bool converged = false;
    std::vector<TrajectorySample> trajectory;
};

constexpr std::int64_t kColdRestart = 256;

DualImage blend(const DualImage &a, const DualImage &b, double tau) {
    return {(1.0 - tau) * a.adjoint + tau * b.adjoint, (1.0 - tau) * a.t + tau * b.t};
}

// One prox step per iteration. Dual iterates u, u_sd are convex combinations
// of prox points with different eigenbases; only their images (adjoint, t)
// are needed, and those combine linearly.
LoopResult run_method(const SaddleObjective &obj, const SolverDerived &derived, const SolverConfig &cfg) {
    const ReducedProblem &pr = obj.problem();
    const Eigen::Index p = pr.p(), q = pr.q();
    const double m = static_cast<double>(pr.m());
    const double n = static_cast<double>(p + q);
    const double kappa = derived.sigma_U / derived.L;
    const double c = obj.coef();
    const double r = obj.radius();
    const bool constrained = obj.formulation() == Formulation::constrained;
    const double a_coef = std::log(n / m);
    const double b_coef = std::log(m) - 1.0;

    const DualImage u0{Matrix::Zero(p, q), 1.0};
    DualImage u_sd = u0;
    DualImage u = u0;
    Matrix v = Matrix::Zero(p, q);
    Matrix grad_accum = Matrix::Zero(p, q); // sum_i alpha_i v(u_i)
    double alpha_sum = 0.0;                 // sum_{i<k} alpha_i
    double tau = 1.0;

    // SVDs of the slowly varying h and v are warm-started from the previous
    // iterate, with a cold start every kColdRestart iterations so rounding in
    // the accumulated rotations cannot build up.
    ThinSVD h_svd, v_svd;
    std::int64_t checks = 0;

    LoopResult res;
    res.v = v;
    for (std::int64_t k = 1; k <= cfg.max_iters; ++k) {
        const BallSolution resp = obj.best_response(u);
        const double alpha_prev = 0.5 * static_cast<double>(k); // alpha_{k-1}
        grad_accum += alpha_prev * resp.v;
        alpha_sum += alpha_prev;
        v = (1.0 - tau) * v + tau * resp.v;

        // Prox step: linear term sum_i alpha_i grad f(u_i) = -c m r G(grad_accum).
        const Matrix h = (-c * m * r) * grad_accum;
        const bool cold = k % kColdRestart == 1;
        h_svd = cold ? thin_svd(h) : thin_svd(h, h_svd);
        DualImage ag;
        if (constrained) {
            const double alpha_lin = b_coef + kappa * c * obj.budget() * alpha_sum;
            const EntropyBoxStep step = solve_entropy_box(kappa, 0.0, h_svd, alpha_lin, a_coef);
            ag = {step.point.adjoint(), step.t};
        } else {
            const EntropyStep step = solve_entropy_spectahedron(kappa, 0.0, h_svd);
            ag = {step.point.adjoint(), 1.0};
        }
        u_sd = blend(u_sd, ag, tau);

        const double alpha_k = 0.5 * static_cast<double>(k + 1);
        tau = alpha_k / (alpha_sum + alpha_k);
        u = blend(u_sd, ag, tau);
        res.iterations = k;

        if (k % cfg.gap_check_interval != 0 && k != cfg.max_iters)
            continue;
        const double f = obj.f(u_sd);
        v_svd = checks++ % kColdRestart == 0 ? thin_svd(v) : thin_svd(v, v_svd);
        const double g = obj.g(v, v_svd.singulars.sum());
        if (cfg.record_trajectory)
            res.trajectory.push_back({k, f, g, f - g});
        if (g > res.best_g) {
            res.best_g = g;
            res.v = v;
        }
        res.best_f = std::min(res.best_f, f);
        if (f - g <= cfg.epsilon) {
            res.converged = true;
            break;
        }
    }
    return res;
}

SolveReport trivial_report(Formulation formulation, const ReducedProblem &pr, const SolverDerived &derived) {
    SolveReport rep;
    rep.formulation = formulation;
    rep.X = Matrix::Zero(pr.p(), pr.q());
    rep.primal_obj = pr.fit(rep.X);
    rep.dual_obj = rep.primal_obj;
    rep.converged = true;
    rep.derived = derived;
    return rep;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

SolveReport solve_penalized(const PenalizedSpec &spec, const SolverConfig &config) {
    const auto t0 = std::chrono::steady_clock::now();
    spec.validate();
    config.validate();
    const SolverDerived derived = derive(spec, config);
    if (derived.r == 0.0) {
        SolveReport rep = trivial_report(Formulation::penalized, spec.problem, derived);
        rep.wall_time = seconds_since(t0);
        return rep;
    }
    const SaddleObjective obj(spec, derived.r);
    LoopResult loop = run_method(obj, derived, config);

    SolveReport rep;
    rep.formulation = Formulation::penalized;
    rep.X = derived.r * loop.v;
    rep.primal_obj = -loop.best_g;
    rep.dual_obj = -loop.best_f;
    rep.gap = rep.primal_obj - rep.dual_obj;
    rep.saddle_gap = loop.best_f - loop.best_g;
    rep.iterations = loop.iterations;
    rep.converged = loop.converged;
    rep.derived = derived;
    rep.trajectory = std::move(loop.trajectory);
    rep.wall_time = seconds_since(t0);
    return rep;
}

SolveReport solve_constrained(const ConstrainedSpec &spec, const SolverConfig &config) {
    const auto t0 = std::chrono::steady_clock::now();
    spec.validate();
    config.validate();
    const SolverDerived derived = derive(spec, config);
    if (derived.r == 0.0) {
        SolveReport rep = trivial_report(Formulation::constrained, spec.problem, derived);
        rep.wall_time = seconds_since(t0);
        return rep;
    }
    const SaddleObjective obj(spec, derived.r);
    LoopResult loop = run_method(obj, derived, config);

    SolveReport rep;
    rep.formulation = Formulation::constrained;
    rep.X = exact_penalty_recover(derived.r * loop.v, spec.xbar, spec.M);
    rep.primal_obj = spec.problem.fit(rep.X);
    rep.dual_obj = -loop.best_f;
    rep.gap = rep.primal_obj - rep.dual_obj;
    rep.saddle_gap = loop.best_f - loop.best_g;
    rep.iterations = loop.iterations;
    rep.converged = loop.converged;
    rep.derived = derived;
    rep.trajectory = std::move(loop.trajectory);
    rep.wall_time = seconds_since(t0);
    return rep;
}

} // namespace tracereg
