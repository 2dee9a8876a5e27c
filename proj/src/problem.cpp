#include "tracereg/problem.hpp"

#include "tracereg/rng.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace tracereg {

namespace {

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

} // namespace

RankDeficient::RankDeficient(double ev, double thr)
    : std::domain_error("reduce: A^T A is rank deficient (smallest eigenvalue " + fmt_double(ev) +
                        " <= threshold " + fmt_double(thr) + ")"),
      eigenvalue(ev), threshold(thr) {}

InfeasibleAnchor::InfeasibleAnchor(double anchor_norm, double budget)
    : std::invalid_argument("anchor trace norm " + fmt_double(anchor_norm) +
                            " is not strictly below budget M = " + fmt_double(budget)) {}

double ReducedProblem::fit(const Matrix &x) const {
    return 0.5 * (lambda_diag.asDiagonal() * x - H).squaredNorm();
}

void ReducedProblem::validate() const {
    if (H.rows() < 1 || H.cols() < 1)
        throw std::invalid_argument("ReducedProblem: H must be non-empty");
    if (lambda_diag.size() != H.rows())
        throw std::invalid_argument("ReducedProblem: lambda_diag length must equal rows of H");
    if (!(lambda_diag.array() > 0.0).all())
        throw std::invalid_argument("ReducedProblem: lambda_diag entries must be positive");
    if (Q.rows() != H.rows() || Q.cols() != H.rows())
        throw std::invalid_argument("ReducedProblem: Q must be p x p");
    if (!H.allFinite() || !lambda_diag.allFinite() || !Q.allFinite())
        throw NonFiniteInput("ReducedProblem");
}

ReducedProblem identity_problem(Matrix H) {
    ReducedProblem out;
    const Eigen::Index p = H.rows();
    out.lambda_diag = Vector::Ones(p);
    out.Q = Matrix::Identity(p, p);
    out.normB_sq = H.squaredNorm();
    out.H = std::move(H);
    return out;
}

void PenalizedSpec::validate() const {
    problem.validate();
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("PenalizedSpec: lambda must be positive");
}

void ConstrainedSpec::validate() const {
    problem.validate();
    if (!(M > 0.0) || !std::isfinite(M))
        throw std::invalid_argument("ConstrainedSpec: M must be positive");
    if (xbar.rows() != problem.p() || xbar.cols() != problem.q())
        throw std::invalid_argument("ConstrainedSpec: xbar must be p x q");
    const double gbar = gamma_bar(problem, M, xbar);
    if (!(gamma > 0.0) || gamma < gbar)
        throw std::invalid_argument("ConstrainedSpec: gamma = " + fmt_double(gamma) +
                                    " is below the exact-penalty threshold " + fmt_double(gbar));
}

ConstrainedSpec make_constrained(ReducedProblem problem, double M, double gamma) {
    ConstrainedSpec spec;
    spec.xbar = Matrix::Zero(problem.p(), problem.q());
    spec.M = M;
    spec.gamma = gamma > 0.0 ? gamma : problem.H.squaredNorm() / M;
    if (!(spec.gamma > 0.0))
        spec.gamma = 1.0; // H = 0: any positive penalty is exact
    spec.problem = std::move(problem);
    return spec;
}

ReducedProblem reduce(const RawInstance &raw) {
    const Eigen::Index l = raw.A.rows(), p = raw.A.cols(), q = raw.B.cols();
    if (p < 1 || q < 1 || l < p)
        throw std::invalid_argument("reduce: need l >= p >= 1 and q >= 1");
    if (raw.B.rows() != l)
        throw std::invalid_argument("reduce: A and B must have the same number of rows");
    if (!raw.A.allFinite() || !raw.B.allFinite())
        throw NonFiniteInput("reduce");

    const Matrix ata = raw.A.transpose() * raw.A;
    const SymEig eig = sym_eig_psd(ata);
    const double threshold = 1e-10 * std::max(eig.values(0), 0.0);
    const double smallest = eig.values(p - 1);
    if (!(smallest > threshold))
        throw RankDeficient(smallest, threshold);

    ReducedProblem out;
    out.Q = eig.vectors;
    out.lambda_diag = eig.values.array().sqrt();
    out.H = out.lambda_diag.cwiseInverse().asDiagonal() * (out.Q.transpose() * (raw.A.transpose() * raw.B));
    out.normB_sq = raw.B.squaredNorm();
    return out;
}

Matrix recover_U(const ReducedProblem &problem, const Matrix &x) {
    if (x.rows() != problem.Q.cols())
        throw std::invalid_argument("recover_U: X has the wrong number of rows");
    return problem.Q * x;
}

double radius_penalized(const PenalizedSpec &spec) {
    const ReducedProblem &pr = spec.problem;
    const double by_value = pr.H.squaredNorm() / (2.0 * spec.lambda);
    const double by_ls = trace_norm(pr.lambda_diag.cwiseInverse().asDiagonal() * pr.H);
    return std::min(by_value, by_ls);
}

double radius_constrained(const ConstrainedSpec &spec) {
    const ReducedProblem &pr = spec.problem;
    const double lmin = pr.lambda_min();
    const double by_value = 2.0 * (pr.lambda_diag.asDiagonal() * pr.H).norm() / (lmin * lmin);
    return std::min(by_value, spec.M);
}

double gamma_bar(const ReducedProblem &problem, double M, const Matrix &xbar) {
    const double anchor = trace_norm(xbar);
    if (!(anchor < M))
        throw InfeasibleAnchor(anchor, M);
    return problem.fit(xbar) / (M - anchor);
}

Matrix exact_penalty_recover(const Matrix &x, const Matrix &xbar, double M) {
    if (x.rows() != xbar.rows() || x.cols() != xbar.cols())
        throw std::invalid_argument("exact_penalty_recover: x and xbar shapes differ");
    const double anchor = trace_norm(xbar);
    if (!(anchor < M))
        throw InfeasibleAnchor(anchor, M);
    const double excess = std::max(trace_norm(x) - M, 0.0);
    if (excess == 0.0)
        return x;
    const double theta = excess / (M - anchor);
    return (x + theta * xbar) / (1.0 + theta);
}

double everett_budget(const Matrix &x) { return trace_norm(x); }

RawInstance generate_instance(int q, std::uint64_t seed) {
    if (q < 1)
        throw std::invalid_argument("generate_instance: q must be >= 1");
    const Eigen::Index p = 2 * q, l = 10 * q;
    RawInstance raw;
    raw.A.resize(l, p);
    raw.B.resize(l, q);
    CounterRng a_stream(seed, 0), b_stream(seed, 1);
    for (Eigen::Index i = 0; i < l; ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            raw.A(i, j) = a_stream.uniform();
    for (Eigen::Index i = 0; i < l; ++i)
        for (Eigen::Index j = 0; j < q; ++j)
            raw.B(i, j) = b_stream.uniform();
    return raw;
}

} // namespace tracereg
