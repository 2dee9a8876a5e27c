#include "oracles.hpp"

#include "tracereg/problem.hpp"

#include <doctest.h>

using namespace tracereg;

namespace {

Matrix diag34() {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 3.0;
    h(1, 1) = 4.0;
    return h;
}

} // namespace

TEST_CASE("reduce of the identity design keeps B") {
    std::mt19937_64 gen(20);
    RawInstance raw{Matrix::Identity(3, 3), oracle::random_matrix(3, 2, gen)};
    const ReducedProblem pr = reduce(raw);
    CHECK(pr.lambda_diag.isApprox(Vector::Ones(3)));
    CHECK(pr.Q.isApprox(Matrix::Identity(3, 3)));
    CHECK(pr.H.isApprox(raw.B));

    raw.A = 2.0 * Matrix::Identity(3, 3);
    const ReducedProblem p2 = reduce(raw);
    CHECK(p2.lambda_diag.isApprox(2.0 * Vector::Ones(3)));
    CHECK(p2.H.isApprox(raw.B));
}

TEST_CASE("reduce preserves the objective up to a constant") {
    std::mt19937_64 gen(21);
    const RawInstance raw{oracle::random_matrix(30, 6, gen), oracle::random_matrix(30, 4, gen)};
    const ReducedProblem pr = reduce(raw);
    const Matrix ata = raw.A.transpose() * raw.A;
    CHECK((pr.Q * pr.lambda_diag.array().square().matrix().asDiagonal() * pr.Q.transpose() - ata).norm() <=
          1e-8 * ata.norm());
    CHECK((pr.Q.transpose() * pr.Q - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(pr.normB_sq == doctest::Approx(raw.B.squaredNorm()));
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix U = oracle::random_matrix(6, 4, gen);
        const Matrix X = pr.Q.transpose() * U;
        const double lhs = (raw.B - raw.A * U).squaredNorm() - raw.B.squaredNorm();
        const double rhs = (pr.lambda_diag.asDiagonal() * X - pr.H).squaredNorm() - pr.H.squaredNorm();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        // recover_U inverts the change of variables.
        const Matrix back = recover_U(pr, X);
        CHECK(back.isApprox(U, 1e-12));
        CHECK((raw.B - raw.A * back).squaredNorm() ==
              doctest::Approx(2.0 * pr.fit(X) - pr.H.squaredNorm() + pr.normB_sq).epsilon(1e-8));
        CHECK((oracle::singulars(back) - oracle::singulars(X)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("reduce refuses rank-deficient designs") {
    Matrix a = Matrix::Zero(5, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    RawInstance raw{a, Matrix::Ones(5, 2)};
    try {
        (void)reduce(raw);
        FAIL("expected RankDeficient");
    } catch (const RankDeficient &e) {
        CHECK(e.eigenvalue <= e.threshold);
        CHECK(std::string(e.what()).find("smallest eigenvalue") != std::string::npos);
    }
    CHECK_THROWS_AS(reduce(RawInstance{Matrix::Ones(2, 3), Matrix::Ones(2, 1)}), std::invalid_argument);
    CHECK_THROWS_AS(reduce(RawInstance{Matrix::Identity(3, 3), Matrix::Ones(4, 1)}), std::invalid_argument);
}

TEST_CASE("radius bounds") {
    const ReducedProblem id = identity_problem(diag34());
    CHECK(radius_penalized(PenalizedSpec{id, 1.0}) == doctest::Approx(7.0));
    CHECK(radius_penalized(PenalizedSpec{id, 10.0}) == doctest::Approx(1.25));
    CHECK(radius_penalized(PenalizedSpec{identity_problem(Matrix::Zero(2, 2)), 1.0}) == 0.0);

    CHECK(radius_constrained(make_constrained(id, 1.0)) == doctest::Approx(1.0));
    CHECK(radius_constrained(make_constrained(identity_problem(Matrix::Zero(2, 3)), 5.0)) == 0.0);
    ReducedProblem pr = identity_problem(Matrix::Zero(2, 2));
    pr.H(0, 0) = 1.0;
    pr.lambda_diag << 1.0, 2.0;
    CHECK(radius_constrained(make_constrained(pr, 100.0)) == doctest::Approx(2.0));
}

TEST_CASE("gamma_bar and the default penalty") {
    const ReducedProblem id = identity_problem(diag34());
    CHECK(gamma_bar(id, 10.0, Matrix::Zero(2, 2)) == doctest::Approx(1.25));
    // The least-squares solution as anchor makes the numerator vanish.
    CHECK(gamma_bar(id, 10.0, diag34()) == doctest::Approx(0.0));
    CHECK_THROWS_AS(gamma_bar(id, 7.0, diag34()), InfeasibleAnchor);

    const ConstrainedSpec spec = make_constrained(id, 10.0);
    CHECK(spec.gamma == doctest::Approx(2.5));
    CHECK(spec.gamma > gamma_bar(id, 10.0, spec.xbar));
    ConstrainedSpec low = spec;
    low.gamma = 1.0;
    CHECK_THROWS_AS(low.validate(), std::invalid_argument);
    CHECK(make_constrained(identity_problem(Matrix::Zero(2, 2)), 1.0).gamma > 0.0);
}

TEST_CASE("exact_penalty_recover lands inside the budget") {
    const Matrix x = diag34();
    CHECK(exact_penalty_recover(x, Matrix::Zero(2, 2), 10.0) == x);
    CHECK(exact_penalty_recover(x, Matrix::Zero(2, 2), 3.5).isApprox(x / 2.0));
    CHECK_THROWS_AS(exact_penalty_recover(x, x, 7.0), InfeasibleAnchor);

    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> budget(0.1, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix y = 3.0 * oracle::random_matrix(4, 3, gen);
        const double M = budget(gen);
        const Matrix anchor = 0.1 * M * oracle::random_matrix(4, 3, gen) / 3.0;
        const Matrix z = exact_penalty_recover(y, anchor, M);
        CHECK(oracle::trace_norm(z) <= M + 1e-8 * (1.0 + M));
    }
}

TEST_CASE("everett_budget is the trace norm") {
    CHECK(everett_budget(Matrix::Zero(2, 3)) == 0.0);
    CHECK(everett_budget(diag34()) == doctest::Approx(7.0));
}

TEST_CASE("generate_instance sizes and reproducibility") {
    const RawInstance a = generate_instance(10, 7);
    CHECK(a.A.rows() == 100);
    CHECK(a.A.cols() == 20);
    CHECK(a.B.rows() == 100);
    CHECK(a.B.cols() == 10);
    CHECK(a.A.minCoeff() >= 0.0);
    CHECK(a.A.maxCoeff() < 1.0);

    const RawInstance s1 = generate_instance(1, 99), s2 = generate_instance(1, 99);
    CHECK(s1.A.rows() == 10);
    CHECK(s1.A.cols() == 2);
    CHECK(s1.B.cols() == 1);
    CHECK(s1.A == s2.A);
    CHECK(s1.B == s2.B);
    CHECK(generate_instance(1, 100).A != s1.A);
    CHECK_THROWS_AS(generate_instance(0, 1), std::invalid_argument);

    // 10^6 entries over many seeds.
    double sum = 0.0, lo = 1.0, hi = 0.0;
    long count = 0;
    for (std::uint64_t seed = 0; count < 1'000'000; ++seed) {
        const RawInstance r = generate_instance(10, seed);
        sum += r.A.sum() + r.B.sum();
        lo = std::min({lo, r.A.minCoeff(), r.B.minCoeff()});
        hi = std::max({hi, r.A.maxCoeff(), r.B.maxCoeff()});
        count += r.A.size() + r.B.size();
    }
    CHECK(std::abs(sum / static_cast<double>(count) - 0.5) <= 0.01);
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(PenalizedSpec({identity_problem(diag34()), 0.0}).validate(), std::invalid_argument);
    ReducedProblem pr = identity_problem(diag34());
    pr.lambda_diag(1) = -1.0;
    CHECK_THROWS_AS(pr.validate(), std::invalid_argument);
    pr = identity_problem(diag34());
    pr.H(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(pr.validate(), NonFiniteInput);
}
