#include "oracles.hpp"

#include "tracereg/linalg.hpp"

#include <doctest.h>

using namespace tracereg;

namespace {

double orth_error(const Matrix &m) {
    return (m.transpose() * m - Matrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

void check_svd_invariants(const Matrix &h, const ThinSVD &svd) {
    const Eigen::Index m = std::min(h.rows(), h.cols());
    REQUIRE(svd.singulars.size() == m);
    CHECK(svd.left.rows() == h.rows());
    CHECK(svd.right.rows() == h.cols());
    CHECK(orth_error(svd.left) <= 1e-10);
    CHECK(orth_error(svd.right) <= 1e-10);
    for (Eigen::Index i = 0; i < m; ++i) {
        CHECK(svd.singulars(i) >= 0.0);
        if (i + 1 < m)
            CHECK(svd.singulars(i) >= svd.singulars(i + 1));
    }
    CHECK((svd.reconstruct() - h).norm() <= 1e-8 * (1.0 + h.norm()));
}

} // namespace

TEST_CASE("gmap places X and its transpose off the diagonal") {
    Matrix one(1, 1);
    one << 1.0;
    Matrix expect(2, 2);
    expect << 0, 1, 1, 0;
    CHECK(gmap(one) == expect);
    CHECK(gmap(Matrix::Zero(2, 3)) == Matrix::Zero(5, 5));

    std::mt19937_64 gen(1);
    const Matrix x = oracle::random_matrix(3, 2, gen);
    const Matrix g = gmap(x);
    CHECK(g.isApprox(g.transpose()));
    CHECK((g * g).trace() == doctest::Approx(2.0 * x.squaredNorm()).epsilon(1e-14));
    CHECK(g.topRightCorner(2, 3) == x.transpose());
}

TEST_CASE("gmap_adjoint is the adjoint of gmap") {
    std::mt19937_64 gen(2);
    const Matrix x = oracle::random_matrix(4, 3, gen);
    CHECK(gmap_adjoint(gmap(x), 4, 3).isApprox(2.0 * x));
    CHECK(gmap_adjoint(Matrix::Identity(7, 7), 4, 3) == Matrix::Zero(4, 3));
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = oracle::random_matrix(7, 7, gen);
        const Matrix w = a + a.transpose();
        const Matrix y = oracle::random_matrix(4, 3, gen);
        // Direct trace computation of G(Y) . W.
        double direct = 0.0;
        const Matrix g = gmap(y);
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j)
                direct += g(i, j) * w(i, j);
        CHECK(inner(y, gmap_adjoint(w, 4, 3)) == doctest::Approx(direct).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gmap_adjoint(Matrix::Identity(6, 6), 4, 3), std::invalid_argument);
}

TEST_CASE("thin_svd on simple inputs") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 4.0;
    const ThinSVD svd = thin_svd(d);
    CHECK(svd.singulars(0) == doctest::Approx(4.0));
    CHECK(svd.singulars(1) == doctest::Approx(3.0));
    check_svd_invariants(d, svd);

    const Matrix z = Matrix::Zero(4, 3);
    const ThinSVD zs = thin_svd(z);
    CHECK(zs.singulars == Vector::Zero(3));
    check_svd_invariants(z, zs);

    Matrix bad = Matrix::Ones(2, 2);
    bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(thin_svd(bad), NonFiniteInput);
}

TEST_CASE("thin_svd singular values match the Jacobi eigen oracle") {
    std::mt19937_64 gen(3);
    const std::pair<int, int> shapes[] = {{5, 3}, {3, 5}, {8, 8}, {1, 6}, {12, 4}, {70, 66}};
    for (auto [p, q] : shapes) {
        CAPTURE(p);
        CAPTURE(q);
        const Matrix h = oracle::random_matrix(p, q, gen);
        const ThinSVD svd = thin_svd(h);
        check_svd_invariants(h, svd);
        const Vector s2 = oracle::singular_squares(h);
        CHECK((svd.singulars.array().square().matrix() - s2).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + s2(0)));
    }
}

TEST_CASE("thin_svd handles rank deficiency and repeated values") {
    std::mt19937_64 gen(4);
    const Matrix u = oracle::random_matrix(6, 2, gen), v = oracle::random_matrix(4, 2, gen);
    const Matrix low = u * v.transpose();
    const ThinSVD svd = thin_svd(low);
    check_svd_invariants(low, svd);
    CHECK(svd.singulars(2) <= 1e-12 * svd.singulars(0));

    const Matrix eye = Matrix::Identity(5, 3);
    const ThinSVD es = thin_svd(eye);
    check_svd_invariants(eye, es);
    CHECK(es.singulars.isApprox(Vector::Ones(3)));
}

TEST_CASE("thin_svd sign convention and repeatability") {
    std::mt19937_64 gen(5);
    const Matrix h = oracle::random_matrix(7, 4, gen);
    const ThinSVD a = thin_svd(h), b = thin_svd(h);
    CHECK(a.left == b.left);
    CHECK(a.right == b.right);
    CHECK(a.singulars == b.singulars);
    for (Eigen::Index j = 0; j < a.left.cols(); ++j) {
        Eigen::Index arg = 0;
        a.left.col(j).cwiseAbs().maxCoeff(&arg);
        CHECK(a.left(arg, j) > 0.0);
    }
    // Negating the input flips only the right vectors.
    const ThinSVD n = thin_svd(-h);
    CHECK(n.left.isApprox(a.left));
    CHECK(n.right.isApprox(-a.right));
}

TEST_CASE("warm-started thin_svd agrees with the cold start") {
    std::mt19937_64 gen(6);
    for (auto [p, q] : {std::pair{9, 5}, std::pair{4, 7}}) {
        Matrix h = oracle::random_matrix(p, q, gen);
        ThinSVD prev = thin_svd(h);
        for (int step = 0; step < 50; ++step) {
            h += 0.01 * oracle::random_matrix(p, q, gen);
            const ThinSVD warm = thin_svd(h, prev);
            const ThinSVD cold = thin_svd(h);
            check_svd_invariants(h, warm);
            CHECK((warm.singulars - cold.singulars).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + cold.singulars(0)));
            prev = warm;
        }
    }
    // A previous decomposition of the wrong shape falls back to a cold start.
    const Matrix h = oracle::random_matrix(5, 3, gen);
    CHECK(thin_svd(h, thin_svd(oracle::random_matrix(6, 4, gen))).singulars == thin_svd(h).singulars);
}

TEST_CASE("trace_norm sums singular values") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -4.0;
    CHECK(trace_norm(d) == doctest::Approx(7.0));
    CHECK(trace_norm(Matrix::Zero(3, 2)) == 0.0);
    std::mt19937_64 gen(7);
    const Matrix h = oracle::random_matrix(6, 4, gen);
    CHECK(trace_norm(h) == doctest::Approx(oracle::singulars(h).sum()).epsilon(1e-10));
}

TEST_CASE("g_eigensystem gives eigenpairs of G(h)") {
    Matrix one(1, 1);
    one << 1.0;
    const GEigensystem e1 = g_eigensystem(thin_svd(one));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(e1.values(0) == doctest::Approx(1.0));
    CHECK(e1.values(1) == doctest::Approx(-1.0));
    CHECK(e1.vectors(0, 0) == doctest::Approx(s));
    CHECK(e1.vectors(1, 0) == doctest::Approx(s));
    CHECK(e1.vectors(0, 1) == doctest::Approx(s));
    CHECK(e1.vectors(1, 1) == doctest::Approx(-s));

    const GEigensystem ez = g_eigensystem(thin_svd(Matrix::Zero(3, 2)));
    CHECK(ez.values == Vector::Zero(4));
    CHECK(orth_error(ez.vectors) <= 1e-10);

    std::mt19937_64 gen(8);
    for (auto [p, q] : {std::pair{4, 2}, std::pair{2, 5}, std::pair{3, 3}}) {
        const Matrix h = oracle::random_matrix(p, q, gen);
        const GEigensystem e = g_eigensystem(thin_svd(h));
        const Matrix g = gmap(h);
        CHECK(orth_error(e.vectors) <= 1e-10);
        for (Eigen::Index i = 0; i < e.values.size(); ++i)
            CHECK((g * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm() <= 1e-8 * (1.0 + h.norm()));
    }
}

TEST_CASE("eigenvalues of G(X) are plus and minus the singular values") {
    std::mt19937_64 gen(9);
    for (int p = 1; p <= 7; ++p)
        for (int q = 1; p + q <= 12; ++q) {
            const Matrix x = oracle::random_matrix(p, q, gen);
            const Vector dense = oracle::jacobi_eig(gmap(x)).values;
            const Vector sv = thin_svd(x).singulars;
            const Eigen::Index m = sv.size(), n = p + q;
            Vector expect = Vector::Zero(n);
            expect.head(m) = sv;
            expect.tail(m) = -sv.reverse();
            CHECK((dense - expect).cwiseAbs().maxCoeff() <= 1e-8);
            // Partial sums of the top k eigenvalues equal the Ky Fan k-norms.
            for (Eigen::Index k = 1; k <= m; ++k)
                CHECK(dense.head(k).sum() == doctest::Approx(sv.head(k).sum()).epsilon(1e-10));
        }
}

TEST_CASE("sym_eig_psd sorts and reconstructs") {
    const SymEig id = sym_eig_psd(Matrix::Identity(4, 4));
    CHECK(id.values == Vector::Ones(4));
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 4.0;
    const SymEig de = sym_eig_psd(d);
    CHECK(de.values(0) == doctest::Approx(4.0));
    CHECK(de.values(1) == doctest::Approx(1.0));

    std::mt19937_64 gen(10);
    const Matrix m = oracle::random_matrix(6, 6, gen);
    const Matrix s = m.transpose() * m;
    const SymEig e = sym_eig_psd(s);
    CHECK((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - s).norm() <= 1e-9 * s.norm());
    CHECK(e.values.minCoeff() >= -1e-12);
    for (Eigen::Index i = 0; i + 1 < 6; ++i)
        CHECK(e.values(i) >= e.values(i + 1));
    CHECK((e.values - oracle::jacobi_eig(s).values).cwiseAbs().maxCoeff() <= 1e-10 * s.norm());
    CHECK_THROWS_AS(sym_eig_psd(Matrix::Ones(2, 3)), std::invalid_argument);
}
