#include "tracereg/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Jacobi>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace tracereg {

namespace {

constexpr Eigen::Index kJacobiMaxDim = 64;
constexpr int kMaxSweeps = 80;

// Flip columns so that each column's largest-magnitude entry is positive.
// The same flips are applied to `partner` (the paired singular vectors).
void fix_signs(Matrix &cols, Matrix *partner) {
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < cols.rows(); ++i) {
            const double mag = std::abs(cols(i, j));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (cols.rows() > 0 && cols(arg, j) < 0.0) {
            cols.col(j) = -cols.col(j);
            if (partner)
                partner->col(j) = -partner->col(j);
        }
    }
}

// Fill the columns of `basis` flagged in `missing` with unit vectors
// orthogonal to every other column, trying e_0, e_1, ... in order.
void complete_orthonormal(Matrix &basis, const std::vector<bool> &missing) {
    const Eigen::Index n = basis.rows();
    for (Eigen::Index j = 0; j < basis.cols(); ++j)
        if (missing[static_cast<std::size_t>(j)])
            basis.col(j).setZero();
    Eigen::Index candidate = 0;
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        if (!missing[static_cast<std::size_t>(j)])
            continue;
        for (; candidate < n; ++candidate) {
            Vector e = Vector::Unit(n, candidate);
            for (int pass = 0; pass < 2; ++pass)
                for (Eigen::Index k = 0; k < basis.cols(); ++k)
                    if (k != j)
                        e -= basis.col(k).dot(e) * basis.col(k);
            const double nrm = e.norm();
            if (nrm > 0.5) {
                basis.col(j) = e / nrm;
                ++candidate;
                break;
            }
        }
    }
}

// One-sided (Hestenes) Jacobi on a tall matrix (rows >= cols). `start`, when
// given, is an orthogonal c x c matrix applied first; a good guess for the
// right singular vectors leaves little work for the sweeps.
ThinSVD jacobi_tall(Matrix a, const Matrix *start = nullptr) {
    const Eigen::Index r = a.rows();
    const Eigen::Index c = a.cols();
    Matrix v;
    if (start) {
        v = *start;
        a = a * v;
    } else {
        v = Matrix::Identity(c, c);
    }
    const double tol =
        std::sqrt(static_cast<double>(r)) * std::numeric_limits<double>::epsilon();

    Vector sq(c);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        sq = a.colwise().squaredNorm().transpose();
        for (Eigen::Index i = 0; i + 1 < c; ++i) {
            for (Eigen::Index j = i + 1; j < c; ++j) {
                const double alpha = sq(i), beta = sq(j);
                const double gamma = a.col(i).dot(a.col(j));
                if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta))
                    continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                double t;
                if (std::abs(zeta) > 1e150)
                    t = 0.5 / zeta;
                else
                    t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                const Eigen::JacobiRotation<double> rot(cs, -sn);
                Eigen::Map<Vector> ai(a.col(i).data(), r), aj(a.col(j).data(), r);
                Eigen::internal::apply_rotation_in_the_plane(ai, aj, rot);
                Eigen::Map<Vector> vi(v.col(i).data(), c), vj(v.col(j).data(), c);
                Eigen::internal::apply_rotation_in_the_plane(vi, vj, rot);
                sq(i) = std::max(alpha - t * gamma, 0.0);
                sq(j) = beta + t * gamma;
            }
        }
        if (!rotated)
            break;
    }

    Vector norms(c);
    for (Eigen::Index j = 0; j < c; ++j)
        norms(j) = a.col(j).norm();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(c));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return norms(x) > norms(y); });

    ThinSVD out;
    out.left.resize(r, c);
    out.right.resize(c, c);
    out.singulars.resize(c);
    std::vector<bool> missing(static_cast<std::size_t>(c), false);
    for (Eigen::Index k = 0; k < c; ++k) {
        const Eigen::Index j = order[static_cast<std::size_t>(k)];
        const double s = norms(j);
        out.right.col(k) = v.col(j);
        if (s > std::numeric_limits<double>::min()) {
            out.singulars(k) = s;
            out.left.col(k) = a.col(j) / s;
        } else {
            out.singulars(k) = 0.0;
            missing[static_cast<std::size_t>(k)] = true;
        }
    }
    if (std::find(missing.begin(), missing.end(), true) != missing.end())
        complete_orthonormal(out.left, missing);
    return out;
}

ThinSVD bidiag_svd(const Matrix &h) {
    Eigen::BDCSVD<Matrix> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return ThinSVD{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

} // namespace

bool all_finite(const Matrix &x) { return x.allFinite(); }

Matrix ThinSVD::reconstruct() const {
    return left * singulars.asDiagonal() * right.transpose();
}

Matrix gmap(const Matrix &x) {
    const Eigen::Index p = x.rows(), q = x.cols();
    Matrix g = Matrix::Zero(p + q, p + q);
    g.topRightCorner(q, p) = x.transpose();
    g.bottomLeftCorner(p, q) = x;
    return g;
}

Matrix gmap_adjoint(const Matrix &w, Eigen::Index p, Eigen::Index q) {
    if (w.rows() != p + q || w.cols() != p + q)
        throw std::invalid_argument("gmap_adjoint: matrix is " + std::to_string(w.rows()) + "x" +
                                    std::to_string(w.cols()) + ", expected split (" +
                                    std::to_string(q) + ", " + std::to_string(p) + ")");
    return 2.0 * w.bottomLeftCorner(p, q);
}

ThinSVD thin_svd(const Matrix &h) {
    if (!h.allFinite())
        throw NonFiniteInput("thin_svd");
    const Eigen::Index p = h.rows(), q = h.cols();
    ThinSVD out;
    if (std::min(p, q) > kJacobiMaxDim) {
        out = bidiag_svd(h);
    } else if (p >= q) {
        out = jacobi_tall(h);
    } else {
        ThinSVD t = jacobi_tall(h.transpose());
        out.left = std::move(t.right);
        out.right = std::move(t.left);
        out.singulars = std::move(t.singulars);
    }
    fix_signs(out.left, &out.right);
    return out;
}

ThinSVD thin_svd(const Matrix &h, const ThinSVD &previous) {
    const Eigen::Index p = h.rows(), q = h.cols();
    const Eigen::Index m = std::min(p, q);
    const Matrix &guess = p >= q ? previous.right : previous.left;
    if (m > kJacobiMaxDim || guess.rows() != m || guess.cols() != m)
        return thin_svd(h);
    if (!h.allFinite())
        throw NonFiniteInput("thin_svd");
    ThinSVD out;
    if (p >= q) {
        out = jacobi_tall(h, &guess);
    } else {
        ThinSVD t = jacobi_tall(h.transpose(), &guess);
        out.left = std::move(t.right);
        out.right = std::move(t.left);
        out.singulars = std::move(t.singulars);
    }
    fix_signs(out.left, &out.right);
    return out;
}

double trace_norm(const Matrix &x) {
    if (x.size() == 0)
        return 0.0;
    return thin_svd(x).singulars.sum();
}

GEigensystem g_eigensystem(const ThinSVD &svd) {
    const Eigen::Index p = svd.left.rows();
    const Eigen::Index q = svd.right.rows();
    const Eigen::Index m = svd.singulars.size();
    const double s = 1.0 / std::sqrt(2.0);
    GEigensystem out;
    out.vectors.resize(p + q, 2 * m);
    out.values.resize(2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        out.vectors.col(i).head(q) = s * svd.right.col(i);
        out.vectors.col(i).tail(p) = s * svd.left.col(i);
        out.vectors.col(m + i).head(q) = s * svd.right.col(i);
        out.vectors.col(m + i).tail(p) = -s * svd.left.col(i);
        out.values(i) = svd.singulars(i);
        out.values(m + i) = -svd.singulars(i);
    }
    return out;
}

SymEig sym_eig_psd(const Matrix &s) {
    if (s.rows() != s.cols())
        throw std::invalid_argument("sym_eig_psd: matrix is not square");
    if (!s.allFinite())
        throw NonFiniteInput("sym_eig_psd");
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("sym_eig_psd: eigensolver did not converge");
    const Eigen::Index k = s.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const Vector &ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });
    SymEig out;
    out.values.resize(k);
    out.vectors.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        out.values(i) = ev(order[static_cast<std::size_t>(i)]);
        out.vectors.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
    }
    fix_signs(out.vectors, nullptr);
    return out;
}

} // namespace tracereg
