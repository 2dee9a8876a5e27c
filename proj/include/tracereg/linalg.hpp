#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace tracereg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when a numerical kernel receives NaN or infinite entries.
class NonFiniteInput : public std::invalid_argument {
  public:
    explicit NonFiniteInput(const std::string &where)
        : std::invalid_argument(where + ": input contains non-finite entries") {}
};

/// Thin singular value decomposition h = left * Diag(singulars) * right^T.
///
/// left is p x m, right is q x m with m = min(p, q). Singular values are
/// nonincreasing and zero values are kept, so the length is always m.
struct ThinSVD {
    Matrix left;
    Vector singulars;
    Matrix right;

    [[nodiscard]] Eigen::Index rows() const { return left.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return right.rows(); }
    [[nodiscard]] Eigen::Index rank_bound() const { return singulars.size(); }
    [[nodiscard]] Matrix reconstruct() const;
};

/// The 2m eigenpairs of G(h) carrying the nonzero part of its spectrum.
/// Column i < m is (eta_i; xi_i)/sqrt(2) with value sigma_i, column m + i is
/// (eta_i; -xi_i)/sqrt(2) with value -sigma_i. Coordinates are ordered with
/// the q "column space" entries first, matching G(X) = [[0, X^T], [X, 0]].
struct GEigensystem {
    Matrix vectors;
    Vector values;
};

/// Eigen-decomposition of a symmetric matrix, values sorted nonincreasing.
struct SymEig {
    Vector values;
    Matrix vectors;
};

/// Symmetric embedding G(X) = [[0, X^T], [X, 0]] of a p x q matrix.
Matrix gmap(const Matrix &x);

/// Adjoint of gmap under the trace inner product: twice the bottom-left p x q
/// block of W. `p` and `q` declare the block split; W must be (p+q) x (p+q).
Matrix gmap_adjoint(const Matrix &w, Eigen::Index p, Eigen::Index q);

/// Thin SVD with a fixed sign convention: the largest-magnitude entry of each
/// left singular vector is positive (ties go to the lowest row index).
///
/// One-sided Jacobi on the smaller Gram dimension when min(p, q) <= 64,
/// bidiagonalization-based otherwise.
ThinSVD thin_svd(const Matrix &h);

/// thin_svd started from the vectors of a nearby matrix; the result agrees
/// with the cold start up to rounding. Falls back to thin_svd when `previous`
/// has the wrong shape or min(p, q) > 64.
ThinSVD thin_svd(const Matrix &h, const ThinSVD &previous);

/// Sum of the singular values (trace norm).
double trace_norm(const Matrix &x);

GEigensystem g_eigensystem(const ThinSVD &svd);

/// Symmetric eigensolver. Eigenvectors follow the same sign convention as
/// thin_svd; ties in value keep the solver's order.
SymEig sym_eig_psd(const Matrix &s);

/// Frobenius inner product X . Y = Tr(X^T Y).
inline double inner(const Matrix &x, const Matrix &y) {
    return (x.array() * y.array()).sum();
}

bool all_finite(const Matrix &x);

} // namespace tracereg
