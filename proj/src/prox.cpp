#include "tracereg/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tracereg {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

} // namespace

// ---------------------------------------------------------------------------
// FactoredSpectahedronPoint

Matrix FactoredSpectahedronPoint::dense() const {
    const Eigen::Index n = dim();
    Matrix w = theta * Matrix::Identity(n, n);
    if (basis.cols() > 0)
        w += basis * (weights.array() - theta).matrix().asDiagonal() * basis.transpose();
    return w;
}

Matrix FactoredSpectahedronPoint::adjoint() const {
    if (basis.cols() == 0)
        return Matrix::Zero(p, q);
    // The identity part has no off-diagonal block.
    const Vector shifted = (weights.array() - theta).matrix();
    return 2.0 * basis.bottomRows(p) * shifted.asDiagonal() * basis.topRows(q).transpose();
}

double FactoredSpectahedronPoint::violation() const {
    const double upper = trace_t / static_cast<double>(cap_m);
    const Eigen::Index n = dim();
    double worst = 0.0;
    auto bound = [&](double x) {
        worst = std::max(worst, -x);
        worst = std::max(worst, x - upper);
    };
    bound(theta);
    for (Eigen::Index i = 0; i < weights.size(); ++i)
        bound(weights(i));
    const double trace = static_cast<double>(n - basis.cols()) * theta + weights.sum();
    worst = std::max(worst, std::abs(trace - trace_t));
    if (basis.cols() > 0) {
        const Matrix gram = basis.transpose() * basis;
        worst = std::max(worst, (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff());
    }
    return worst;
}

FactoredSpectahedronPoint FactoredSpectahedronPoint::uniform(Eigen::Index p, Eigen::Index q, double t) {
    FactoredSpectahedronPoint u;
    u.p = p;
    u.q = q;
    u.cap_m = std::min(p, q);
    u.theta = t / static_cast<double>(p + q);
    u.trace_t = t;
    u.basis.resize(p + q, 0);
    u.weights.resize(0);
    return u;
}

// ---------------------------------------------------------------------------
// Frobenius-ball quadratic

BallSolution solve_ball(const BallSubproblemInput &in) {
    return solve_ball(in.r, in.lambda_diag, in.H, in.G);
}

BallSolution solve_ball(double r, const Vector &lambda_diag, const Matrix &H, const Matrix &G) {
    const Eigen::Index p = H.rows();
    const Vector diag = (r * r) * lambda_diag.array().square().matrix();
    const Matrix c = (r * lambda_diag).asDiagonal() * H - G;
    const Vector row_sq = c.rowwise().squaredNorm();

    // psi(xi) = sum_i row_sq_i / (diag_i + xi)^2 - 1
    auto psi_and_slope = [&](double xi, double &slope) {
        double s = 0.0, ds = 0.0;
        for (Eigen::Index i = 0; i < p; ++i) {
            const double d = diag(i) + xi;
            const double t = row_sq(i) / (d * d);
            s += t;
            ds -= 2.0 * t / d;
        }
        slope = ds;
        return s - 1.0;
    };

    BallSolution out;
    double slope = 0.0;
    double psi = psi_and_slope(0.0, slope);
    double xi = 0.0;
    if (psi > 0.0) {
        // psi is strictly decreasing; ||c||_F / xi <= 1 bounds the root.
        double lo = 0.0, hi = std::sqrt(row_sq.sum());
        double psi_hi = psi_and_slope(hi, slope);
        while (psi_hi > 0.0) {
            lo = hi;
            hi *= 2.0;
            psi_hi = psi_and_slope(hi, slope);
        }
        xi = lo;
        psi = psi_and_slope(xi, slope);
        int it = 0;
        for (; it < kRootMaxIterations; ++it) {
            if (std::abs(psi) <= kRootTolerance)
                break;
            if (psi > 0.0)
                lo = xi;
            else
                hi = xi;
            // Newton on 1/||v(xi)|| - 1, which is close to linear in xi.
            const double norm = std::sqrt(psi + 1.0);
            const double phi = 1.0 / norm - 1.0;
            const double dphi = -0.5 * slope / (norm * norm * norm);
            double next = dphi != 0.0 ? xi - phi / dphi : 0.5 * (lo + hi);
            if (!(next > lo && next < hi))
                next = 0.5 * (lo + hi);
            if (next == xi)
                break;
            xi = next;
            psi = psi_and_slope(xi, slope);
        }
        if (std::abs(psi) > kRootTolerance && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi)
            throw RootFindingError("solve_ball: secular equation residual " + std::to_string(psi) +
                                   " after " + std::to_string(it) + " iterations");
        out.iterations = it;
    }
    out.xi = xi;
    out.v = (diag.array() + xi).inverse().matrix().asDiagonal() * c;
    out.value = 0.5 * (r * lambda_diag.asDiagonal() * out.v - H).squaredNorm() + inner(G, out.v);
    return out;
}

// ---------------------------------------------------------------------------
// Water-filling on the capped simplex

WaterFill water_fill(const Vector &a, const Vector &count, double cap) {
    const Eigen::Index k = a.size();
    if (count.size() != k || k == 0)
        throw std::invalid_argument("water_fill: a and count must be non-empty and equal length");
    if (count.sum() * cap < 1.0 - 1e-15)
        throw std::invalid_argument("water_fill: caps cannot reach total mass 1");

    // Shifted exponents d_i = (-a_i - 1) - max_j(-a_j - 1) <= 0, root in zeta
    // = xi - max_j(-a_j - 1). When the spectrum is widely spread |zeta| is
    // large and zeta itself carries an absolute rounding error well above the
    // residual tolerance, so the root finder is only used to identify which
    // entries sit at the cap. The uncapped weights are then normalized in
    // closed form, which makes the mass residual exact up to rounding.
    const Vector d = (-a.array() - 1.0) - (-a.array() - 1.0).maxCoeff();
    const double shift = (-a.array() - 1.0).maxCoeff();
    const double log_cap = std::log(cap);
    constexpr double inf = std::numeric_limits<double>::infinity();

    struct Pattern {
        double capped_mass = 0.0;
        double top = -inf;        // largest uncapped exponent
        double free_scaled = 0.0; // sum_uncapped count_i exp(d_i - top)
        double residual = 0.0;    // mass at zeta minus one
    };
    auto classify = [&](double zeta) {
        Pattern pt;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (count(i) == 0.0)
                continue;
            if (d(i) - zeta >= log_cap)
                pt.capped_mass += count(i) * cap;
            else
                pt.top = std::max(pt.top, d(i));
        }
        double at_zeta = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (count(i) == 0.0 || d(i) - zeta >= log_cap)
                continue;
            pt.free_scaled += count(i) * std::exp(d(i) - pt.top);
            at_zeta += count(i) * std::exp(d(i) - zeta);
        }
        pt.residual = pt.capped_mass + at_zeta - 1.0;
        return pt;
    };

    WaterFill out;
    out.weights.resize(k);
    // Closed-form weights for the cap pattern at zeta; true when the pattern
    // reproduces itself (KKT conditions hold) and the mass residual is tiny.
    auto try_pattern = [&](double zeta, const Pattern &pt) {
        if (!(pt.top > -inf) || !(pt.capped_mass < 1.0))
            return false;
        const double exact_zeta = pt.top + std::log(pt.free_scaled) - std::log1p(-pt.capped_mass);
        const double unit = (1.0 - pt.capped_mass) / pt.free_scaled;
        double mass = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) {
            const bool capped = d(i) - zeta >= log_cap;
            const double slack = 1e-13 * (1.0 + std::abs(d(i)) + std::abs(exact_zeta));
            if (count(i) != 0.0) {
                if (capped && d(i) - exact_zeta < log_cap - slack)
                    return false;
                if (!capped && d(i) - exact_zeta > log_cap + slack)
                    return false;
            }
            out.weights(i) = capped ? cap : std::min(cap, unit * std::exp(d(i) - pt.top));
            mass += count(i) * out.weights(i);
        }
        if (std::abs(mass - 1.0) > kRootTolerance)
            return false;
        out.xi = exact_zeta + shift;
        out.residual = mass - 1.0;
        return true;
    };

    const double n_total = count.sum();
    double lo = d.minCoeff() - std::log(n_total); // mass >= 1 here: everything capped
    double hi = std::log(n_total);                // mass <= 1 here
    double zeta = hi;
    for (int it = 0; it < kRootMaxIterations; ++it) {
        const Pattern pt = classify(zeta);
        out.iterations = it;
        if (try_pattern(zeta, pt))
            return out;
        if (pt.residual > 0.0)
            lo = zeta;
        else
            hi = zeta;
        // Newton step on log(mass - capped mass), exact once the cap pattern
        // is final; bisection whenever it leaves the bracket.
        double next = 0.5 * (lo + hi);
        if (pt.top > -inf && pt.capped_mass < 1.0)
            next = pt.top + std::log(pt.free_scaled) - std::log1p(-pt.capped_mass);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (next == zeta)
            break;
        zeta = next;
    }
    throw RootFindingError("water_fill: no consistent cap pattern after " +
                           std::to_string(out.iterations + 1) + " iterations (bracket [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "])");
}

// ---------------------------------------------------------------------------
// Entropy prox over Omega_1 and over the (t, Omega_t) box

EntropyStep solve_entropy_spectahedron(double kappa, double varsigma, const Matrix &h) {
    return solve_entropy_spectahedron(kappa, varsigma, thin_svd(h));
}

EntropyStep solve_entropy_spectahedron(double kappa, double varsigma, const ThinSVD &svd) {
    if (!(kappa > 0.0))
        throw std::invalid_argument("solve_entropy_spectahedron: kappa must be positive");
    const Eigen::Index p = svd.rows(), q = svd.cols();
    const Eigen::Index m = std::min(p, q), n = p + q;
    const GEigensystem eig = g_eigensystem(svd);

    // Spectrum of kappa (varsigma I + G(h)): 2m explicit entries plus one
    // group of (n - 2m) copies of kappa * varsigma.
    const Eigen::Index groups = 2 * m + 1;
    Vector a(groups), count(groups);
    a.head(2 * m) = kappa * (varsigma + eig.values.array());
    count.head(2 * m).setOnes();
    a(2 * m) = kappa * varsigma;
    count(2 * m) = static_cast<double>(n - 2 * m);

    const WaterFill wf = water_fill(a, count, 1.0 / static_cast<double>(m));

    EntropyStep out;
    out.point.p = p;
    out.point.q = q;
    out.point.cap_m = m;
    out.point.trace_t = 1.0;
    out.point.basis = eig.vectors;
    out.point.weights = wf.weights.head(2 * m);
    out.point.theta = wf.weights(2 * m);
    out.residual = wf.residual;
    double value = 0.0;
    for (Eigen::Index i = 0; i < groups; ++i)
        value += count(i) * (a(i) * wf.weights(i) + xlogx(wf.weights(i)));
    out.value = value;
    return out;
}

EntropyBoxStep solve_entropy_box(double kappa, double varsigma, const Matrix &h, double alpha,
                                 double a_coef) {
    return solve_entropy_box(kappa, varsigma, thin_svd(h), alpha, a_coef);
}

EntropyBoxStep solve_entropy_box(double kappa, double varsigma, const ThinSVD &svd, double alpha,
                                 double a_coef) {
    if (!(a_coef > 0.0))
        throw std::invalid_argument("solve_entropy_box: a_coef = log(n/m) must be positive");
    EntropyStep inner_step = solve_entropy_spectahedron(kappa, varsigma, svd);
    EntropyBoxStep out;
    out.d = inner_step.value;
    const double c = a_coef + 1.0;
    out.t = std::min(1.0, std::exp(-1.0 - (alpha + out.d) / c));
    out.point = std::move(inner_step.point);
    out.point.trace_t = out.t;
    out.point.theta *= out.t;
    out.point.weights *= out.t;
    out.value = alpha * out.t + c * xlogx(out.t) + out.t * out.d;
    return out;
}

} // namespace tracereg
