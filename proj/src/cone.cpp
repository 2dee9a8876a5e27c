#include "tracereg/cone.hpp"

#include "tracereg/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tracereg {

Eigen::Index ConeProgram::var_t() const {
    if (!has_t())
        throw std::logic_error("ConeProgram: constrained programs have no t variable");
    return 2;
}

Eigen::Index ConeProgram::var_x(Eigen::Index i, Eigen::Index j) const {
    return (has_t() ? 3 : 2) + j * p + i;
}

Eigen::Index ConeProgram::var_y(Eigen::Index i, Eigen::Index j) const {
    if (i > j)
        std::swap(i, j);
    return (has_t() ? 3 : 2) + p * q + j * (j + 1) / 2 + i;
}

Eigen::Index ConeProgram::num_vars() const {
    const Eigen::Index nn = n();
    return (has_t() ? 3 : 2) + p * q + nn * (nn + 1) / 2;
}

namespace {

void sort_entries(std::vector<ConeEntry> &entries) {
    std::sort(entries.begin(), entries.end(), [](const ConeEntry &a, const ConeEntry &b) {
        if (a.block != b.block)
            return static_cast<int>(a.block) < static_cast<int>(b.block);
        if (a.row != b.row)
            return a.row < b.row;
        if (a.col != b.col)
            return a.col < b.col;
        return a.var < b.var;
    });
}

// Blocks shared by both formulations: the SOC rows and the two PSD forms.
ConeProgram common_blocks(Formulation formulation, const ReducedProblem &pr) {
    ConeProgram prog;
    prog.formulation = formulation;
    prog.p = pr.p();
    prog.q = pr.q();
    const Eigen::Index p = prog.p, q = prog.q, n = prog.n();
    auto &e = prog.entries;

    e.push_back({ConeBlock::soc, prog.var_r(), 0, 0, 1.0});
    e.push_back({ConeBlock::soc, -1, 0, 0, 1.0});
    e.push_back({ConeBlock::soc, prog.var_r(), 1, 0, 1.0});
    e.push_back({ConeBlock::soc, -1, 1, 0, -1.0});
    for (Eigen::Index j = 0; j < q; ++j)
        for (Eigen::Index i = 0; i < p; ++i) {
            const Eigen::Index row = 2 + j * p + i;
            e.push_back({ConeBlock::soc, prog.var_x(i, j), row, 0, pr.lambda_diag(i)});
            if (pr.H(i, j) != 0.0)
                e.push_back({ConeBlock::soc, -1, row, 0, -pr.H(i, j)});
        }

    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r <= c; ++r) {
            e.push_back({ConeBlock::psd_gap, prog.var_y(r, c), r, c, 1.0});
            e.push_back({ConeBlock::psd_y, prog.var_y(r, c), r, c, 1.0});
        }
    // -G(X): the (a, q + i) entry of G(X) is X(i, a).
    for (Eigen::Index a = 0; a < q; ++a)
        for (Eigen::Index i = 0; i < p; ++i)
            e.push_back({ConeBlock::psd_gap, prog.var_x(i, a), a, q + i, -1.0});
    for (Eigen::Index d = 0; d < n; ++d)
        e.push_back({ConeBlock::psd_gap, prog.var_s(), d, d, 1.0});

    const double m = static_cast<double>(pr.m());
    e.push_back({ConeBlock::linear, prog.var_s(), 0, 0, -m});
    for (Eigen::Index d = 0; d < n; ++d)
        e.push_back({ConeBlock::linear, prog.var_y(d, d), 0, 0, -1.0});
    return prog;
}

} // namespace

ConeProgram export_penalized(const PenalizedSpec &spec) {
    spec.validate();
    ConeProgram prog = common_blocks(Formulation::penalized, spec.problem);
    prog.objective = {{prog.var_r(), 2.0}, {prog.var_t(), spec.lambda}};
    prog.entries.push_back({ConeBlock::linear, prog.var_t(), 0, 0, 1.0});
    sort_entries(prog.entries);
    return prog;
}

ConeProgram export_constrained(const ConstrainedSpec &spec) {
    spec.validate();
    ConeProgram prog = common_blocks(Formulation::constrained, spec.problem);
    prog.objective = {{prog.var_r(), 2.0}};
    prog.entries.push_back({ConeBlock::linear, -1, 0, 0, spec.M});
    sort_entries(prog.entries);
    return prog;
}

ConeCheck verify(const ConeProgram &prog, const ConePoint &pt) {
    const Eigen::Index p = prog.p, q = prog.q, n = prog.n();
    if (pt.X.rows() != p || pt.X.cols() != q)
        throw std::invalid_argument("verify: X must be " + std::to_string(p) + "x" + std::to_string(q));
    if (pt.Y.rows() != n || pt.Y.cols() != n)
        throw std::invalid_argument("verify: Y must be " + std::to_string(n) + "x" + std::to_string(n));

    Vector x = Vector::Zero(prog.num_vars());
    x(prog.var_r()) = pt.r;
    x(prog.var_s()) = pt.s;
    if (prog.has_t())
        x(prog.var_t()) = pt.t;
    for (Eigen::Index j = 0; j < q; ++j)
        for (Eigen::Index i = 0; i < p; ++i)
            x(prog.var_x(i, j)) = pt.X(i, j);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r <= c; ++r)
            x(prog.var_y(r, c)) = 0.5 * (pt.Y(r, c) + pt.Y(c, r));

    double scale = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
    Vector soc = Vector::Zero(prog.soc_dim());
    Matrix gap = Matrix::Zero(n, n), ymat = Matrix::Zero(n, n);
    double lin = 0.0;
    for (const ConeEntry &e : prog.entries) {
        const double v = e.var < 0 ? e.value : e.value * x(e.var);
        if (e.var < 0)
            scale = std::max(scale, std::abs(e.value));
        switch (e.block) {
        case ConeBlock::soc:
            soc(e.row) += v;
            break;
        case ConeBlock::psd_gap:
            gap(e.row, e.col) += v;
            if (e.row != e.col)
                gap(e.col, e.row) += v;
            break;
        case ConeBlock::psd_y:
            ymat(e.row, e.col) += v;
            if (e.row != e.col)
                ymat(e.col, e.row) += v;
            break;
        case ConeBlock::linear:
            lin += v;
            break;
        }
    }

    ConeCheck out;
    out.soc_slack = soc(0) - soc.tail(soc.size() - 1).norm();
    out.psd_gap_min_eig = sym_eig_psd(gap).values.minCoeff();
    out.psd_y_min_eig = sym_eig_psd(ymat).values.minCoeff();
    out.linear_slack = lin;
    out.worst_slack = std::min({out.soc_slack, out.psd_gap_min_eig, out.psd_y_min_eig, out.linear_slack});
    out.feasible = out.worst_slack >= -1e-6 * (1.0 + scale);
    for (const auto &[var, coef] : prog.objective)
        out.objective += coef * x(var);
    return out;
}

ConePoint lift(const ReducedProblem &problem, const Matrix &x) {
    const ThinSVD svd = thin_svd(x);
    const GEigensystem eig = g_eigensystem(svd);
    const Eigen::Index m = svd.singulars.size();
    ConePoint pt;
    pt.r = 0.25 * (problem.lambda_diag.asDiagonal() * x - problem.H).squaredNorm();
    pt.s = 0.0;
    pt.t = svd.singulars.sum();
    pt.X = x;
    const Matrix f = eig.vectors.leftCols(m);
    pt.Y = f * svd.singulars.asDiagonal() * f.transpose();
    return pt;
}

// ---------------------------------------------------------------------------
// Text format

std::string cone_to_string(const ConeProgram &prog) {
    std::string out;
    out += "tracereg-cone 1\n";
    out += "formulation " + to_string(prog.formulation) + "\n";
    out += "dims " + std::to_string(prog.p) + " " + std::to_string(prog.q) + " " +
           std::to_string(prog.n()) + "\n";
    out += "vars " + std::to_string(prog.num_vars()) + "\n";
    out += "cones soc " + std::to_string(prog.soc_dim()) + " psd " + std::to_string(prog.n()) + " psd " +
           std::to_string(prog.n()) + " linear 1\n";
    out += "objective " + std::to_string(prog.objective.size()) + "\n";
    for (const auto &[var, coef] : prog.objective)
        out += std::to_string(var) + " " + format_double(coef) + "\n";
    out += "entries " + std::to_string(prog.entries.size()) + "\n";
    for (const ConeEntry &e : prog.entries)
        out += std::to_string(static_cast<int>(e.block)) + " " + std::to_string(e.var) + " " +
               std::to_string(e.row) + " " + std::to_string(e.col) + " " + format_double(e.value) + "\n";
    return out;
}

namespace {

double parse_double(const std::string &tok) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw IoError("cone file: bad number '" + tok + "'");
    return v;
}

void expect(std::istream &in, const std::string &word) {
    std::string tok;
    if (!(in >> tok) || tok != word)
        throw IoError("cone file: expected '" + word + "', found '" + tok + "'");
}

template <class T> T read_value(std::istream &in, const char *what) {
    T v{};
    if (!(in >> v))
        throw IoError(std::string("cone file: cannot read ") + what);
    return v;
}

} // namespace

ConeProgram cone_from_string(const std::string &text) {
    std::istringstream in(text);
    expect(in, "tracereg-cone");
    if (read_value<int>(in, "version") != 1)
        throw IoError("cone file: unsupported version");
    ConeProgram prog;
    expect(in, "formulation");
    const auto form = read_value<std::string>(in, "formulation");
    if (form == "penalized")
        prog.formulation = Formulation::penalized;
    else if (form == "constrained")
        prog.formulation = Formulation::constrained;
    else
        throw IoError("cone file: unknown formulation '" + form + "'");
    expect(in, "dims");
    prog.p = read_value<Eigen::Index>(in, "p");
    prog.q = read_value<Eigen::Index>(in, "q");
    if (read_value<Eigen::Index>(in, "n") != prog.n())
        throw IoError("cone file: n != p + q");
    expect(in, "vars");
    if (read_value<Eigen::Index>(in, "vars") != prog.num_vars())
        throw IoError("cone file: variable count does not match dims");
    expect(in, "cones");
    expect(in, "soc");
    if (read_value<Eigen::Index>(in, "soc size") != prog.soc_dim())
        throw IoError("cone file: soc size does not match dims");
    for (int b = 0; b < 2; ++b) {
        expect(in, "psd");
        if (read_value<Eigen::Index>(in, "psd size") != prog.n())
            throw IoError("cone file: psd size does not match dims");
    }
    expect(in, "linear");
    if (read_value<int>(in, "linear rows") != 1)
        throw IoError("cone file: expected one linear row");

    expect(in, "objective");
    const auto nobj = read_value<std::size_t>(in, "objective count");
    for (std::size_t k = 0; k < nobj; ++k) {
        const auto var = read_value<Eigen::Index>(in, "objective var");
        prog.objective.emplace_back(var, parse_double(read_value<std::string>(in, "objective value")));
    }
    expect(in, "entries");
    const auto count = read_value<std::size_t>(in, "entry count");
    prog.entries.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        ConeEntry e;
        const int block = read_value<int>(in, "block");
        if (block < 1 || block > 4)
            throw IoError("cone file: unknown block id " + std::to_string(block));
        e.block = static_cast<ConeBlock>(block);
        e.var = read_value<Eigen::Index>(in, "var");
        e.row = read_value<Eigen::Index>(in, "row");
        e.col = read_value<Eigen::Index>(in, "col");
        e.value = parse_double(read_value<std::string>(in, "value"));
        if (e.var < -1 || e.var >= prog.num_vars())
            throw IoError("cone file: variable index out of range");
        prog.entries.push_back(e);
    }
    std::string rest;
    if (in >> rest)
        throw IoError("cone file: trailing content '" + rest + "'");
    return prog;
}

void write_cone_file(const ConeProgram &program, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << cone_to_string(program);
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

ConeProgram read_cone_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return cone_from_string(ss.str());
}

} // namespace tracereg
