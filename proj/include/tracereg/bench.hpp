#pragma once

#include "tracereg/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tracereg {

struct BenchRow {
    Eigen::Index p = 0;
    Eigen::Index q = 0;
    std::uint64_t seed = 0;
    Formulation formulation = Formulation::penalized;
    /// lambda (penalized) or M (constrained).
    double parameter = 0.0;
    std::int64_t iterations = 0;
    double primal_obj = 0.0;
    double dual_obj = 0.0;
    double gap = 0.0;
    double wall_time_seconds = 0.0;
    /// Process-wide peak resident set size after the cell, 0 when unknown.
    std::int64_t peak_memory_bytes = 0;
    bool converged = false;
};

struct BenchOptions {
    std::vector<int> qs = {10, 20, 30};
    std::vector<std::uint64_t> seeds = {1};
    double lambda = 1.0;
    SolverConfig config;
    /// Cells run on up to this many threads; rows come back in (q, seed) order
    /// regardless.
    int threads = 1;
};

/// Runs solve_penalized on generate_instance(q, seed) for every (q, seed).
std::vector<BenchRow> run_bench(const BenchOptions &options);

/// Best-effort peak resident set size of this process in bytes; 0 when the
/// platform offers no figure.
std::int64_t peak_memory_bytes();

/// CSV with header
/// p,q,seed,formulation,parameter,iterations,primal_obj,dual_obj,gap,wall_time_seconds,peak_memory_bytes,converged
std::string bench_csv(const std::vector<BenchRow> &rows);

/// Fixed-width table: objective to 9 decimals, a trailing flag column that
/// reads "no" for rows stopped by max_iters. Throws on an empty row list.
std::string bench_summary(const std::vector<BenchRow> &rows);

/// One point of a lambda path: M is the trace norm of the penalized solution
/// (the budget for which that solution is also constrained-optimal).
struct SweepRow {
    double lambda = 0.0;
    double M = 0.0;
    double objective = 0.0;
    std::int64_t iterations = 0;
    bool converged = false;
};

std::vector<SweepRow> run_sweep(const ReducedProblem &problem, const std::vector<double> &lambdas,
                                const SolverConfig &config = {});

/// CSV with header "lambda,M,objective,iterations,converged".
std::string sweep_csv(const std::vector<SweepRow> &rows);

} // namespace tracereg
