#include "tracereg/bench.hpp"

#include "tracereg/report_io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

#if defined(__unix__) || defined(__APPLE__)
#include <sys/resource.h>
#define TRACEREG_HAVE_RUSAGE 1
#endif

namespace tracereg {

std::int64_t peak_memory_bytes() {
#ifdef TRACEREG_HAVE_RUSAGE
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) != 0)
        return 0;
#ifdef __APPLE__
    return static_cast<std::int64_t>(usage.ru_maxrss);
#else
    return static_cast<std::int64_t>(usage.ru_maxrss) * 1024;
#endif
#else
    return 0;
#endif
}

std::vector<BenchRow> run_bench(const BenchOptions &options) {
    struct Cell {
        int q;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (int q : options.qs)
        for (std::uint64_t seed : options.seeds)
            cells.push_back({q, seed});
    std::sort(cells.begin(), cells.end(),
              [](const Cell &a, const Cell &b) { return a.q != b.q ? a.q < b.q : a.seed < b.seed; });

    std::vector<BenchRow> rows(cells.size());
    auto run_cell = [&](std::size_t i) {
        const Cell &c = cells[i];
        const PenalizedSpec spec{reduce(generate_instance(c.q, c.seed)), options.lambda};
        const SolveReport rep = solve_penalized(spec, options.config);
        BenchRow &row = rows[i];
        row.p = spec.problem.p();
        row.q = spec.problem.q();
        row.seed = c.seed;
        row.formulation = Formulation::penalized;
        row.parameter = options.lambda;
        row.iterations = rep.iterations;
        row.primal_obj = rep.primal_obj;
        row.dual_obj = rep.dual_obj;
        row.gap = rep.gap;
        row.wall_time_seconds = rep.wall_time;
        row.peak_memory_bytes = peak_memory_bytes();
        row.converged = rep.converged;
    };

    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(options.threads, 1)), cells.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            run_cell(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(cells.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < cells.size(); i = next++) {
                try {
                    run_cell(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (std::thread &t : pool)
        t.join();
    for (const std::exception_ptr &e : errors)
        if (e)
            std::rethrow_exception(e);
    return rows;
}

std::string bench_csv(const std::vector<BenchRow> &rows) {
    std::string out = "p,q,seed,formulation,parameter,iterations,primal_obj,dual_obj,gap,"
                      "wall_time_seconds,peak_memory_bytes,converged\n";
    for (const BenchRow &r : rows) {
        out += std::to_string(r.p) + "," + std::to_string(r.q) + "," + std::to_string(r.seed) + "," +
               to_string(r.formulation) + "," + format_double(r.parameter) + "," +
               std::to_string(r.iterations) + "," + format_double(r.primal_obj) + "," +
               format_double(r.dual_obj) + "," + format_double(r.gap) + "," +
               format_double(r.wall_time_seconds) + "," + std::to_string(r.peak_memory_bytes) + "," +
               (r.converged ? "1" : "0") + "\n";
    }
    return out;
}

std::string bench_summary(const std::vector<BenchRow> &rows) {
    if (rows.empty())
        throw std::invalid_argument("bench_summary: no rows");
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%5s %5s %6s %10s %16s %10s %10s %9s\n", "p", "q", "seed", "iter",
                  "obj", "time", "mem(MB)", "converged");
    out += line;
    for (const BenchRow &r : rows) {
        std::snprintf(line, sizeof line, "%5ld %5ld %6llu %10lld %16.9f %10.2f %10.1f %9s\n",
                      static_cast<long>(r.p), static_cast<long>(r.q),
                      static_cast<unsigned long long>(r.seed), static_cast<long long>(r.iterations),
                      r.primal_obj, r.wall_time_seconds,
                      static_cast<double>(r.peak_memory_bytes) / (1024.0 * 1024.0),
                      r.converged ? "yes" : "no");
        out += line;
    }
    return out;
}

std::vector<SweepRow> run_sweep(const ReducedProblem &problem, const std::vector<double> &lambdas,
                                const SolverConfig &config) {
    std::vector<SweepRow> rows;
    rows.reserve(lambdas.size());
    for (double lam : lambdas) {
        const SolveReport rep = solve_penalized(PenalizedSpec{problem, lam}, config);
        rows.push_back({lam, everett_budget(rep.X), rep.primal_obj, rep.iterations, rep.converged});
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::string out = "lambda,M,objective,iterations,converged\n";
    for (const SweepRow &r : rows)
        out += format_double(r.lambda) + "," + format_double(r.M) + "," + format_double(r.objective) + "," +
               std::to_string(r.iterations) + "," + (r.converged ? "1" : "0") + "\n";
    return out;
}

} // namespace tracereg
