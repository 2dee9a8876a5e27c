#include "tracereg/cli.hpp"

#include "tracereg/bench.hpp"
#include "tracereg/cone.hpp"
#include "tracereg/problem_io.hpp"
#include "tracereg/report_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace tracereg {

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void write_text(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f)
        throw IoError("write failed for '" + path + "'");
}

SolverConfig make_config(double epsilon, std::int64_t max_iters, std::int64_t interval, bool trajectory) {
    SolverConfig cfg;
    cfg.epsilon = epsilon;
    cfg.max_iters = max_iters;
    cfg.gap_check_interval = interval;
    cfg.record_trajectory = trajectory;
    cfg.validate();
    return cfg;
}

// Flags shared by solve and export-cone that pick the formulation.
struct FormulationFlags {
    std::optional<double> lambda;
    std::optional<double> budget;
    std::optional<double> gamma;

    void add(CLI::App *cmd) {
        auto *l = cmd->add_option("--lambda", lambda, "penalty weight (penalized problem)");
        auto *b = cmd->add_option("--budget", budget, "trace-norm budget M (constrained problem)");
        auto *g = cmd->add_option("--gamma", gamma, "exact-penalty parameter (default |H|^2/M)");
        l->excludes(b);
        g->needs(b);
    }
    void check() const {
        if (!lambda && !budget)
            throw UsageError("one of --lambda or --budget is required");
    }
};

} // namespace

int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Trace-norm regularized least squares"};
    app.require_subcommand(1);

    // gen
    auto *gen = app.add_subcommand("gen", "generate a random instance (p = 2q, l = 10q)");
    int gen_q = 10;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    bool gen_reduced = false;
    gen->add_option("--q", gen_q, "number of response columns")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--out", gen_out, "instance file")->required();
    gen->add_flag("--reduced", gen_reduced, "store the reduced problem instead of (A, B)");

    // solve
    auto *solve = app.add_subcommand("solve", "solve the penalized or constrained problem");
    std::string solve_in, solve_out, solve_traj;
    FormulationFlags solve_form;
    double epsilon = 1e-8;
    std::int64_t max_iters = 1'000'000;
    std::int64_t interval = 1;
    bool with_u = false;
    solve->add_option("--instance", solve_in, "instance file")->required();
    solve->add_option("--out", solve_out, "report file (default stdout)");
    solve_form.add(solve);
    solve->add_option("--epsilon", epsilon, "duality gap target");
    solve->add_option("--max-iters", max_iters, "iteration cap");
    solve->add_option("--gap-check-interval", interval, "iterations between gap checks");
    solve->add_option("--trajectory", solve_traj, "write the (k, f, g, gap) trajectory as CSV");
    solve->add_flag("--with-u", with_u, "include U = Q X in the report");

    // sweep
    auto *sweep = app.add_subcommand("sweep", "penalized solves over a lambda grid");
    std::string sweep_in, sweep_out;
    std::vector<double> lambdas;
    sweep->add_option("--instance", sweep_in, "instance file")->required();
    sweep->add_option("--lambdas", lambdas, "comma-separated lambda grid")->required()->delimiter(',');
    sweep->add_option("--out", sweep_out, "CSV file (default stdout)");
    sweep->add_option("--epsilon", epsilon, "duality gap target");
    sweep->add_option("--max-iters", max_iters, "iteration cap");

    // export-cone
    auto *cone = app.add_subcommand("export-cone", "write the cone program");
    std::string cone_in, cone_out;
    FormulationFlags cone_form;
    cone->add_option("--instance", cone_in, "instance file")->required();
    cone->add_option("--out", cone_out, "cone file")->required();
    cone_form.add(cone);

    // bench
    auto *bench = app.add_subcommand("bench", "benchmark grid over q and seeds");
    std::vector<int> qs = {10, 20, 30};
    std::vector<std::uint64_t> seeds = {1};
    double bench_lambda = 1.0;
    int threads = 1;
    bool extend = false;
    std::string bench_out;
    bench->add_option("--qs", qs, "comma-separated q values")->delimiter(',');
    bench->add_option("--seeds", seeds, "comma-separated seeds")->delimiter(',');
    bench->add_option("--lambda", bench_lambda, "penalty weight");
    bench->add_option("--epsilon", epsilon, "duality gap target");
    bench->add_option("--max-iters", max_iters, "iteration cap");
    bench->add_option("--threads", threads, "concurrent cells")->check(CLI::PositiveNumber);
    bench->add_flag("--extend", extend, "allow q > 30");
    bench->add_option("--out", bench_out, "CSV file (default stdout)");

    std::vector<const char *> argv;
    for (const std::string &a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*gen) {
            const RawInstance raw = generate_instance(gen_q, gen_seed);
            write_json_file(gen_out, gen_reduced ? reduced_to_json(reduce(raw)) : instance_to_json(raw));
            return kExitOk;
        }
        if (*solve) {
            solve_form.check();
            const SolverConfig cfg = make_config(epsilon, max_iters, interval, !solve_traj.empty());
            const LoadedInstance inst = load_instance(solve_in);
            SolveReport rep;
            if (solve_form.lambda)
                rep = solve_penalized(PenalizedSpec{inst.reduced, *solve_form.lambda}, cfg);
            else
                rep = solve_constrained(make_constrained(inst.reduced, *solve_form.budget, solve_form.gamma.value_or(0.0)),
                                        cfg);
            std::optional<Matrix> U;
            if (with_u)
                U = recover_U(inst.reduced, rep.X);
            write_text(solve_out, report_to_json(rep, U).dump(2) + "\n", out);
            if (!solve_traj.empty())
                write_text(solve_traj, trajectory_csv(rep.trajectory), out);
            if (!rep.converged) {
                err << "solve: duality gap " << format_double(rep.gap) << " above epsilon "
                    << format_double(epsilon) << " after max_iters = " << max_iters << "\n";
                return kExitNotConverged;
            }
            return kExitOk;
        }
        if (*sweep) {
            const SolverConfig cfg = make_config(epsilon, max_iters, 1, false);
            const LoadedInstance inst = load_instance(sweep_in);
            const std::vector<SweepRow> rows = run_sweep(inst.reduced, lambdas, cfg);
            write_text(sweep_out, sweep_csv(rows), out);
            for (const SweepRow &r : rows)
                if (!r.converged) {
                    err << "sweep: lambda = " << format_double(r.lambda) << " stopped at max_iters\n";
                    return kExitNotConverged;
                }
            return kExitOk;
        }
        if (*cone) {
            cone_form.check();
            const LoadedInstance inst = load_instance(cone_in);
            const ConeProgram prog =
                cone_form.lambda
                    ? export_penalized(PenalizedSpec{inst.reduced, *cone_form.lambda})
                    : export_constrained(make_constrained(inst.reduced, *cone_form.budget, cone_form.gamma.value_or(0.0)));
            write_cone_file(prog, cone_out);
            return kExitOk;
        }
        if (*bench) {
            for (int q : qs) {
                if (q < 1)
                    throw UsageError("bench: q values must be positive");
                if (q > 30 && !extend)
                    throw UsageError("bench: q = " + std::to_string(q) + " exceeds 30; pass --extend");
            }
            BenchOptions opts;
            opts.qs = qs;
            opts.seeds = seeds;
            opts.lambda = bench_lambda;
            opts.config = make_config(epsilon, max_iters, 1, false);
            opts.threads = threads;
            const std::vector<BenchRow> rows = run_bench(opts);
            if (rows.front().peak_memory_bytes == 0)
                err << "bench: peak memory is not available on this platform, reporting 0\n";
            write_text(bench_out, bench_csv(rows), out);
            err << bench_summary(rows);
            for (const BenchRow &r : rows)
                if (!r.converged)
                    return kExitNotConverged;
            return kExitOk;
        }
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const RootFindingError &e) {
        err << "error: " << e.what() << "\n";
        return kExitNotConverged;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace tracereg
