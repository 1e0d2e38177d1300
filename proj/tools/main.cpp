// Command-line front end: generate problem instances, run a splitting
// solver, sweep the proximal step, and compare solver families. Emits the
// diagnostics CSV traces.
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid specification,
// 3 numerical divergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "drsplit/diagnostics.hpp"
#include "drsplit/errors.hpp"
#include "drsplit/prox.hpp"
#include "drsplit/problems.hpp"
#include "drsplit/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitDiverged = 3;

struct RunSpec {
    std::string problem = "lasso";
    std::string solver = "drs";
    double lambda = 1.0;
    std::vector<double> lambdas = {0.1, 1.0, 10.0};
    long iterations = -1;  // -1: 2000 for batch, one pass for online
    std::uint64_t seed = 0;
    std::string output_path;
    std::string problem_file;
    long N = 1000;
    long n = 100;
    long k = 10;
    double sigma = 1e-3;
    std::string scaling = "paper";
    bool timing = false;
    std::vector<std::string> solvers = {"drs", "odrs", "iodrs"};
    double delta = 1e-3;
};

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void apply_config_file(const std::string& path, RunSpec& spec) {
    std::ifstream in(path);
    if (!in) throw drs::IoFailure("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw drs::InvalidConfig("config: " + std::string(e.what()));
    }
    try {
        if (j.contains("problem")) spec.problem = j["problem"].get<std::string>();
        if (j.contains("solver")) spec.solver = j["solver"].get<std::string>();
        if (j.contains("lambda")) spec.lambda = j["lambda"].get<double>();
        if (j.contains("lambdas")) spec.lambdas = j["lambdas"].get<std::vector<double>>();
        if (j.contains("iterations")) spec.iterations = j["iterations"].get<long>();
        if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("output_path")) spec.output_path = j["output_path"].get<std::string>();
        if (j.contains("problem_file")) spec.problem_file = j["problem_file"].get<std::string>();
        if (j.contains("N")) spec.N = j["N"].get<long>();
        if (j.contains("n")) spec.n = j["n"].get<long>();
        if (j.contains("k")) spec.k = j["k"].get<long>();
        if (j.contains("sigma")) spec.sigma = j["sigma"].get<double>();
        if (j.contains("scaling")) spec.scaling = j["scaling"].get<std::string>();
        if (j.contains("timing")) spec.timing = j["timing"].get<bool>();
        if (j.contains("solvers")) spec.solvers = j["solvers"].get<std::vector<std::string>>();
        if (j.contains("delta")) spec.delta = j["delta"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw drs::InvalidConfig("config: " + std::string(e.what()));
    }
}

drs::Scaling parse_scaling(const std::string& name) {
    if (name == "paper") return drs::Scaling::paper;
    if (name == "classic") return drs::Scaling::classic;
    throw drs::InvalidConfig("unknown scaling '" + name + "' (expected paper or classic)");
}

void check_generator_sizes(const RunSpec& spec) {
    if (spec.N <= 0 || spec.n <= 0 || spec.k < 0) {
        throw drs::InvalidConfig("generator sizes must be positive");
    }
}

drs::Problem acquire_problem(const RunSpec& spec) {
    if (!spec.problem_file.empty()) return drs::load_problem_file(spec.problem_file);
    check_generator_sizes(spec);
    if (spec.problem == "lasso") {
        return drs::generate_lasso(spec.seed, static_cast<std::size_t>(spec.N),
                                   static_cast<std::size_t>(spec.n),
                                   static_cast<std::size_t>(spec.k), spec.sigma,
                                   parse_scaling(spec.scaling));
    }
    if (spec.problem == "logistic") {
        return drs::generate_logistic(spec.seed, static_cast<std::size_t>(spec.N),
                                      static_cast<std::size_t>(spec.n),
                                      static_cast<std::size_t>(spec.k));
    }
    throw drs::InvalidConfig("unknown problem '" + spec.problem +
                             "' (expected lasso or logistic)");
}

drs::SolverKind parse_solver(const std::string& name) {
    auto kind = drs::parse_solver_kind(name);
    if (!kind) {
        throw drs::InvalidConfig("unknown solver '" + name +
                                 "' (expected drs, odrs, iodrs or opg)");
    }
    return *kind;
}

std::size_t effective_iterations(const RunSpec& spec, drs::SolverKind kind,
                                 const drs::Problem& problem) {
    if (spec.iterations >= 0) return static_cast<std::size_t>(spec.iterations);
    return kind == drs::SolverKind::drs ? 2000 : drs::sample_count(problem);
}

double final_accuracy_norm(const drs::Problem& problem, const drs::Vector& x, double lambda) {
    const double mu = drs::regularizer_weight(problem);
    return drs::norm2(drs::accuracy_measure(
        x, lambda, [&](const drs::Vector& v) { return drs::full_gradient(problem, v); },
        [mu](const drs::Vector& anchor, double lam) { return drs::prox_l1(anchor, mu * lam); }));
}

std::string lambda_file_name(const std::string& base, double lambda) {
    std::ostringstream tag;
    tag << lambda;
    const std::string suffix = "_lambda" + tag.str();
    const std::size_t dot = base.rfind(".csv");
    if (dot != std::string::npos && dot == base.size() - 4) {
        return base.substr(0, dot) + suffix + ".csv";
    }
    return base + suffix + ".csv";
}

int cmd_gen(const RunSpec& spec) {
    drs::Problem problem = acquire_problem(spec);
    const std::string path = spec.output_path.empty() ? "problem.txt" : spec.output_path;
    drs::save_problem(problem, path);

    const double mu = drs::regularizer_weight(problem);
    std::size_t nonzeros = 0;
    std::visit(
        [&](const auto& p) {
            if (p.ground_truth) {
                for (double v : *p.ground_truth) nonzeros += v != 0.0 ? 1 : 0;
            }
        },
        problem);
    std::cout << "mu=" << format_double(mu) << " nonzeros=" << nonzeros << " file=" << path
              << "\n";
    return kExitOk;
}

struct SingleRunOutcome {
    bool diverged = false;
    double final_obj = 0.0;
    double final_eps = 0.0;
    std::string error;
};

SingleRunOutcome execute_run(const drs::Problem& problem, drs::SolverKind kind,
                             const drs::SolverConfig& cfg, const drs::Vector& comparator,
                             const std::string& csv_path, bool timing) {
    drs::TraceBuffer sink;
    drs::RunOptions opts;
    opts.comparator = comparator;
    SingleRunOutcome outcome;
    try {
        drs::Vector final_x = drs::run(problem, kind, cfg, sink, opts);
        outcome.final_obj = drs::objective(problem, final_x);
        outcome.final_eps = final_accuracy_norm(problem, final_x, cfg.lambda);
    } catch (const drs::NonFiniteIterate& e) {
        outcome.diverged = true;
        outcome.error = e.what();
    }
    if (!csv_path.empty()) drs::write_csv_file(csv_path, sink.rows(), timing);
    return outcome;
}

int cmd_run(const RunSpec& spec) {
    drs::Problem problem = acquire_problem(spec);
    const drs::SolverKind kind = parse_solver(spec.solver);

    drs::SolverConfig cfg;
    cfg.lambda = spec.lambda;
    cfg.iterations = effective_iterations(spec, kind, problem);
    cfg.seed = spec.seed;
    drs::validate(cfg);

    const drs::Vector comparator = drs::reference_solution(problem, 1e-10);
    const std::string csv = spec.output_path.empty() ? "trace.csv" : spec.output_path;
    const SingleRunOutcome outcome =
        execute_run(problem, kind, cfg, comparator, csv, spec.timing);
    if (outcome.diverged) {
        std::cout << "solver=" << spec.solver << " lambda=" << format_double(spec.lambda)
                  << " diverged (" << outcome.error << "); partial trace in " << csv << "\n";
        return kExitDiverged;
    }
    std::cout << "solver=" << spec.solver << " lambda=" << format_double(spec.lambda)
              << " final_obj=" << format_double(outcome.final_obj)
              << " final_eps=" << format_double(outcome.final_eps) << "\n";
    return kExitOk;
}

int cmd_sweep(const RunSpec& spec) {
    if (spec.lambdas.empty()) throw drs::InvalidConfig("sweep: lambda list must not be empty");
    for (double l : spec.lambdas) {
        if (!(l > 0.0)) throw drs::InvalidConfig("sweep: every lambda must be positive");
    }
    drs::Problem problem = acquire_problem(spec);
    const drs::SolverKind kind = parse_solver(spec.solver);
    const drs::Vector comparator = drs::reference_solution(problem, 1e-10);
    const std::string base = spec.output_path.empty() ? "sweep.csv" : spec.output_path;

    std::vector<double> lambdas = spec.lambdas;
    std::sort(lambdas.begin(), lambdas.end());

    struct SweepEntry {
        double lambda;
        std::string path;
        SingleRunOutcome outcome;
    };
    std::vector<std::future<SweepEntry>> futures;
    for (double lambda : lambdas) {
        futures.push_back(std::async(std::launch::async, [&, lambda] {
            drs::SolverConfig cfg;
            cfg.lambda = lambda;
            cfg.iterations = effective_iterations(spec, kind, problem);
            cfg.seed = spec.seed;
            drs::validate(cfg);
            SweepEntry entry{lambda, lambda_file_name(base, lambda), {}};
            entry.outcome =
                execute_run(problem, kind, cfg, comparator, entry.path, spec.timing);
            return entry;
        }));
    }

    bool any_failed = false;
    for (auto& f : futures) {
        const SweepEntry entry = f.get();
        if (entry.outcome.diverged) {
            any_failed = true;
            std::cout << "lambda=" << format_double(entry.lambda)
                      << " status=diverged file=" << entry.path << "\n";
        } else {
            std::cout << "lambda=" << format_double(entry.lambda)
                      << " final_obj=" << format_double(entry.outcome.final_obj)
                      << " final_eps=" << format_double(entry.outcome.final_eps)
                      << " status=ok file=" << entry.path << "\n";
        }
    }
    return any_failed ? kExitDiverged : kExitOk;
}

int cmd_compare(const RunSpec& spec) {
    if (spec.solvers.size() < 2) {
        throw drs::InvalidConfig("compare: need at least two solvers");
    }
    std::vector<drs::SolverKind> kinds;
    for (const std::string& name : spec.solvers) kinds.push_back(parse_solver(name));

    drs::Problem problem = acquire_problem(spec);
    const drs::Vector comparator = drs::reference_solution(problem, 1e-10);
    const double reference_obj = drs::objective(problem, comparator);

    struct CompareEntry {
        std::vector<drs::TraceRecord> rows;
        bool diverged = false;
    };
    std::vector<std::future<CompareEntry>> futures;
    for (drs::SolverKind kind : kinds) {
        futures.push_back(std::async(std::launch::async, [&, kind] {
            drs::SolverConfig cfg;
            cfg.lambda = spec.lambda;
            cfg.iterations = effective_iterations(spec, kind, problem);
            cfg.seed = spec.seed;
            drs::validate(cfg);
            drs::TraceBuffer sink;
            drs::RunOptions opts;
            opts.comparator = comparator;
            CompareEntry entry;
            try {
                drs::run(problem, kind, cfg, sink, opts);
            } catch (const drs::NonFiniteIterate&) {
                entry.diverged = true;
            }
            entry.rows = sink.rows();
            return entry;
        }));
    }

    std::vector<CompareEntry> entries;
    entries.reserve(futures.size());
    for (auto& f : futures) entries.push_back(f.get());

    // aligned objective columns, one group per solver
    const std::string csv = spec.output_path.empty() ? "compare.csv" : spec.output_path;
    std::ofstream out(csv);
    if (!out) throw drs::IoFailure("compare: cannot open " + csv + " for writing");
    out << "t";
    for (const std::string& name : spec.solvers) out << ',' << name << "_objective";
    out << '\n';
    std::size_t max_rows = 0;
    for (const CompareEntry& e : entries) max_rows = std::max(max_rows, e.rows.size());
    for (std::size_t i = 0; i < max_rows; ++i) {
        std::size_t t = 0;
        for (const CompareEntry& e : entries) {
            if (i < e.rows.size()) {
                t = e.rows[i].t;
                break;
            }
        }
        out << t;
        for (const CompareEntry& e : entries) {
            out << ',';
            if (i < e.rows.size()) out << format_double(e.rows[i].objective);
        }
        out << '\n';
    }
    if (!out) throw drs::IoFailure("compare: write failed");
    out.close();

    std::cout << "reference_obj=" << format_double(reference_obj) << " delta="
              << format_double(spec.delta) << "\n";
    bool any_diverged = false;
    std::size_t best_t = 0;
    std::string best_solver = "none";
    for (std::size_t s = 0; s < entries.size(); ++s) {
        std::size_t hit = 0;
        for (const drs::TraceRecord& r : entries[s].rows) {
            if (std::abs(r.objective - reference_obj) <= spec.delta) {
                hit = r.t;
                break;
            }
        }
        any_diverged = any_diverged || entries[s].diverged;
        std::cout << "band solver=" << spec.solvers[s] << " first_t="
                  << (hit > 0 ? std::to_string(hit) : "none")
                  << (entries[s].diverged ? " (diverged)" : "") << "\n";
        if (hit > 0 && (best_solver == "none" || hit < best_t)) {
            best_t = hit;
            best_solver = spec.solvers[s];
        }
    }
    std::cout << "first_within_delta=" << best_solver;
    if (best_solver != "none") std::cout << " t=" << best_t;
    std::cout << "\n";
    return any_diverged ? kExitDiverged : kExitOk;
}

void add_common_options(CLI::App* cmd, RunSpec& spec) {
    cmd->add_option("--problem", spec.problem, "Problem family: lasso or logistic");
    cmd->add_option("--seed", spec.seed, "Generator seed");
    cmd->add_option("--N", spec.N, "Sample count for the generator");
    cmd->add_option("--n", spec.n, "Dimension for the generator");
    cmd->add_option("--k", spec.k, "Ground-truth sparsity for the generator");
    cmd->add_option("--sigma", spec.sigma, "Noise level for the lasso generator");
    cmd->add_option("--scaling", spec.scaling, "Lasso b scaling: paper (A x0 / N) or classic");
    cmd->add_option("--out", spec.output_path, "Output path");
    cmd->add_option("--config", "JSON config file (flags override it)");  // consumed upfront
}

void add_run_options(CLI::App* cmd, RunSpec& spec) {
    cmd->add_option("--problem-file", spec.problem_file,
                    "Load the problem from a file instead of generating");
    cmd->add_option("--solver", spec.solver, "Solver: drs, odrs, iodrs or opg");
    cmd->add_option("--lambda", spec.lambda, "Proximal step");
    cmd->add_option("--iters", spec.iterations,
                    "Iteration count (default: 2000 batch, one pass online)");
    cmd->add_flag("--timing", spec.timing, "Write wall-clock times into the trace CSV");
}

}  // namespace

int main(int argc, char** argv) {
    RunSpec spec;

    // Config file first, so explicit flags override its values.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(argv[i + 1], spec);
            } catch (const drs::IoFailure& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitIo;
            } catch (const drs::Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitInvalid;
            }
        }
    }

    CLI::App app{"Douglas-Rachford splitting experiments"};
    app.require_subcommand(1);

    CLI::App* gen = app.add_subcommand("gen", "Generate a problem instance file");
    add_common_options(gen, spec);

    CLI::App* run = app.add_subcommand("run", "Run one solver and emit a CSV trace");
    add_common_options(run, spec);
    add_run_options(run, spec);

    CLI::App* sweep = app.add_subcommand("sweep", "Run one solver across a lambda list");
    add_common_options(sweep, spec);
    add_run_options(sweep, spec);
    sweep->add_option("--lambdas", spec.lambdas, "Lambda values to sweep")->delimiter(',');

    CLI::App* compare = app.add_subcommand("compare", "Run several solvers on one problem");
    add_common_options(compare, spec);
    add_run_options(compare, spec);
    compare->add_option("--solvers", spec.solvers, "Solvers to compare")->delimiter(',');
    compare->add_option("--delta", spec.delta, "Objective band around the reference");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (gen->parsed()) return cmd_gen(spec);
        if (run->parsed()) return cmd_run(spec);
        if (sweep->parsed()) return cmd_sweep(spec);
        return cmd_compare(spec);
    } catch (const drs::IoFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const drs::NonFiniteIterate& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const drs::MaxIterations& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const drs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}
