// Acceptance suite: one pass/fail line per criterion, nonzero exit code on
// any failure. Tolerances are pinned in code; oracles are independent of
// the paths they certify.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "drsplit/diagnostics.hpp"
#include "drsplit/errors.hpp"
#include "drsplit/prox.hpp"
#include "drsplit/problems.hpp"
#include "drsplit/solvers.hpp"
#include "oracles.hpp"

using namespace drs;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double now_seconds(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
    }
    return m;
}

Vector pm_labels(Rng& rng, std::size_t count) {
    Vector labels(count);
    for (double& y : labels) y = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return labels;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion_prox_oracles() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1001);
    double worst_l1 = 0.0, worst_batch = 0.0, worst_rank1 = 0.0, worst_lin = 0.0,
           worst_logistic = 0.0;

    // soft-thresholding vs the per-coordinate grid oracle
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_index(50));
        const double theta = rng.uniform();
        Vector v = gauss_sample(rng, n);
        Vector got = prox_l1(v, theta);
        for (std::size_t j = 0; j < n; ++j) {
            worst_l1 = std::max(worst_l1, std::abs(got[j] - oracle::grid_prox_abs(v[j], theta)));
        }
    }

    // batch least-squares prox: first-order residual of its subproblem
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t rows = 5 + static_cast<std::size_t>(rng.uniform_index(26));
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_index(19));
        Matrix A = random_matrix(rng, rows, n);
        Vector b = gauss_sample(rng, rows);
        Vector anchor = gauss_sample(rng, n);
        const double lambda = 0.1 + rng.uniform();
        Vector z = prox_ls_batch(A, b, anchor, lambda);
        Vector r = matvec(A, z);
        for (std::size_t i = 0; i < rows; ++i) r[i] -= b[i];
        Vector grad = matvec_transpose(A, r);
        for (std::size_t j = 0; j < n; ++j) {
            grad[j] = grad[j] * 2.0 / static_cast<double>(rows) + (z[j] - anchor[j]) / lambda;
        }
        worst_batch = std::max(worst_batch, norm2(grad));
    }

    // rank-one prox: first-order residual
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_index(49));
        Vector a = gauss_sample(rng, n);
        const double b = rng.gaussian();
        Vector anchor = gauss_sample(rng, n);
        const double lambda = 0.1 + rng.uniform();
        Vector z = prox_ls_rank1(a, b, anchor, lambda);
        const double residual = dot(a, z) - b;
        Vector grad(n);
        for (std::size_t j = 0; j < n; ++j) {
            grad[j] = 2.0 * residual * a[j] + (z[j] - anchor[j]) / lambda;
        }
        worst_rank1 = std::max(worst_rank1, norm2(grad));
    }

    // linearized prox: exact optimality of the linear-plus-quadratic model
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_index(49));
        Vector g = gauss_sample(rng, n);
        Vector anchor = gauss_sample(rng, n);
        const double lambda = 0.1 + rng.uniform();
        Vector z = linearized_prox(g, anchor, lambda);
        Vector grad(n);
        for (std::size_t j = 0; j < n; ++j) grad[j] = g[j] + (z[j] - anchor[j]) / lambda;
        worst_lin = std::max(worst_lin, norm2(grad));
    }

    // logistic prox: first-order residual of the inner subproblem
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t rows = 3 + static_cast<std::size_t>(rng.uniform_index(18));
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_index(9));
        Matrix X = random_matrix(rng, rows, n);
        Vector y = pm_labels(rng, rows);
        Vector anchor = gauss_sample(rng, n);
        const double lambda = 0.1 + rng.uniform();
        ProxOutcome out = prox_logistic(X, y, anchor, lambda);
        auto [value, grad] = logistic_value_grad(X, y, out.point);
        (void)value;
        for (std::size_t j = 0; j < n; ++j) grad[j] += (out.point[j] - anchor[j]) / lambda;
        worst_logistic = std::max(worst_logistic, norm2(grad));
    }

    const double secs = now_seconds(start);
    const double worst = std::max({worst_l1, worst_batch, worst_rank1, worst_lin,
                                   worst_logistic});
    Outcome o;
    o.pass = worst <= 1e-8 && secs < 10.0;
    o.detail = "residuals: l1 " + fmt(worst_l1) + ", ls-batch " + fmt(worst_batch) +
               ", rank1 " + fmt(worst_rank1) + ", linearized " + fmt(worst_lin) +
               ", logistic " + fmt(worst_logistic) + "; " + fmt(secs) + " s";
    return o;
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion_gradients() {
    Rng rng(1002);
    LassoProblem lasso = generate_lasso(8, 30, 8, 3, 1e-2, Scaling::classic);
    LogisticProblem logit = generate_logistic(8, 30, 8, 3);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        Vector x = gauss_sample(rng, 8);
        const std::size_t idx = static_cast<std::size_t>(rng.uniform_index(30));

        auto check = [&](const Vector& analytic, const std::function<double(const Vector&)>& f) {
            Vector fd = oracle::finite_difference_gradient(f, x);
            for (std::size_t j = 0; j < 8; ++j) {
                worst = std::max(worst,
                                 std::abs(analytic[j] - fd[j]) / (1.0 + std::abs(fd[j])));
            }
        };
        check(sample_loss_grad(lasso, idx, x).second,
              [&](const Vector& v) { return sample_loss_grad(lasso, idx, v).first; });
        check(sample_loss_grad(logit, idx, x).second,
              [&](const Vector& v) { return sample_loss_grad(logit, idx, v).first; });
        check(full_gradient(logit, x), [&](const Vector& v) {
            return objective(logit, v) - logit.mu * norm1(v);
        });
    }
    Outcome o;
    o.pass = worst <= 1e-5;
    o.detail = "max relative deviation " + fmt(worst);
    return o;
}

// ------------------------------------------------------- criteria 3, 4 and 5
struct BatchRuns {
    double worst_gap = 0.0;
    double worst_increase = -1e300;
    double worst_ratio = 0.0;
    double secs = 0.0;
    bool computed = false;
};

const BatchRuns& batch_runs() {
    static BatchRuns cache;
    if (cache.computed) return cache;
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        LassoProblem p = generate_lasso(seed, 50, 10, 3, 1e-2, Scaling::classic);
        Vector xstar = reference_solution(p, 1e-12);
        const double fstar = objective(p, xstar);

        SolverConfig cfg;
        cfg.lambda = 1.0;
        cfg.iterations = 2000;
        RunOptions opts;
        opts.comparator = xstar;
        RunResult res = run(Problem{p}, SolverKind::drs, cfg, opts);

        cache.worst_gap =
            std::max(cache.worst_gap, std::abs(objective(p, res.final_x) - fstar));
        double at10 = 0.0;
        for (std::size_t i = 0; i < res.trace.size(); ++i) {
            const double e2 = res.trace[i].eps_norm * res.trace[i].eps_norm;
            if (i + 1 < res.trace.size()) {
                const double next =
                    res.trace[i + 1].eps_norm * res.trace[i + 1].eps_norm;
                cache.worst_increase = std::max(cache.worst_increase, next - e2);
            }
            if (res.trace[i].t == 10) at10 = 10.0 * e2;
            if (res.trace[i].t >= 10 && at10 > 0.0) {
                cache.worst_ratio = std::max(
                    cache.worst_ratio, static_cast<double>(res.trace[i].t) * e2 / at10);
            }
        }
    }
    cache.secs = now_seconds(start);
    cache.computed = true;
    return cache;
}

Outcome criterion_batch_convergence() {
    const BatchRuns& r = batch_runs();
    Outcome o;
    o.pass = r.worst_gap <= 1e-6 && r.secs < 30.0;
    o.detail = "max |f - f*| " + fmt(r.worst_gap) + " over 20 instances, " + fmt(r.secs) + " s";
    return o;
}

Outcome criterion_monotone_accuracy() {
    const BatchRuns& r = batch_runs();
    Outcome o;
    o.pass = r.worst_increase <= 1e-12;
    o.detail = "max per-step increase of |eps|^2 is " + fmt(r.worst_increase);
    return o;
}

Outcome criterion_rate_proxy() {
    const BatchRuns& r = batch_runs();
    Outcome o;
    o.pass = r.worst_ratio <= 10.0;
    o.detail = "max_t t|eps_t|^2 within " + fmt(r.worst_ratio) + "x of its t=10 value";
    return o;
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion_rank_one_identity() {
    Rng rng(1006);
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_index(99));
        Vector a = gauss_sample(rng, n);
        const double b = rng.gaussian();
        Vector anchor = gauss_sample(rng, n);
        const double lambda = 0.1 + rng.uniform();
        const double c = 1.0 / (2.0 * lambda);

        Vector got = prox_ls_rank1(a, b, anchor, lambda);
        Vector rhs(n);
        for (std::size_t j = 0; j < n; ++j) rhs[j] = a[j] * b + c * anchor[j];
        Vector want = solve_spd(oracle::dense_rank_one(a, c), rhs);
        for (std::size_t j = 0; j < n; ++j) {
            worst = std::max(worst, std::abs(got[j] - want[j]));
        }
    }
    Outcome o;
    o.pass = worst <= 1e-10;
    o.detail = "max deviation from the dense solve " + fmt(worst);
    return o;
}

// ---------------------------------------------------------------- criterion 7
std::size_t first_hit(const std::vector<TraceRecord>& rows, double fstar, double delta) {
    for (const TraceRecord& r : rows) {
        if (std::abs(r.objective - fstar) <= delta) return r.t;
    }
    return 0;
}

Outcome criterion_paper_scale() {
    const auto start = std::chrono::steady_clock::now();
    const double delta = 1e-3;

    // The verbatim protocol (b = A x0 / N) compresses all objectives within
    // ~1e-6 of each other, so the 1e-3 band is met at t=1 by every solver
    // and can order nothing. Reported for the record; the asserted
    // experiment uses the classic scaling where the band is meaningful.
    {
        LassoProblem p = generate_lasso(2, 1000, 100, 10, 1e-3, Scaling::paper);
        Vector xstar = reference_solution(p, 1e-10);
        std::printf("    note: paper b-scaling gives f(0)-f* = %s, inside delta=%s at t=1 "
                    "for every solver\n",
                    fmt(objective(p, Vector(100, 0.0)) - objective(p, xstar)).c_str(),
                    fmt(delta).c_str());
    }

    LassoProblem p = generate_lasso(2, 1000, 100, 10, 1e-2, Scaling::classic);
    Vector xstar = reference_solution(p, 1e-10);
    const double fstar = objective(p, xstar);

    auto hits_for = [&](SolverKind kind, double lambda) {
        SolverConfig cfg;
        cfg.lambda = lambda;
        cfg.iterations = 10000;
        RunOptions opts;
        opts.comparator = xstar;
        RunResult res = run(Problem{p}, kind, cfg, opts);
        return first_hit(res.trace, fstar, delta);
    };

    bool reached_all = true;
    std::size_t drs_at_1 = 0, odrs_at_1 = 0;
    for (double lambda : {0.1, 1.0, 10.0}) {
        const std::size_t drs_hit = hits_for(SolverKind::drs, lambda);
        const std::size_t odrs_hit = hits_for(SolverKind::odrs, lambda);
        std::printf("    lambda=%g: drs first-hit %zu, odrs first-hit %zu\n", lambda, drs_hit,
                    odrs_hit);
        reached_all = reached_all && drs_hit > 0 && odrs_hit > 0;
        if (lambda == 1.0) {
            drs_at_1 = drs_hit;
            odrs_at_1 = odrs_hit;
        }
    }
    const std::size_t iodrs_at_1 = hits_for(SolverKind::iodrs, 1.0);
    std::printf("    lambda=1: iodrs first-hit %zu\n", iodrs_at_1);
    const double secs = now_seconds(start);

    const bool drs_faster = drs_at_1 > 0 && (iodrs_at_1 == 0 || drs_at_1 < iodrs_at_1);
    const bool odrs_faster = odrs_at_1 > 0 && (iodrs_at_1 == 0 || odrs_at_1 < iodrs_at_1);

    Outcome o;
    o.pass = reached_all && drs_faster && odrs_faster && secs < 300.0;
    std::ostringstream detail;
    detail << "band reached " << (reached_all ? "at every lambda" : "MISSED") << "; at lambda=1 "
           << "drs " << drs_at_1 << (drs_faster ? " < " : " !< ") << "iodrs " << iodrs_at_1
           << ", odrs " << odrs_at_1 << (odrs_faster ? " < " : " !< ") << "iodrs " << iodrs_at_1
           << "; " << fmt(secs) << " s";
    o.detail = detail.str();
    return o;
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion_regret() {
    LassoProblem p = generate_lasso(2, 1000, 100, 10, 1e-2, Scaling::classic);
    Vector xstar = reference_solution(p, 1e-10);

    SolverConfig cfg;
    cfg.lambda = 1.0;
    cfg.iterations = 1000;  // one pass
    RunOptions opts;
    opts.comparator = xstar;
    RunResult res = run(Problem{p}, SolverKind::odrs, cfg, opts);

    bool finite = res.trace.size() == 1000;
    for (const TraceRecord& r : res.trace) finite = finite && std::isfinite(r.avg_regret);

    auto regret_at = [&](std::size_t t) { return res.trace[t - 1].avg_regret; };
    bool decreasing = true;
    const std::size_t checkpoints[] = {500, 625, 750, 875, 1000};
    for (int i = 0; i + 1 < 5; ++i) {
        decreasing = decreasing && regret_at(checkpoints[i + 1]) < regret_at(checkpoints[i]);
    }

    Outcome o;
    o.pass = finite && decreasing;
    std::ostringstream detail;
    detail << "R(500)=" << fmt(regret_at(500)) << " R(750)=" << fmt(regret_at(750))
           << " R(1000)=" << fmt(regret_at(1000))
           << (decreasing ? ", decreasing over the last half" : ", NOT decreasing");
    o.detail = detail.str();
    return o;
}

// ---------------------------------------------------------------- criterion 9
Outcome criterion_logistic() {
    const auto start = std::chrono::steady_clock::now();
    LogisticProblem p = generate_logistic(17, 500, 20, 5);
    Vector wstar = reference_solution(p, 1e-9);
    const double fstar = objective(p, wstar);

    InnerSolveStats stats;
    SolverConfig cfg;
    cfg.lambda = 1.0;
    cfg.iterations = 40000;
    RunOptions opts;
    opts.comparator = wstar;
    opts.inner_stats = &stats;
    RunResult res = run(Problem{p}, SolverKind::drs, cfg, opts);
    const double gap = std::abs(objective(p, res.final_x) - fstar);

    Outcome o;
    o.pass = gap <= 1e-4 && stats.max_iterations <= 50;
    o.detail = "|f - f*| " + fmt(gap) + ", max inner Newton steps " +
               std::to_string(stats.max_iterations) + ", " + fmt(now_seconds(start)) + " s";
    return o;
}

// --------------------------------------------------------------- criterion 10
Outcome criterion_determinism() {
    const std::string spec =
        " run --problem lasso --seed 5 --N 60 --n 12 --k 3 --sigma 0.01 --scaling classic"
        " --solver odrs --lambda 1 --iters 300";
    auto shell = [](const std::string& cmd) { return std::system(cmd.c_str()); };
    const int rc1 = shell(std::string(CLI_PATH) + spec + " --out det_a.csv > det_a.txt 2>&1");
    const int rc2 = shell(std::string(CLI_PATH) + spec + " --out det_b.csv > det_b.txt 2>&1");

    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    const std::string csv_a = slurp("det_a.csv");
    const bool same_csv = !csv_a.empty() && csv_a == slurp("det_b.csv");
    const bool same_stdout = slurp("det_a.txt") == slurp("det_b.txt");
    for (const char* f : {"det_a.csv", "det_b.csv", "det_a.txt", "det_b.txt"}) std::remove(f);

    Outcome o;
    o.pass = rc1 == 0 && rc2 == 0 && same_csv && same_stdout;
    o.detail = same_csv ? "repeated runs emit byte-identical CSV and summary"
                        : "outputs differ between repeated runs";
    return o;
}

}  // namespace

int main() {
    setbuf(stdout, nullptr);
    struct Criterion {
        const char* name;
        Outcome (*fn)();
    };
    const Criterion criteria[] = {
        {"criterion 1 prox-oracle equivalence", criterion_prox_oracles},
        {"criterion 2 gradient correctness", criterion_gradients},
        {"criterion 3 batch DRs convergence", criterion_batch_convergence},
        {"criterion 4 accuracy-measure monotonicity", criterion_monotone_accuracy},
        {"criterion 5 O(1/t) rate proxy", criterion_rate_proxy},
        {"criterion 6 rank-one identity", criterion_rank_one_identity},
        {"criterion 7 paper-scale solver ordering", criterion_paper_scale},
        {"criterion 8 online regret sanity", criterion_regret},
        {"criterion 9 logistic end-to-end", criterion_logistic},
        {"criterion 10 seeded determinism", criterion_determinism},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s: %s (%s)\n", c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
