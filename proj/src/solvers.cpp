#include "drsplit/solvers.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <variant>

#include "drsplit/errors.hpp"
#include "drsplit/prox.hpp"

namespace drs {

std::string to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::drs: return "drs";
        case SolverKind::odrs: return "odrs";
        case SolverKind::iodrs: return "iodrs";
        case SolverKind::opg: return "opg";
    }
    return "unknown";
}

std::optional<SolverKind> parse_solver_kind(const std::string& name) {
    if (name == "drs") return SolverKind::drs;
    if (name == "odrs") return SolverKind::odrs;
    if (name == "iodrs") return SolverKind::iodrs;
    if (name == "opg") return SolverKind::opg;
    return std::nullopt;
}

namespace {

constexpr double kRelaxMin = 1e-3;
constexpr double kRelaxMax = 2.0 - 1e-3;
constexpr double kDivergenceBound = 1e12;
constexpr std::size_t kMaxTraceRows = 10000;

void check_relax_value(double value) {
    if (!(value >= kRelaxMin && value <= kRelaxMax)) {
        throw InvalidConfig("relaxation weight " + std::to_string(value) + " outside [" +
                            std::to_string(kRelaxMin) + ", " + std::to_string(kRelaxMax) + "]");
    }
}

}  // namespace

void validate(const SolverConfig& cfg) {
    if (!(cfg.lambda > 0.0)) {
        throw NonPositiveLambda("solver config: lambda must be positive, got " +
                                std::to_string(cfg.lambda));
    }
    if (cfg.relax.sequence.empty()) {
        check_relax_value(cfg.relax.constant);
    } else {
        for (double v : cfg.relax.sequence) check_relax_value(v);
    }
}

SolverState initial_state(std::size_t dim) {
    SolverState s;
    s.u.assign(dim, 0.0);
    s.x.assign(dim, 0.0);
    s.z.assign(dim, 0.0);
    return s;
}

StepCallbacks make_callbacks(const LassoProblem& p, double lambda) {
    StepCallbacks cb;
    cb.num_samples = p.A.rows();
    const double mu = p.mu;
    cb.prox_h = [mu](const Vector& anchor, double lam) { return prox_l1(anchor, mu * lam); };

    // The single-row problem routes its batch prox through the rank-one
    // path so the online and batch steps coincide bit for bit.
    std::shared_ptr<LeastSquaresProx> cached;
    if (p.A.rows() > 1) cached = std::make_shared<LeastSquaresProx>(p.A, p.b, lambda);
    cb.prox_g = [&p, cached](std::optional<std::size_t> sample, const Vector& anchor,
                             double lam) {
        if (sample) {
            return prox_ls_rank1(p.A.row(*sample), p.b[*sample], anchor, lam);
        }
        if (p.A.rows() == 1) {
            return prox_ls_rank1(p.A.row(0), p.b[0], anchor, lam);
        }
        if (cached && cached->lambda() == lam) return cached->apply(anchor);
        return prox_ls_batch(p.A, p.b, anchor, lam);
    };
    cb.grad_g = [&p](std::size_t sample, const Vector& point) {
        return sample_loss_grad(p, sample, point).second;
    };
    return cb;
}

StepCallbacks make_callbacks(const LogisticProblem& p, double lambda, InnerSolveStats* stats) {
    (void)lambda;  // the logistic prox has no factorization to cache
    StepCallbacks cb;
    cb.num_samples = p.samples.rows();
    const double mu = p.mu;
    cb.prox_h = [mu](const Vector& anchor, double lam) { return prox_l1(anchor, mu * lam); };

    auto track = [stats](ProxOutcome outcome) {
        if (stats != nullptr) {
            ++stats->calls;
            stats->max_iterations = std::max(stats->max_iterations, outcome.inner_iterations);
        }
        return std::move(outcome.point);
    };
    cb.prox_g = [&p, track](std::optional<std::size_t> sample, const Vector& anchor,
                            double lam) {
        if (!sample) {
            return track(prox_logistic(p.samples, p.labels, anchor, lam));
        }
        Matrix row(1, p.samples.cols());
        for (std::size_t j = 0; j < p.samples.cols(); ++j) row(0, j) = p.samples(*sample, j);
        const Vector label{p.labels[*sample]};
        return track(prox_logistic(row, label, anchor, lam));
    };
    cb.grad_g = [&p](std::size_t sample, const Vector& point) {
        return sample_loss_grad(p, sample, point).second;
    };
    return cb;
}

StepCallbacks make_callbacks(const Problem& p, double lambda, InnerSolveStats* stats) {
    if (const auto* lasso = std::get_if<LassoProblem>(&p)) {
        return make_callbacks(*lasso, lambda);
    }
    return make_callbacks(std::get<LogisticProblem>(p), lambda, stats);
}

namespace {

SolverState splitting_step(const SolverState& state, const StepCallbacks& cb,
                           const SolverConfig& cfg, const std::optional<std::size_t>& sample,
                           bool linearized) {
    SolverState next;
    next.x = cb.prox_h(state.u, cfg.lambda);

    Vector anchor(state.u.size());
    for (std::size_t i = 0; i < anchor.size(); ++i) anchor[i] = 2.0 * next.x[i] - state.u[i];

    if (linearized) {
        const Vector grad = cb.grad_g(*sample, state.z);
        next.z = linearized_prox(grad, anchor, cfg.lambda);
    } else {
        next.z = cb.prox_g(sample, anchor, cfg.lambda);
    }

    const double relax = cfg.relax.at(state.t);
    next.u.resize(state.u.size());
    for (std::size_t i = 0; i < next.u.size(); ++i) {
        next.u[i] = state.u[i] + relax * (next.z[i] - next.x[i]);
    }
    next.t = state.t + 1;
    return next;
}

void check_sample_index(std::size_t sample_index, const StepCallbacks& cb) {
    if (sample_index >= cb.num_samples) {
        throw StreamExhausted("sample index " + std::to_string(sample_index) +
                              " out of range: stream has " + std::to_string(cb.num_samples) +
                              " samples");
    }
}

}  // namespace

SolverState drs_step(const SolverState& state, const StepCallbacks& cb, const SolverConfig& cfg) {
    return splitting_step(state, cb, cfg, std::nullopt, false);
}

SolverState odrs_step(const SolverState& state, const StepCallbacks& cb, const SolverConfig& cfg,
                      std::size_t sample_index) {
    check_sample_index(sample_index, cb);
    return splitting_step(state, cb, cfg, sample_index, false);
}

SolverState iodrs_step(const SolverState& state, const StepCallbacks& cb, const SolverConfig& cfg,
                       std::size_t sample_index) {
    check_sample_index(sample_index, cb);
    return splitting_step(state, cb, cfg, sample_index, true);
}

Vector opg_step(const Vector& x, const Vector& grad_at_x, double step,
                const std::function<Vector(const Vector&, double)>& prox_h) {
    if (!(step > 0.0)) {
        throw NonPositiveStep("opg_step: step must be positive, got " + std::to_string(step));
    }
    Vector shifted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - step * grad_at_x[i];
    return prox_h(shifted, step);
}

namespace {

void check_iterate(const SolverState& state) {
    if (!all_finite(state.u) || !all_finite(state.x) || !all_finite(state.z) ||
        norm_inf(state.u) > kDivergenceBound) {
        throw NonFiniteIterate("iterate diverged at t=" + std::to_string(state.t));
    }
}

}  // namespace

Vector run(const Problem& problem, SolverKind kind, const SolverConfig& cfg, TraceSink& sink,
           const RunOptions& opts) {
    validate(cfg);
    const std::size_t dim = dimension(problem);
    const std::size_t samples = sample_count(problem);
    const StepCallbacks cb = make_callbacks(problem, cfg.lambda, opts.inner_stats);

    const Vector comparator =
        opts.comparator ? *opts.comparator : reference_solution(problem, opts.reference_tol);
    RegretAccumulator regret(problem, comparator,
                             kind == SolverKind::drs ? RegretMode::batch : RegretMode::online);

    const std::size_t total = cfg.iterations;
    const std::size_t stride =
        (opts.record_every_iteration || total <= kMaxTraceRows)
            ? 1
            : (total + kMaxTraceRows - 1) / kMaxTraceRows;

    const auto grad_full_fn = [&](const Vector& v) { return full_gradient(problem, v); };

    SolverState state = initial_state(dim);
    const auto start = std::chrono::steady_clock::now();

    for (std::size_t round = 1; round <= total; ++round) {
        Vector prediction;
        const std::size_t sample = (round - 1) % samples;
        switch (kind) {
            case SolverKind::drs:
                state = drs_step(state, cb, cfg);
                prediction = state.x;
                break;
            case SolverKind::odrs:
                state = odrs_step(state, cb, cfg, sample);
                prediction = state.x;
                break;
            case SolverKind::iodrs:
                state = iodrs_step(state, cb, cfg, sample);
                prediction = state.x;
                break;
            case SolverKind::opg: {
                prediction = state.x;
                const double step =
                    cfg.lambda / std::sqrt(static_cast<double>(round));
                const Vector grad = cb.grad_g(sample, state.x);
                Vector next = opg_step(state.x, grad, step, cb.prox_h);
                state.x = next;
                state.z = next;
                state.u = std::move(next);
                ++state.t;
                break;
            }
        }
        check_iterate(state);

        const double avg_regret = regret.add(prediction);

        if ((round - 1) % stride == 0 || round == total) {
            TraceRecord rec;
            rec.t = round;
            rec.objective = objective(problem, prediction);
            rec.eps_norm = norm2(accuracy_measure(prediction, cfg.lambda, grad_full_fn,
                                                  cb.prox_h));
            rec.avg_regret = avg_regret;
            rec.elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            sink.record(rec);
        }
    }

    if (kind == SolverKind::opg) return state.x;
    return cb.prox_h(state.u, cfg.lambda);
}

RunResult run(const Problem& problem, SolverKind kind, const SolverConfig& cfg,
              const RunOptions& opts) {
    TraceBuffer buffer;
    Vector final_x = run(problem, kind, cfg, buffer, opts);
    return RunResult{std::move(final_x), buffer.rows()};
}

}  // namespace drs
