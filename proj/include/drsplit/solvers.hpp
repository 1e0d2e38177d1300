#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "drsplit/diagnostics.hpp"
#include "drsplit/numerics.hpp"
#include "drsplit/problems.hpp"

namespace drs {

enum class SolverKind { drs, odrs, iodrs, opg };

std::string to_string(SolverKind kind);
std::optional<SolverKind> parse_solver_kind(const std::string& name);

// Relaxation weights lambda_t of the u-update, constant or an explicit
// sequence (clamped to its last entry past the end).
struct RelaxSchedule {
    double constant = 1.0;
    std::vector<double> sequence;

    double at(std::size_t t) const {
        if (sequence.empty()) return constant;
        return sequence[t < sequence.size() ? t : sequence.size() - 1];
    }
};

struct SolverConfig {
    double lambda = 1.0;          // proximal step of both prox evaluations
    RelaxSchedule relax;          // lambda_t, each within [1e-3, 2 - 1e-3]
    std::size_t iterations = 2000;
    std::uint64_t seed = 0;
};

// Throws NonPositiveLambda / InvalidConfig on out-of-range values.
void validate(const SolverConfig& cfg);

// The splitting triple. After any step, x equals prox_h of the previous u.
struct SolverState {
    Vector u;
    Vector x;
    Vector z;
    std::size_t t = 0;
};

SolverState initial_state(std::size_t dim);

// Statistics from prox evaluations that run an inner solve.
struct InnerSolveStats {
    std::size_t calls = 0;
    std::size_t max_iterations = 0;
};

// Problem hooks the steppers drive. The callbacks borrow the problem they
// were built from; keep it alive for as long as the callbacks are used.
// prox_g with no sample index evaluates the prox of the full averaged loss;
// with an index, the prox of that single round's (unnormalized) loss.
struct StepCallbacks {
    std::size_t num_samples = 0;
    std::function<Vector(const Vector& anchor, double lambda)> prox_h;
    std::function<Vector(std::optional<std::size_t> sample, const Vector& anchor, double lambda)>
        prox_g;
    std::function<Vector(std::size_t sample, const Vector& point)> grad_g;
};

StepCallbacks make_callbacks(const LassoProblem& p, double lambda);
StepCallbacks make_callbacks(const LogisticProblem& p, double lambda,
                             InnerSolveStats* stats = nullptr);
StepCallbacks make_callbacks(const Problem& p, double lambda, InnerSolveStats* stats = nullptr);

// One batch splitting step:
//   x' = prox_h(u); z' = prox_g(all, 2x' - u); u' = u + lambda_t (z' - x').
SolverState drs_step(const SolverState& state, const StepCallbacks& cb, const SolverConfig& cfg);

// Online variant: z' uses the round's single-sample prox.
SolverState odrs_step(const SolverState& state, const StepCallbacks& cb, const SolverConfig& cfg,
                      std::size_t sample_index);

// Inexact online variant: the round's loss is linearized at the previous z.
SolverState iodrs_step(const SolverState& state, const StepCallbacks& cb, const SolverConfig& cfg,
                       std::size_t sample_index);

// Proximal-gradient step x' = prox_{step h}(x - step * grad).
Vector opg_step(const Vector& x, const Vector& grad_at_x, double step,
                const std::function<Vector(const Vector&, double)>& prox_h);

struct RunOptions {
    // Comparator x* for the regret column; computed by reference_solution
    // at reference_tol when absent.
    std::optional<Vector> comparator;
    double reference_tol = 1e-10;
    // Record every iteration regardless of trace length.
    bool record_every_iteration = false;
    InnerSolveStats* inner_stats = nullptr;
};

// Drives the chosen solver for cfg.iterations rounds, recording one trace
// row per (cadenced) iteration, and returns the final x. Online solvers
// consume samples in order, cycling past one pass. Throws NonFiniteIterate
// if an iterate diverges; rows recorded before the failure stay in the sink.
Vector run(const Problem& problem, SolverKind kind, const SolverConfig& cfg, TraceSink& sink,
           const RunOptions& opts = {});

struct RunResult {
    Vector final_x;
    std::vector<TraceRecord> trace;
};

RunResult run(const Problem& problem, SolverKind kind, const SolverConfig& cfg,
              const RunOptions& opts = {});

}  // namespace drs
