#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "drsplit/numerics.hpp"
#include "drsplit/problems.hpp"

namespace drs {

struct TraceRecord {
    std::size_t t = 0;         // iteration number, strictly increasing within a trace
    double objective = 0.0;    // full composite objective at the round's iterate
    double eps_norm = 0.0;     // |eps_g(x_t, lambda)| against the full gradient
    double avg_regret = 0.0;   // running average regret over rounds 1..t
    double elapsed = 0.0;      // wall seconds since the run started
};

class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void record(const TraceRecord& rec) = 0;
};

// In-memory sink; rejects nonfinite fields and out-of-order iteration numbers.
class TraceBuffer : public TraceSink {
public:
    void record(const TraceRecord& rec) override;
    const std::vector<TraceRecord>& rows() const { return rows_; }
    void clear() { rows_.clear(); }

private:
    std::vector<TraceRecord> rows_;
};

// eps_g(x, lambda) = x - prox_{lambda h}(x - lambda * grad g(x)).
// Zero exactly at solutions of min g + h.
Vector accuracy_measure(const Vector& x, double lambda,
                        const std::function<Vector(const Vector&)>& grad_full,
                        const std::function<Vector(const Vector&, double)>& prox_h);

// Which loss the round-t term f_t uses: the full objective every round
// (batch solvers) or the cycled per-sample loss (online solvers).
enum class RegretMode { batch, online };

// Running average regret against a fixed comparator:
//   R(t) = (1/t) sum_s [g_s(x_s) + h(x_s)] - [(1/t) sum_s g_s(x*) + h(x*)].
class RegretAccumulator {
public:
    RegretAccumulator(const Problem& problem, Vector comparator, RegretMode mode);

    // Advance one round with the round's prediction; returns R(t).
    double add(const Vector& prediction);

    double value() const;
    std::size_t rounds() const { return round_; }

private:
    const Problem* problem_;
    Vector comparator_;
    RegretMode mode_;
    double mu_ = 0.0;
    double comparator_h_ = 0.0;
    double comparator_objective_ = 0.0;     // batch mode: f(x*)
    std::vector<double> comparator_losses_; // online mode: g_i(x*) per sample
    double iterate_sum_ = 0.0;
    double comparator_sum_ = 0.0;
    std::size_t round_ = 0;
};

// Average regret over a whole iterate stream (Eq.-(23) form).
double regret(const Problem& problem, const std::vector<Vector>& iterates,
              const Vector& comparator, RegretMode mode);

// Fit of |eps|^2 <= C/t over a series of (t, |eps|^2) points.
struct RateFit {
    double c_hat = 0.0;          // max over the series of t * |eps|^2
    double max_violation = 1.0;  // late-window C over early-window C
};
RateFit rate_fit(const std::vector<std::pair<std::size_t, double>>& series);

// CSV emission with the exact column schema
// `t,objective,eps_norm,avg_regret,elapsed_s`. Without timing the elapsed
// column is written as zero so repeated runs are byte-identical.
void write_csv(std::ostream& out, const std::vector<TraceRecord>& rows, bool include_timing);
void write_csv_file(const std::string& path, const std::vector<TraceRecord>& rows,
                    bool include_timing);

}  // namespace drs
