#include "drsplit/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "drsplit/errors.hpp"

namespace drs {

void TraceBuffer::record(const TraceRecord& rec) {
    if (!std::isfinite(rec.objective) || !std::isfinite(rec.eps_norm) ||
        !std::isfinite(rec.avg_regret) || !std::isfinite(rec.elapsed)) {
        throw NonFiniteTrace("trace record at t=" + std::to_string(rec.t) +
                             " has a nonfinite field");
    }
    if (!rows_.empty() && rec.t <= rows_.back().t) {
        throw InvalidConfig("trace iteration numbers must be strictly increasing");
    }
    rows_.push_back(rec);
}

Vector accuracy_measure(const Vector& x, double lambda,
                        const std::function<Vector(const Vector&)>& grad_full,
                        const std::function<Vector(const Vector&, double)>& prox_h) {
    if (!(lambda > 0.0)) {
        throw NonPositiveLambda("accuracy_measure: lambda must be positive");
    }
    const Vector grad = grad_full(x);
    Vector shifted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] - lambda * grad[i];
    Vector eps = prox_h(shifted, lambda);
    for (std::size_t i = 0; i < x.size(); ++i) eps[i] = x[i] - eps[i];
    return eps;
}

RegretAccumulator::RegretAccumulator(const Problem& problem, Vector comparator, RegretMode mode)
    : problem_(&problem), comparator_(std::move(comparator)), mode_(mode) {
    mu_ = regularizer_weight(problem);
    comparator_h_ = mu_ * norm1(comparator_);
    if (mode_ == RegretMode::batch) {
        comparator_objective_ = objective(problem, comparator_);
    } else {
        const std::size_t count = sample_count(problem);
        comparator_losses_.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            comparator_losses_[i] = sample_loss_grad(problem, i, comparator_).first;
        }
    }
}

double RegretAccumulator::add(const Vector& prediction) {
    if (mode_ == RegretMode::batch) {
        iterate_sum_ += objective(*problem_, prediction);
        comparator_sum_ += comparator_objective_;
    } else {
        const std::size_t index = round_ % comparator_losses_.size();
        iterate_sum_ +=
            sample_loss_grad(*problem_, index, prediction).first + mu_ * norm1(prediction);
        comparator_sum_ += comparator_losses_[index] + comparator_h_;
    }
    ++round_;
    return value();
}

double RegretAccumulator::value() const {
    if (round_ == 0) return 0.0;
    return (iterate_sum_ - comparator_sum_) / static_cast<double>(round_);
}

double regret(const Problem& problem, const std::vector<Vector>& iterates,
              const Vector& comparator, RegretMode mode) {
    if (iterates.empty()) {
        throw InvalidConfig("regret: iterate stream must not be empty");
    }
    RegretAccumulator acc(problem, comparator, mode);
    double r = 0.0;
    for (const Vector& x : iterates) r = acc.add(x);
    return r;
}

RateFit rate_fit(const std::vector<std::pair<std::size_t, double>>& series) {
    if (series.empty()) {
        throw InvalidConfig("rate_fit: series must not be empty");
    }
    RateFit fit;
    for (const auto& [t, eps_sq] : series) {
        fit.c_hat = std::max(fit.c_hat, static_cast<double>(t) * eps_sq);
    }
    const std::size_t window = (series.size() + 3) / 4;
    double early = 0.0, late = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
        early = std::max(early, static_cast<double>(series[i].first) * series[i].second);
    }
    for (std::size_t i = series.size() - window; i < series.size(); ++i) {
        late = std::max(late, static_cast<double>(series[i].first) * series[i].second);
    }
    fit.max_violation = early > 0.0 ? late / early : (late > 0.0 ? HUGE_VAL : 1.0);
    return fit;
}

void write_csv(std::ostream& out, const std::vector<TraceRecord>& rows, bool include_timing) {
    out << "t,objective,eps_norm,avg_regret,elapsed_s\n";
    char buf[160];
    for (const TraceRecord& r : rows) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.6f\n", r.t, r.objective,
                      r.eps_norm, r.avg_regret, include_timing ? r.elapsed : 0.0);
        out << buf;
    }
    if (!out) throw IoFailure("trace csv: write failed");
}

void write_csv_file(const std::string& path, const std::vector<TraceRecord>& rows,
                    bool include_timing) {
    std::ofstream out(path);
    if (!out) throw IoFailure("trace csv: cannot open " + path + " for writing");
    write_csv(out, rows, include_timing);
}

}  // namespace drs
