#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "drsplit/numerics.hpp"

namespace drs {

// How b is assembled from the planted signal in the lasso generator.
// `paper` follows the b = A x0 / N convention; `classic` uses b = A x0.
enum class Scaling { paper, classic };

struct LassoProblem {
    Matrix A;       // N x n, unit-norm columns when generator-produced
    Vector b;       // length N
    double mu = 0.0;
    std::optional<Vector> ground_truth;  // planted x0, when known
};

struct LogisticProblem {
    Matrix samples;  // T x n
    Vector labels;   // +-1 each
    double mu = 0.0;
    std::optional<Vector> ground_truth;  // planted weight vector, when known
};

using Problem = std::variant<LassoProblem, LogisticProblem>;

// Synthetic lasso instance: Gaussian A with normalized columns, k-sparse
// standard-normal x0, b = A x0 (/N under paper scaling) plus sigma * noise,
// mu = 0.1 * |A^T b / N|_inf.
LassoProblem generate_lasso(std::uint64_t seed, std::size_t n_samples = 1000,
                            std::size_t dim = 100, std::size_t sparsity = 10,
                            double noise_sigma = 1e-3, Scaling scaling = Scaling::paper);

// Synthetic classification instance: Gaussian column-normalized samples,
// k-sparse +-1 weight vector, labels from the noisy margin sign,
// mu = 0.1 * |X^T y / N|_inf.
LogisticProblem generate_logistic(std::uint64_t seed, std::size_t n_samples,
                                  std::size_t dim, std::size_t sparsity);

std::size_t sample_count(const Problem& p);
std::size_t dimension(const Problem& p);
double regularizer_weight(const Problem& p);

// Full composite objective g(x) + mu |x|_1 with g averaged over samples.
double objective(const LassoProblem& p, const Vector& x);
double objective(const LogisticProblem& p, const Vector& w);
double objective(const Problem& p, const Vector& x);

// Smooth part's full gradient (average over samples).
Vector full_gradient(const LassoProblem& p, const Vector& x);
Vector full_gradient(const LogisticProblem& p, const Vector& w);
Vector full_gradient(const Problem& p, const Vector& x);

// Loss and gradient of the single round-t term (unnormalized: the full loss
// is the average of these).
std::pair<double, Vector> sample_loss_grad(const LassoProblem& p, std::size_t index,
                                           const Vector& x);
std::pair<double, Vector> sample_loss_grad(const LogisticProblem& p, std::size_t index,
                                           const Vector& w);
std::pair<double, Vector> sample_loss_grad(const Problem& p, std::size_t index,
                                           const Vector& x);

// Independent high-accuracy solver: proximal gradient with backtracking,
// stopped when |x - prox_{lr h}(x - lr grad g(x))| <= tol at lr = 1/L.
// This is the oracle the splitting solvers are tested against.
Vector reference_solution(const LassoProblem& p, double tol);
Vector reference_solution(const LogisticProblem& p, double tol);
Vector reference_solution(const Problem& p, double tol);

// Flat text serialization: header `lasso N n mu` or `logistic N n mu`,
// then the data rows, then b / labels, then the optional ground truth,
// all with 17 significant digits so files round-trip bit-exactly.
void save_problem(const Problem& p, std::ostream& out);
void save_problem(const Problem& p, const std::string& path);
Problem load_problem(std::istream& in);
Problem load_problem_file(const std::string& path);

}  // namespace drs
