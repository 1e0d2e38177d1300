#pragma once

#include <cstddef>
#include <utility>

#include "drsplit/numerics.hpp"

namespace drs {

// Result of a proximal evaluation that may have run an inner solve.
struct ProxOutcome {
    Vector point;
    std::size_t inner_iterations = 0;  // 0 for closed-form operators
    double inner_residual = 0.0;       // final gradient norm of the inner solve
};

// Componentwise soft-thresholding: sign(v) * max(|v| - threshold, 0).
Vector prox_l1(const Vector& v, double threshold);

// argmin_z (1/N) |A z - b|^2 + (1/(2 lambda)) |z - anchor|^2 with N = A.rows(),
// i.e. (A^T A + (N / (2 lambda)) I)^{-1} (A^T b + (N / (2 lambda)) anchor).
Vector prox_ls_batch(const Matrix& A, const Vector& b, const Vector& anchor, double lambda);

// Same subproblem with the Gram matrix factored once; reuse across iterations
// when A, b and lambda are fixed. Immutable after construction.
class LeastSquaresProx {
public:
    LeastSquaresProx(const Matrix& A, const Vector& b, double lambda);

    Vector apply(const Vector& anchor) const;

    double lambda() const { return lambda_; }

private:
    Matrix gram_;
    Vector atb_;
    double shift_;  // N / (2 lambda)
    double lambda_;
    CholeskyFactor factor_;
};

// argmin_z |a^T z - b|^2 + (1/(2 lambda)) |z - anchor|^2 via Sherman-Morrison:
// (a a^T + (1/(2 lambda)) I)^{-1} (a b + (1/(2 lambda)) anchor).
Vector prox_ls_rank1(const Vector& a, double b_scalar, const Vector& anchor, double lambda);

// argmin_z grad^T (z - z_ref) + (1/(2 lambda)) |z - anchor|^2 = anchor - lambda * grad.
Vector linearized_prox(const Vector& grad_at_z, const Vector& anchor, double lambda);

// log(1 + exp(-margin)), overflow-safe for any margin.
double logistic_loss(double margin);

// sigma(-margin) = 1 / (1 + exp(margin)); the magnitude of d/dm logistic_loss.
double logistic_slope(double margin);

// Mean logistic loss (1/T) sum log(1 + exp(-y_i w^T x_i)) and its gradient,
// overflow-safe for arbitrarily large margins. Labels must be +-1.
std::pair<double, Vector> logistic_value_grad(const Matrix& samples, const Vector& labels,
                                              const Vector& w);

// argmin_z (1/T) sum log(1 + exp(-y_i z^T x_i)) + (1/(2 lambda)) |z - anchor|^2
// by damped Newton. The subproblem is (1/lambda)-strongly convex, so this
// converges in a handful of steps; throws InnerSolveFailed past max_inner.
ProxOutcome prox_logistic(const Matrix& samples, const Vector& labels, const Vector& anchor,
                          double lambda, double tol = 1e-10, std::size_t max_inner = 50);

}  // namespace drs
