#include "drsplit/prox.hpp"

#include <cmath>
#include <string>

#include "drsplit/errors.hpp"

namespace drs {

namespace {

void require_positive_lambda(double lambda, const char* where) {
    if (!(lambda > 0.0)) {
        throw NonPositiveLambda(std::string(where) + ": lambda must be positive, got " +
                                std::to_string(lambda));
    }
}

double checked_lambda(double lambda, const char* where) {
    require_positive_lambda(lambda, where);
    return lambda;
}

void check_labels(const Vector& labels) {
    for (double y : labels) {
        if (y != 1.0 && y != -1.0) {
            throw DimensionMismatch("logistic labels must be +-1, got " + std::to_string(y));
        }
    }
}

}  // namespace

double logistic_loss(double margin) {
    if (margin >= 0.0) return std::log1p(std::exp(-margin));
    return -margin + std::log1p(std::exp(margin));
}

double logistic_slope(double margin) {
    if (margin >= 0.0) {
        const double e = std::exp(-margin);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(margin));
}

Vector prox_l1(const Vector& v, double threshold) {
    if (threshold < 0.0) {
        throw NegativeThreshold("prox_l1: threshold must be nonnegative, got " +
                                std::to_string(threshold));
    }
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]) - threshold;
        out[i] = mag > 0.0 ? (v[i] > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
}

LeastSquaresProx::LeastSquaresProx(const Matrix& A, const Vector& b, double lambda)
    : gram_(gram(A)),
      atb_(matvec_transpose(A, b)),
      shift_(static_cast<double>(A.rows()) /
             (2.0 * checked_lambda(lambda, "LeastSquaresProx"))),
      lambda_(lambda),
      factor_([this] {
          Matrix shifted = gram_;
          for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) += shift_;
          return CholeskyFactor(shifted);
      }()) {}

Vector LeastSquaresProx::apply(const Vector& anchor) const {
    if (anchor.size() != atb_.size()) {
        throw DimensionMismatch("LeastSquaresProx::apply: anchor length mismatch");
    }
    Vector rhs(atb_.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = atb_[i] + shift_ * anchor[i];
    Vector y = factor_.solve(rhs);

    // Refinement keeps the solve residual near machine precision.
    const double bound = 0.5e-10 * (1.0 + norm2(rhs));
    for (int pass = 0; pass < 4; ++pass) {
        Vector residual = matvec(gram_, y);
        for (std::size_t i = 0; i < residual.size(); ++i) {
            residual[i] = rhs[i] - (residual[i] + shift_ * y[i]);
        }
        if (norm2(residual) <= bound) break;
        const Vector correction = factor_.solve(residual);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += correction[i];
    }
    return y;
}

Vector prox_ls_batch(const Matrix& A, const Vector& b, const Vector& anchor, double lambda) {
    return LeastSquaresProx(A, b, lambda).apply(anchor);
}

Vector prox_ls_rank1(const Vector& a, double b_scalar, const Vector& anchor, double lambda) {
    require_positive_lambda(lambda, "prox_ls_rank1");
    if (a.size() != anchor.size()) {
        throw DimensionMismatch("prox_ls_rank1: sample/anchor length mismatch");
    }
    const double c = 1.0 / (2.0 * lambda);
    Vector rhs(anchor.size());
    for (std::size_t i = 0; i < anchor.size(); ++i) rhs[i] = a[i] * b_scalar + c * anchor[i];
    return rank_one_solve(a, c, rhs);
}

Vector linearized_prox(const Vector& grad_at_z, const Vector& anchor, double lambda) {
    require_positive_lambda(lambda, "linearized_prox");
    if (grad_at_z.size() != anchor.size()) {
        throw DimensionMismatch("linearized_prox: gradient/anchor length mismatch");
    }
    Vector out(anchor.size());
    for (std::size_t i = 0; i < anchor.size(); ++i) out[i] = anchor[i] - lambda * grad_at_z[i];
    return out;
}

std::pair<double, Vector> logistic_value_grad(const Matrix& samples, const Vector& labels,
                                              const Vector& w) {
    if (labels.size() != samples.rows()) {
        throw DimensionMismatch("logistic_value_grad: labels length " +
                                std::to_string(labels.size()) + " vs " +
                                std::to_string(samples.rows()) + " samples");
    }
    check_labels(labels);
    const std::size_t count = samples.rows();
    const double inv = count > 0 ? 1.0 / static_cast<double>(count) : 0.0;
    double value = 0.0;
    Vector grad(w.size(), 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const double* xi = samples.row_ptr(i);
        double margin = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) margin += xi[j] * w[j];
        margin *= labels[i];
        value += logistic_loss(margin);
        const double coeff = -labels[i] * logistic_slope(margin);
        for (std::size_t j = 0; j < w.size(); ++j) grad[j] += coeff * xi[j];
    }
    value *= inv;
    for (double& gj : grad) gj *= inv;
    return {value, grad};
}

ProxOutcome prox_logistic(const Matrix& samples, const Vector& labels, const Vector& anchor,
                          double lambda, double tol, std::size_t max_inner) {
    require_positive_lambda(lambda, "prox_logistic");
    if (!(tol > 0.0)) {
        throw InvalidConfig("prox_logistic: tolerance must be positive");
    }
    check_labels(labels);
    const std::size_t count = samples.rows();
    const std::size_t n = anchor.size();
    const double inv = count > 0 ? 1.0 / static_cast<double>(count) : 0.0;

    const auto subproblem_value = [&](const Vector& z) {
        double v = logistic_value_grad(samples, labels, z).first;
        double q = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = z[j] - anchor[j];
            q += d * d;
        }
        return v + q / (2.0 * lambda);
    };

    Vector z = anchor;  // best available starting point: exact for a constant loss
    for (std::size_t iter = 0; iter <= max_inner; ++iter) {
        auto [loss, grad] = logistic_value_grad(samples, labels, z);
        for (std::size_t j = 0; j < n; ++j) grad[j] += (z[j] - anchor[j]) / lambda;
        const double residual = norm2(grad);
        if (residual <= tol) {
            return ProxOutcome{std::move(z), iter, residual};
        }
        if (iter == max_inner) break;

        // Newton system: ((1/T) sum s_i (1 - s_i) x_i x_i^T + I/lambda) d = -grad.
        Matrix hess(n, n);
        for (std::size_t i = 0; i < count; ++i) {
            const double* xi = samples.row_ptr(i);
            double margin = 0.0;
            for (std::size_t j = 0; j < n; ++j) margin += xi[j] * z[j];
            margin *= labels[i];
            const double s = logistic_slope(margin);
            const double weight = inv * s * (1.0 - s);
            for (std::size_t j = 0; j < n; ++j) {
                const double wxj = weight * xi[j];
                for (std::size_t k = j; k < n; ++k) hess(j, k) += wxj * xi[k];
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            hess(j, j) += 1.0 / lambda;
            for (std::size_t k = j + 1; k < n; ++k) hess(k, j) = hess(j, k);
        }
        Vector direction = CholeskyFactor(hess).solve(grad);
        for (double& d : direction) d = -d;

        const double directional = dot(grad, direction);  // < 0 by positive definiteness
        const double base = subproblem_value(z);
        double step = 1.0;
        // Backtrack only while the predicted decrease is resolvable in
        // double arithmetic; below that the full Newton step is the right
        // move and the Armijo test would accept spuriously tiny steps.
        if (1e-4 * std::abs(directional) >= 1e-15 * (1.0 + std::abs(base))) {
            while (step > 1e-12) {
                Vector trial(n);
                for (std::size_t j = 0; j < n; ++j) trial[j] = z[j] + step * direction[j];
                if (subproblem_value(trial) <= base + 1e-4 * step * directional) break;
                step *= 0.5;
            }
            if (step <= 1e-12) step = 1.0;
        }
        for (std::size_t j = 0; j < n; ++j) z[j] += step * direction[j];
    }
    throw InnerSolveFailed("prox_logistic: no convergence to tol=" + std::to_string(tol) +
                           " within " + std::to_string(max_inner) + " Newton steps");
}

}  // namespace drs
