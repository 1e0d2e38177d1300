#include "drsplit/problems.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "drsplit/errors.hpp"
#include "drsplit/prox.hpp"

namespace drs {

namespace {

// Gaussian matrix with every column scaled to unit Euclidean norm.
Matrix column_normalized_gaussian(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
    }
    for (std::size_t j = 0; j < cols; ++j) {
        double sq = 0.0;
        for (std::size_t i = 0; i < rows; ++i) sq += m(i, j) * m(i, j);
        const double norm = std::sqrt(sq);
        if (norm > 0.0) {
            for (std::size_t i = 0; i < rows; ++i) m(i, j) /= norm;
        }
    }
    return m;
}

// First k entries of a uniformly shuffled index range (partial Fisher-Yates).
std::vector<std::size_t> sparse_support(Rng& rng, std::size_t dim, std::size_t k) {
    std::vector<std::size_t> indices(dim);
    for (std::size_t i = 0; i < dim; ++i) indices[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(dim - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(k);
    return indices;
}

double nonzero_gaussian(Rng& rng) {
    double v = rng.gaussian();
    while (v == 0.0) v = rng.gaussian();
    return v;
}

void check_sparsity(std::size_t k, std::size_t dim) {
    if (k > dim) {
        throw InvalidSparsity("sparsity " + std::to_string(k) + " exceeds dimension " +
                              std::to_string(dim));
    }
}

void check_index(std::size_t index, std::size_t count) {
    if (index >= count) {
        throw IndexOutOfRange("sample index " + std::to_string(index) + " out of range (" +
                              std::to_string(count) + " samples)");
    }
}

double mu_from_correlations(const Matrix& data, const Vector& rhs) {
    Vector corr = matvec_transpose(data, rhs);
    return 0.1 * norm_inf(corr) / static_cast<double>(data.rows());
}

}  // namespace

LassoProblem generate_lasso(std::uint64_t seed, std::size_t n_samples, std::size_t dim,
                            std::size_t sparsity, double noise_sigma, Scaling scaling) {
    if (n_samples == 0 || dim == 0) {
        throw InvalidConfig("generate_lasso: sample count and dimension must be positive");
    }
    check_sparsity(sparsity, dim);
    if (noise_sigma < 0.0) {
        throw InvalidConfig("generate_lasso: noise sigma must be nonnegative");
    }

    Rng rng(seed);
    LassoProblem p;
    p.A = column_normalized_gaussian(rng, n_samples, dim);

    Vector x0(dim, 0.0);
    for (std::size_t idx : sparse_support(rng, dim, sparsity)) {
        x0[idx] = nonzero_gaussian(rng);
    }

    p.b = matvec(p.A, x0);
    const double scale = scaling == Scaling::paper ? 1.0 / static_cast<double>(n_samples) : 1.0;
    for (double& v : p.b) v = v * scale + noise_sigma * rng.gaussian();

    p.mu = mu_from_correlations(p.A, p.b);
    if (!(p.mu > 0.0)) {
        throw MuNotPositive("generate_lasso: degenerate instance produced mu = " +
                            std::to_string(p.mu));
    }
    p.ground_truth = std::move(x0);
    return p;
}

LogisticProblem generate_logistic(std::uint64_t seed, std::size_t n_samples, std::size_t dim,
                                  std::size_t sparsity) {
    if (n_samples == 0 || dim == 0) {
        throw InvalidConfig("generate_logistic: sample count and dimension must be positive");
    }
    check_sparsity(sparsity, dim);

    Rng rng(seed);
    LogisticProblem p;
    p.samples = column_normalized_gaussian(rng, n_samples, dim);

    // Planted +-1 weights keep every support coordinate recoverable.
    Vector w0(dim, 0.0);
    for (std::size_t idx : sparse_support(rng, dim, sparsity)) {
        w0[idx] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    }

    Vector margins = matvec(p.samples, w0);
    double rms = std::sqrt(dot(margins, margins) / static_cast<double>(n_samples));
    if (rms == 0.0) rms = 1.0;
    p.labels.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double noisy = margins[i] + 0.1 * rms * rng.gaussian();
        p.labels[i] = noisy < 0.0 ? -1.0 : 1.0;
    }

    p.mu = mu_from_correlations(p.samples, p.labels);
    if (!(p.mu > 0.0)) {
        throw MuNotPositive("generate_logistic: degenerate instance produced mu = " +
                            std::to_string(p.mu));
    }
    p.ground_truth = std::move(w0);
    return p;
}

std::size_t sample_count(const Problem& p) {
    return std::visit([](const auto& q) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(q)>, LassoProblem>) {
            return q.A.rows();
        } else {
            return q.samples.rows();
        }
    }, p);
}

std::size_t dimension(const Problem& p) {
    return std::visit([](const auto& q) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(q)>, LassoProblem>) {
            return q.A.cols();
        } else {
            return q.samples.cols();
        }
    }, p);
}

double regularizer_weight(const Problem& p) {
    return std::visit([](const auto& q) { return q.mu; }, p);
}

double objective(const LassoProblem& p, const Vector& x) {
    Vector r = matvec(p.A, x);
    double sq = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double d = r[i] - p.b[i];
        sq += d * d;
    }
    return sq / static_cast<double>(p.A.rows()) + p.mu * norm1(x);
}

double objective(const LogisticProblem& p, const Vector& w) {
    double loss = 0.0;
    for (std::size_t i = 0; i < p.samples.rows(); ++i) {
        const double* xi = p.samples.row_ptr(i);
        double margin = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) margin += xi[j] * w[j];
        loss += logistic_loss(p.labels[i] * margin);
    }
    return loss / static_cast<double>(p.samples.rows()) + p.mu * norm1(w);
}

double objective(const Problem& p, const Vector& x) {
    return std::visit([&](const auto& q) { return objective(q, x); }, p);
}

Vector full_gradient(const LassoProblem& p, const Vector& x) {
    Vector r = matvec(p.A, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.b[i];
    Vector g = matvec_transpose(p.A, r);
    const double scale = 2.0 / static_cast<double>(p.A.rows());
    for (double& v : g) v *= scale;
    return g;
}

Vector full_gradient(const LogisticProblem& p, const Vector& w) {
    return logistic_value_grad(p.samples, p.labels, w).second;
}

Vector full_gradient(const Problem& p, const Vector& x) {
    return std::visit([&](const auto& q) { return full_gradient(q, x); }, p);
}

std::pair<double, Vector> sample_loss_grad(const LassoProblem& p, std::size_t index,
                                           const Vector& x) {
    check_index(index, p.A.rows());
    const double* a = p.A.row_ptr(index);
    double residual = -p.b[index];
    for (std::size_t j = 0; j < x.size(); ++j) residual += a[j] * x[j];
    Vector grad(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) grad[j] = 2.0 * residual * a[j];
    return {residual * residual, std::move(grad)};
}

std::pair<double, Vector> sample_loss_grad(const LogisticProblem& p, std::size_t index,
                                           const Vector& w) {
    check_index(index, p.samples.rows());
    const double* xi = p.samples.row_ptr(index);
    double margin = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) margin += xi[j] * w[j];
    margin *= p.labels[index];
    const double coeff = -p.labels[index] * logistic_slope(margin);
    Vector grad(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) grad[j] = coeff * xi[j];
    return {logistic_loss(margin), std::move(grad)};
}

std::pair<double, Vector> sample_loss_grad(const Problem& p, std::size_t index, const Vector& x) {
    return std::visit([&](const auto& q) { return sample_loss_grad(q, index, x); }, p);
}

namespace {

// Largest eigenvalue of the (SPD) Gram matrix by power iteration; a few
// percent of headroom is added since only an upper-bound quality estimate
// is needed for the step size.
double spectral_estimate(const Matrix& g) {
    const std::size_t n = g.rows();
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i);
    double eig = 0.0;
    for (int it = 0; it < 100; ++it) {
        Vector w = matvec(g, v);
        const double norm = norm2(w);
        if (norm == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
        eig = norm;
    }
    return eig * 1.05;
}

Vector proximal_gradient(const std::function<double(const Vector&)>& smooth_value,
                         const std::function<Vector(const Vector&)>& smooth_grad,
                         double mu, double lipschitz, double tol, std::size_t dim) {
    constexpr std::size_t kBudget = 1000000;
    const double lr = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
    Vector x(dim, 0.0);
    for (std::size_t it = 0; it < kBudget; ++it) {
        const Vector grad = smooth_grad(x);

        Vector shifted(dim);
        for (std::size_t i = 0; i < dim; ++i) shifted[i] = x[i] - lr * grad[i];
        Vector eps = prox_l1(shifted, lr * mu);
        for (std::size_t i = 0; i < dim; ++i) eps[i] = x[i] - eps[i];
        if (norm2(eps) <= tol) return x;

        const double value = smooth_value(x);
        double eta = lr;
        while (true) {
            for (std::size_t i = 0; i < dim; ++i) shifted[i] = x[i] - eta * grad[i];
            Vector trial = prox_l1(shifted, eta * mu);
            double inner = 0.0, quad = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double d = trial[i] - x[i];
                inner += grad[i] * d;
                quad += d * d;
            }
            const double predicted = inner + quad / (2.0 * eta);
            // Accept outright once the predicted change is below double
            // resolution: the value test would otherwise fail on rounding
            // noise and strand the iterate short of a tight tolerance.
            if (std::abs(predicted) < 1e-15 * (1.0 + std::abs(value)) ||
                smooth_value(trial) <= value + predicted + 1e-18 || eta <= 1e-14 * lr) {
                x.swap(trial);
                break;
            }
            eta *= 0.5;
        }
    }
    throw MaxIterations("reference_solution: proximal gradient exceeded its budget at tol=" +
                        std::to_string(tol));
}

}  // namespace

Vector reference_solution(const LassoProblem& p, double tol) {
    if (!(tol > 0.0)) throw InvalidConfig("reference_solution: tolerance must be positive");
    const double lipschitz =
        2.0 * spectral_estimate(gram(p.A)) / static_cast<double>(p.A.rows());
    return proximal_gradient([&](const Vector& x) { return objective(p, x) - p.mu * norm1(x); },
                             [&](const Vector& x) { return full_gradient(p, x); }, p.mu,
                             lipschitz, tol, p.A.cols());
}

Vector reference_solution(const LogisticProblem& p, double tol) {
    if (!(tol > 0.0)) throw InvalidConfig("reference_solution: tolerance must be positive");
    const double lipschitz =
        spectral_estimate(gram(p.samples)) / (4.0 * static_cast<double>(p.samples.rows()));
    return proximal_gradient([&](const Vector& w) { return objective(p, w) - p.mu * norm1(w); },
                             [&](const Vector& w) { return full_gradient(p, w); }, p.mu,
                             lipschitz, tol, p.samples.cols());
}

Vector reference_solution(const Problem& p, double tol) {
    return std::visit([&](const auto& q) { return reference_solution(q, tol); }, p);
}

namespace {

void write_value(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

void write_row(std::ostream& out, const double* values, std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) {
        if (j > 0) out << ' ';
        write_value(out, values[j]);
    }
    out << '\n';
}

void write_body(std::ostream& out, const char* tag, const Matrix& data, const Vector& rhs,
                double mu, const std::optional<Vector>& truth) {
    out << tag << ' ' << data.rows() << ' ' << data.cols() << ' ';
    write_value(out, mu);
    out << '\n';
    for (std::size_t i = 0; i < data.rows(); ++i) write_row(out, data.row_ptr(i), data.cols());
    write_row(out, rhs.data(), rhs.size());
    if (truth) write_row(out, truth->data(), truth->size());
}

double read_double(std::istream& in, const char* what) {
    double v = 0.0;
    if (!(in >> v)) {
        throw IoFailure(std::string("problem file: failed to read ") + what);
    }
    return v;
}

}  // namespace

void save_problem(const Problem& p, std::ostream& out) {
    if (const auto* lasso = std::get_if<LassoProblem>(&p)) {
        write_body(out, "lasso", lasso->A, lasso->b, lasso->mu, lasso->ground_truth);
    } else {
        const auto& logit = std::get<LogisticProblem>(p);
        write_body(out, "logistic", logit.samples, logit.labels, logit.mu, logit.ground_truth);
    }
    if (!out) throw IoFailure("problem file: write failed");
}

void save_problem(const Problem& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("problem file: cannot open " + path + " for writing");
    save_problem(p, out);
}

Problem load_problem(std::istream& in) {
    std::string tag;
    if (!(in >> tag)) throw IoFailure("problem file: empty input");
    if (tag != "lasso" && tag != "logistic") {
        throw IoFailure("problem file: unknown header tag '" + tag + "'");
    }
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols)) throw IoFailure("problem file: bad size header");
    const double mu = read_double(in, "mu");
    if (!(mu > 0.0)) throw MuNotPositive("problem file: mu must be positive");
    if (rows == 0 || cols == 0) throw IoFailure("problem file: zero-sized problem");

    Matrix data(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) data(i, j) = read_double(in, "matrix entry");
    }
    Vector rhs(rows);
    for (std::size_t i = 0; i < rows; ++i) rhs[i] = read_double(in, "rhs entry");

    std::optional<Vector> truth;
    double probe = 0.0;
    if (in >> probe) {
        Vector t(cols);
        t[0] = probe;
        for (std::size_t j = 1; j < cols; ++j) t[j] = read_double(in, "ground truth entry");
        truth = std::move(t);
        double trailing = 0.0;
        if (in >> trailing) throw IoFailure("problem file: trailing data after ground truth");
    }

    if (tag == "lasso") {
        return LassoProblem{std::move(data), std::move(rhs), mu, std::move(truth)};
    }
    // Labels may arrive as {0,1} or {-1,+1}; zeros map to the negative class.
    for (double& y : rhs) {
        if (y == 0.0) {
            y = -1.0;
        } else if (y != 1.0 && y != -1.0) {
            throw IoFailure("problem file: logistic label must be 0, 1 or -1");
        }
    }
    return LogisticProblem{std::move(data), std::move(rhs), mu, std::move(truth)};
}

Problem load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("problem file: cannot open " + path);
    return load_problem(in);
}

}  // namespace drs
