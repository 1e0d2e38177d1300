#include "drsplit/numerics.hpp"

#include <cmath>
#include <sstream>

#include "drsplit/errors.hpp"

namespace drs {

Vector Matrix::row(std::size_t i) const {
    if (i >= rows_) {
        throw IndexOutOfRange("matrix row " + std::to_string(i) + " out of range");
    }
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r >= limit);
    return r % bound;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

namespace {

void require_same_length(const Vector& a, const Vector& b, const char* where) {
    if (a.size() != b.size()) {
        std::ostringstream msg;
        msg << where << ": length " << a.size() << " vs " << b.size();
        throw DimensionMismatch(msg.str());
    }
}

}  // namespace

double dot(const Vector& a, const Vector& b) {
    require_same_length(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

double norm1(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double norm_inf(const Vector& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

bool all_finite(const Vector& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

Vector matvec(const Matrix& m, const Vector& v) {
    if (v.size() != m.cols()) {
        throw DimensionMismatch("matvec: " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + " times length " +
                                std::to_string(v.size()));
    }
    Vector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = m.row_ptr(i);
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

Vector matvec_transpose(const Matrix& m, const Vector& v) {
    if (v.size() != m.rows()) {
        throw DimensionMismatch("matvec_transpose: " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + " transposed times length " +
                                std::to_string(v.size()));
    }
    Vector out(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = m.row_ptr(i);
        const double vi = v[i];
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += row[j] * vi;
    }
    return out;
}

Matrix gram(const Matrix& a) {
    const std::size_t n = a.cols();
    Matrix g(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j; k < n; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, k);
            g(j, k) = s;
            g(k, j) = s;
        }
    }
    return g;
}

CholeskyFactor::CholeskyFactor(const Matrix& spd) {
    if (spd.rows() != spd.cols()) {
        throw DimensionMismatch("cholesky: matrix is not square");
    }
    const std::size_t n = spd.rows();
    lower_ = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = spd(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= lower_(j, k) * lower_(j, k);
        if (!(diag > 0.0)) {
            throw NonSPD("cholesky: nonpositive pivot at column " + std::to_string(j));
        }
        const double ljj = std::sqrt(diag);
        lower_(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = spd(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
            lower_(i, j) = s / ljj;
        }
    }
}

Vector CholeskyFactor::solve(const Vector& rhs) const {
    const std::size_t n = lower_.rows();
    if (rhs.size() != n) {
        throw DimensionMismatch("cholesky solve: rhs length " + std::to_string(rhs.size()) +
                                " vs order " + std::to_string(n));
    }
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = rhs[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * y[k];
        y[i] = s / lower_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower_(k, ii) * y[k];
        y[ii] = s / lower_(ii, ii);
    }
    return y;
}

// rhs - M y accumulated in extended precision, so refinement is not capped
// by the double-precision residual-evaluation floor on ill-conditioned M.
static Vector residual_extended(const Matrix& m, const Vector& y, const Vector& rhs) {
    Vector r(rhs.size());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = m.row_ptr(i);
        long double acc = rhs[i];
        for (std::size_t j = 0; j < m.cols(); ++j) {
            acc -= static_cast<long double>(row[j]) * static_cast<long double>(y[j]);
        }
        r[i] = static_cast<double>(acc);
    }
    return r;
}

Vector solve_spd(const Matrix& m, const Vector& rhs) {
    CholeskyFactor factor(m);
    Vector y = factor.solve(rhs);

    // Iterative refinement until the residual contract holds; a few passes
    // cover even the nearly singular A^T A + 1e-6 I systems.
    const double bound = 0.5e-10 * (1.0 + norm2(rhs));
    for (int pass = 0; pass < 6; ++pass) {
        Vector residual = residual_extended(m, y, rhs);
        if (norm2(residual) <= bound) break;
        const Vector correction = factor.solve(residual);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += correction[i];
    }
    return y;
}

Vector rank_one_solve(const Vector& a, double c, const Vector& v) {
    if (!(c > 0.0)) {
        throw NonPositiveScale("rank_one_solve: scale must be positive, got " +
                               std::to_string(c));
    }
    require_same_length(a, v, "rank_one_solve");
    const double coeff = dot(a, v) / (c + dot(a, a));
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - coeff * a[i]) / c;
    return out;
}

Vector gauss_sample(Rng& rng, std::size_t len) {
    Vector out(len);
    for (double& x : out) x = rng.gaussian();
    return out;
}

}  // namespace drs
