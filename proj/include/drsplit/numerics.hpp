#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace drs {

using Vector = std::vector<double>;

// Dense row-major matrix. Immutable in spirit: filled once, then read.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

    // Row i as a vector copy (sample access in the online solvers).
    Vector row(std::size_t i) const;

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    static Matrix identity(std::size_t n);

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Seeded random stream. The Gaussian transform is pinned in this library
// (Marsaglia polar on top of mt19937_64) so a seed reproduces the same
// draws regardless of the platform's std::normal_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform();

    // Uniform over {0, ..., bound-1} by rejection (no modulo bias).
    std::uint64_t uniform_index(std::uint64_t bound);

    double gaussian();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
double norm1(const Vector& v);
double norm_inf(const Vector& v);
bool all_finite(const Vector& v);

// y = M v
Vector matvec(const Matrix& m, const Vector& v);
// y = M^T v
Vector matvec_transpose(const Matrix& m, const Vector& v);

// A^T A, exactly symmetric: each upper entry computed once and mirrored.
Matrix gram(const Matrix& a);

// Cholesky factorization M = L L^T of a symmetric positive definite matrix.
// Only the lower triangle of the input is read.
class CholeskyFactor {
public:
    explicit CholeskyFactor(const Matrix& spd);  // throws NonSPD on a nonpositive pivot
    Vector solve(const Vector& rhs) const;
    const Matrix& lower() const { return lower_; }

private:
    Matrix lower_;
};

// Solve M y = rhs for SPD M via Cholesky, with one step of iterative
// refinement so the residual stays within 1e-10 * (1 + |rhs|) even for
// mildly ill-conditioned A^T A + c I systems.
Vector solve_spd(const Matrix& m, const Vector& rhs);

// (a a^T + c I)^{-1} v by the Sherman-Morrison identity, c > 0.
Vector rank_one_solve(const Vector& a, double c, const Vector& v);

// len i.i.d. standard normal draws from the handle's stream.
Vector gauss_sample(Rng& rng, std::size_t len);

}  // namespace drs
