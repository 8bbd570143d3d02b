#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gda {

using Vector = std::vector<double>;

/// Dense row-major matrix of finite doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return entries_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return entries_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return entries_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const noexcept {
        return {entries_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) noexcept { return {entries_.data() + r * cols_, cols_}; }

    const std::vector<double>& entries() const noexcept { return entries_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& a, std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double frobenius_norm(const Matrix& a);
double max_abs_entry(const Matrix& a);
double trace(const Matrix& a);
bool all_finite(const Matrix& a);

/// Throws NotSymmetric unless |a(i,j) - a(j,i)| <= 1e-10 * max|a|.
void require_symmetric(const Matrix& a);

/// Replaces a with (a + aᵀ)/2, making it exactly symmetric.
void symmetrize(Matrix& a);

/// Lower-triangular Cholesky factor with strictly positive diagonal. Only
/// obtainable through cholesky() or from_validated_lower(), so holders can rely
/// on the diagonal being positive.
class CholeskyFactor {
public:
    CholeskyFactor() = default;

    /// Accepts an externally stored factor (e.g. from a model file). Throws
    /// InvalidArgument unless `lower` is square, lower-triangular and has a
    /// strictly positive finite diagonal.
    static CholeskyFactor from_validated_lower(Matrix lower);

    const Matrix& lower() const noexcept { return lower_; }
    std::size_t dim() const noexcept { return lower_.rows(); }

    /// L·Lᵀ
    Matrix reconstruct() const;

    bool operator==(const CholeskyFactor&) const = default;

private:
    friend CholeskyFactor cholesky(const Matrix& a);
    explicit CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {}

    Matrix lower_;
};

/// Factors a symmetric positive-definite matrix. A pivot at or below
/// 1e-12 * trace(a)/n raises NotPositiveDefinite.
CholeskyFactor cholesky(const Matrix& a);

/// log|A| for A = L·Lᵀ.
double log_det_pd(const CholeskyFactor& l);

/// Solves L·y = b.
Vector forward_solve(const CholeskyFactor& l, std::span<const double> b);

/// Solves (L·Lᵀ)·z = b.
Vector solve_pd(const CholeskyFactor& l, std::span<const double> b);

/// bᵀ(L·Lᵀ)⁻¹b, evaluated as ‖L⁻¹b‖².
double mahalanobis_squared(const CholeskyFactor& l, std::span<const double> b);

struct SymEigen2 {
    std::array<double, 2> values;                 // descending
    std::array<std::array<double, 2>, 2> vectors; // vectors[i] pairs with values[i]
};

/// Closed-form eigendecomposition of a symmetric 2x2 matrix. Each eigenvector
/// is unit length with its first nonzero component positive.
SymEigen2 sym_eigen_2x2(const Matrix& a);

}  // namespace gda
