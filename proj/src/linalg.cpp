#include "gda/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gda/error.hpp"

namespace gda {

namespace {

void require_square(const Matrix& a, const char* what) {
    if (!a.square()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + " requires a square matrix, got " + std::to_string(a.rows()) +
                        "x" + std::to_string(a.cols()));
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "matrix entries length " + std::to_string(entries_.size()) + " != " +
                        std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    if (!std::all_of(entries_.begin(), entries_.end(), [](double v) { return std::isfinite(v); })) {
        throw Error(ErrorCode::InvalidArgument, "matrix entries must be finite");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw Error(ErrorCode::DimensionMismatch, "ragged matrix initializer");
        }
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix product inner dimensions differ");
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Vector multiply(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix-vector product dimensions differ");
    }
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "dot product of vectors with different lengths");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double frobenius_norm(const Matrix& a) { return norm(a.entries()); }

double max_abs_entry(const Matrix& a) {
    double m = 0.0;
    for (double v : a.entries()) m = std::max(m, std::abs(v));
    return m;
}

double trace(const Matrix& a) {
    require_square(a, "trace");
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

bool all_finite(const Matrix& a) {
    return std::all_of(a.entries().begin(), a.entries().end(),
                       [](double v) { return std::isfinite(v); });
}

void require_symmetric(const Matrix& a) {
    require_square(a, "symmetry check");
    const double tol = 1e-10 * max_abs_entry(a);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - a(j, i)) > tol) {
                throw Error(ErrorCode::NotSymmetric, "entries (" + std::to_string(i) + "," +
                                                         std::to_string(j) + ") and transpose differ");
            }
        }
    }
}

void symmetrize(Matrix& a) {
    require_square(a, "symmetrize");
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            const double m = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = m;
            a(j, i) = m;
        }
    }
}

CholeskyFactor CholeskyFactor::from_validated_lower(Matrix lower) {
    if (!lower.square() || lower.empty()) {
        throw Error(ErrorCode::InvalidArgument, "cholesky factor must be a non-empty square matrix");
    }
    if (!all_finite(lower)) {
        throw Error(ErrorCode::InvalidArgument, "cholesky factor has non-finite entries");
    }
    for (std::size_t i = 0; i < lower.rows(); ++i) {
        if (!(lower(i, i) > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "cholesky factor diagonal must be positive");
        }
        for (std::size_t j = i + 1; j < lower.cols(); ++j) {
            if (lower(i, j) != 0.0) {
                throw Error(ErrorCode::InvalidArgument, "cholesky factor must be lower triangular");
            }
        }
    }
    return CholeskyFactor(std::move(lower));
}

Matrix CholeskyFactor::reconstruct() const { return multiply(lower_, transpose(lower_)); }

CholeskyFactor cholesky(const Matrix& a) {
    require_square(a, "cholesky");
    if (a.empty()) throw Error(ErrorCode::DimensionMismatch, "cholesky of an empty matrix");
    if (!all_finite(a)) throw Error(ErrorCode::InvalidArgument, "cholesky input has non-finite entries");
    require_symmetric(a);

    const std::size_t n = a.rows();
    const double min_pivot = 1e-12 * trace(a) / static_cast<double>(n);
    if (!(min_pivot > 0.0)) {
        throw Error(ErrorCode::NotPositiveDefinite, "non-positive trace");
    }

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = a(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (!(pivot > min_pivot)) {
            throw Error(ErrorCode::NotPositiveDefinite,
                        "pivot " + std::to_string(j) + " is " + std::to_string(pivot));
        }
        const double ljj = std::sqrt(pivot);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return CholeskyFactor(std::move(l));
}

double log_det_pd(const CholeskyFactor& l) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.dim(); ++i) s += std::log(l.lower()(i, i));
    return 2.0 * s;
}

Vector forward_solve(const CholeskyFactor& l, std::span<const double> b) {
    const std::size_t n = l.dim();
    if (b.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "right-hand side has length " +
                                                      std::to_string(b.size()) + ", expected " +
                                                      std::to_string(n));
    }
    const Matrix& lo = l.lower();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lo(i, k) * y[k];
        y[i] = s / lo(i, i);
    }
    return y;
}

Vector solve_pd(const CholeskyFactor& l, std::span<const double> b) {
    Vector z = forward_solve(l, b);
    const Matrix& lo = l.lower();
    const std::size_t n = l.dim();
    for (std::size_t i = n; i-- > 0;) {
        double s = z[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= lo(k, i) * z[k];
        z[i] = s / lo(i, i);
    }
    return z;
}

double mahalanobis_squared(const CholeskyFactor& l, std::span<const double> b) {
    const Vector y = forward_solve(l, b);
    return dot(y, y);
}

SymEigen2 sym_eigen_2x2(const Matrix& a) {
    if (a.rows() != 2 || a.cols() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "sym_eigen_2x2 requires a 2x2 matrix");
    }
    require_symmetric(a);
    const double p = a(0, 0);
    const double q = 0.5 * (a(0, 1) + a(1, 0));
    const double r = a(1, 1);

    const double mid = 0.5 * (p + r);
    const double radius = std::hypot(0.5 * (p - r), q);

    SymEigen2 out{};
    out.values = {mid + radius, mid - radius};

    if (q == 0.0) {
        // Already diagonal; keep the axes exact.
        if (p >= r) {
            out.vectors = {{{1.0, 0.0}, {0.0, 1.0}}};
        } else {
            out.vectors = {{{0.0, 1.0}, {1.0, 0.0}}};
        }
        out.values = {std::max(p, r), std::min(p, r)};
        return out;
    }

    // Rotation angle of the major axis; theta lies in (-pi/2, pi/2).
    const double theta = 0.5 * std::atan2(2.0 * q, p - r);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    out.vectors[0] = {c, s};
    out.vectors[1] = {-s, c};
    for (auto& v : out.vectors) {
        if (v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0)) {
            v[0] = -v[0];
            v[1] = -v[1];
        }
    }
    return out;
}

}  // namespace gda
