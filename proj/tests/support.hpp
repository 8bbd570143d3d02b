#pragma once

// Test-only helpers: a portable RNG, synthetic data generators and the
// independent oracles the suites compare against. Nothing here calls into the
// code paths it is used to check (no gda::cholesky, solve_pd, metrics...).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gda/dataset.hpp"
#include "gda/error.hpp"
#include "gda/linalg.hpp"

namespace gda::testing {

/// Code of the gda::Error thrown by fn, or nullopt when nothing is thrown.
template <typename F>
std::optional<ErrorCode> error_code_of(F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

/// mt19937_64 with hand-rolled uniform/normal draws so sequences do not depend
/// on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int coin() { return static_cast<int>(engine_() >> 63); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

/// Bᵀ·B + eps·I with B standard normal.
inline Matrix random_spd(Rng& rng, std::size_t n, double eps = 0.5) {
    const Matrix b = random_matrix(rng, n, n);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += b(k, i) * b(k, j);
            a(i, j) = s;
        }
        a(i, i) += eps;
    }
    return a;
}

/// Gram-Schmidt on the columns of a standard normal matrix.
inline Matrix random_orthogonal(Rng& rng, std::size_t n) {
    Matrix m = random_matrix(rng, n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            double d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d += m(i, j) * m(i, k);
            for (std::size_t i = 0; i < n; ++i) m(i, j) -= d * m(i, k);
        }
        double len = 0.0;
        for (std::size_t i = 0; i < n; ++i) len += m(i, j) * m(i, j);
        len = std::sqrt(len);
        for (std::size_t i = 0; i < n; ++i) m(i, j) /= len;
    }
    return m;
}

/// Textbook Cholesky used only to draw correlated samples.
inline Matrix naive_cholesky(const Matrix& a) {
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = i == j ? std::sqrt(s) : s / l(j, j);
        }
    }
    return l;
}

struct GaussianSpec {
    Vector mean;
    Matrix cov;
};

/// n0 rows from class 0 followed by n1 rows from class 1.
inline Dataset sample_two_gaussians(Rng& rng, const GaussianSpec& g0, const GaussianSpec& g1, std::size_t n0,
                                    std::size_t n1) {
    const std::size_t d = g0.mean.size();
    Dataset out;
    out.label_column = "label";
    out.positive_label = "1";
    for (std::size_t c = 0; c < d; ++c) out.feature_names.push_back("f" + std::to_string(c));
    out.features = Matrix(n0 + n1, d);
    const std::array<Matrix, 2> factors{naive_cholesky(g0.cov), naive_cholesky(g1.cov)};
    const std::array<const GaussianSpec*, 2> specs{&g0, &g1};
    Vector z(d);
    for (std::size_t r = 0; r < n0 + n1; ++r) {
        const int k = r < n0 ? 0 : 1;
        for (double& v : z) v = rng.normal();
        for (std::size_t i = 0; i < d; ++i) {
            double s = specs[k]->mean[i];
            for (std::size_t j = 0; j <= i; ++j) s += factors[k](i, j) * z[j];
            out.features(r, i) = s;
        }
        out.labels.push_back(k);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Linear algebra oracles

/// Gauss-Jordan elimination with partial pivoting on [A | I].
inline Matrix gauss_jordan_inverse(const Matrix& a) {
    const std::size_t n = a.rows();
    Matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = 1.0;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(aug(r, col)) > std::abs(aug(pivot, col))) pivot = r;
        for (std::size_t j = 0; j < 2 * n; ++j) std::swap(aug(col, j), aug(pivot, j));
        const double p = aug(col, col);
        for (std::size_t j = 0; j < 2 * n; ++j) aug(col, j) /= p;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = aug(r, col);
            for (std::size_t j = 0; j < 2 * n; ++j) aug(r, j) -= f * aug(col, j);
        }
    }
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

/// Laplace expansion along the first row.
inline double cofactor_det(const Matrix& a) {
    const std::size_t n = a.rows();
    if (n == 1) return a(0, 0);
    if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    double det = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        Matrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t mj = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == c) continue;
                minor(i - 1, mj++) = a(i, j);
            }
        }
        const double sign = (c % 2 == 0) ? 1.0 : -1.0;
        det += sign * a(0, c) * cofactor_det(minor);
    }
    return det;
}

/// Discriminant assembled from the explicit inverse and determinant.
inline double brute_discriminant(std::span<const double> mean, const Matrix& cov, double prior,
                                 std::span<const double> x) {
    const Matrix inv = gauss_jordan_inverse(cov);
    const std::size_t n = mean.size();
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q += (x[i] - mean[i]) * inv(i, j) * (x[j] - mean[j]);
    return -0.5 * std::log(cofactor_det(cov)) - 0.5 * q + std::log(prior);
}

// ---------------------------------------------------------------------------
// Metric oracle: explicit confusion counts at every distinct threshold.

struct BruteMetrics {
    std::vector<std::pair<double, double>> roc;  // (fpr, tpr), starting at (0,0)
    std::vector<std::pair<double, double>> pr;   // (recall, precision), no anchor
    double average_precision = 0.0;
    double auc = 0.0;
};

inline BruteMetrics brute_metrics(const std::vector<int>& y, const std::vector<double>& s) {
    std::set<double, std::greater<>> thresholds(s.begin(), s.end());
    BruteMetrics out;
    out.roc.emplace_back(0.0, 0.0);
    double prev_recall = 0.0;
    for (double t : thresholds) {
        int tp = 0, fp = 0, fn = 0, tn = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const bool pos = s[i] >= t;
            if (pos && y[i] == 1) ++tp;
            if (pos && y[i] == 0) ++fp;
            if (!pos && y[i] == 1) ++fn;
            if (!pos && y[i] == 0) ++tn;
        }
        const double recall = tp + fn > 0 ? double(tp) / (tp + fn) : 0.0;
        const double prec = double(tp) / (tp + fp);
        out.pr.emplace_back(recall, prec);
        out.average_precision += (recall - prev_recall) * prec;
        prev_recall = recall;
        if (fp + tn > 0 && tp + fn > 0) out.roc.emplace_back(double(fp) / (fp + tn), double(tp) / (tp + fn));
    }
    for (std::size_t i = 1; i < out.roc.size(); ++i) {
        out.auc += (out.roc[i].first - out.roc[i - 1].first) * (out.roc[i].second + out.roc[i - 1].second) / 2.0;
    }
    return out;
}

/// Fraction of (positive, negative) pairs ranked correctly; ties count 1/2.
inline double mann_whitney(const std::vector<int>& y, const std::vector<double>& s) {
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 1) continue;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] != 0) continue;
            pairs += 1.0;
            if (s[i] > s[j]) wins += 1.0;
            else if (s[i] == s[j]) wins += 0.5;
        }
    }
    return wins / pairs;
}

// ---------------------------------------------------------------------------
// Analysis oracles

/// Pearson r of two columns, each pass computed from scratch.
inline double brute_pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i] / n;
        mb += b[i] / n;
    }
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma) * (a[i] - ma);
        db += (b[i] - mb) * (b[i] - mb);
    }
    return num / std::sqrt(da * db);
}

/// Evaluates the piecewise-linear curve through (i/(n-1), sorted_i) at p.
inline double piecewise_quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 1) return v[0];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double x0 = double(i) / double(n - 1);
        const double x1 = double(i + 1) / double(n - 1);
        if (p >= x0 && p <= x1) {
            const double t = (p - x0) / (x1 - x0);
            return v[i] * (1.0 - t) + v[i + 1] * t;
        }
    }
    return v.back();
}

// ---------------------------------------------------------------------------
// Bayes-rate oracle for two 2-D Gaussians with equal priors.

inline double gaussian2_density(const GaussianSpec& g, double x, double y) {
    const double a = g.cov(0, 0), b = g.cov(0, 1), c = g.cov(1, 1);
    const double det = a * c - b * b;
    const double dx = x - g.mean[0], dy = y - g.mean[1];
    const double q = (c * dx * dx - 2.0 * b * dx * dy + a * dy * dy) / det;
    return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det));
}

/// Midpoint-rule integral of max(pi0 f0, pi1 f1) over a box wide enough to hold
/// both densities (10 sd around each mean).
inline double bayes_accuracy_2d(const GaussianSpec& g0, const GaussianSpec& g1, std::size_t cells = 2000) {
    double lo[2], hi[2];
    for (int a = 0; a < 2; ++a) {
        const double s0 = std::sqrt(g0.cov(a, a)), s1 = std::sqrt(g1.cov(a, a));
        lo[a] = std::min(g0.mean[a] - 10 * s0, g1.mean[a] - 10 * s1);
        hi[a] = std::max(g0.mean[a] + 10 * s0, g1.mean[a] + 10 * s1);
    }
    const double hx = (hi[0] - lo[0]) / double(cells);
    const double hy = (hi[1] - lo[1]) / double(cells);
    double total = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double x = lo[0] + (double(i) + 0.5) * hx;
        for (std::size_t j = 0; j < cells; ++j) {
            const double y = lo[1] + (double(j) + 0.5) * hy;
            total += std::max(0.5 * gaussian2_density(g0, x, y), 0.5 * gaussian2_density(g1, x, y));
        }
    }
    return total * hx * hy;
}

}  // namespace gda::testing
