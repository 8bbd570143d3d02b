#include "gda/model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "gda/error.hpp"

namespace gda {

namespace {

void require_label(int k) {
    if (k != 0 && k != 1) throw Error(ErrorCode::InvalidArgument, "class label must be 0 or 1");
}

void require_dim(const GdaModel& m, std::span<const double> x) {
    if (x.size() != m.n_features()) {
        throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(x.size()) +
                                                      " features, model expects " +
                                                      std::to_string(m.n_features()));
    }
}

void violation(const std::string& what) { throw Error(ErrorCode::InvariantViolation, what); }

struct Factored {
    Matrix covariance;
    CholeskyFactor chol;
    double lambda = 0.0;
};

Factored factor_with_retry(Matrix cov, const std::string& owner) {
    try {
        auto chol = cholesky(cov);
        return {std::move(cov), std::move(chol), 0.0};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotPositiveDefinite) throw;
    }
    const double lambda = 1e-6 * trace(cov) / static_cast<double>(cov.rows());
    if (!(lambda > 0.0)) {
        throw Error(ErrorCode::CovarianceNotPD, owner + " covariance is zero; cannot regularize");
    }
    for (std::size_t i = 0; i < cov.rows(); ++i) cov(i, i) += lambda;
    try {
        auto chol = cholesky(cov);
        return {std::move(cov), std::move(chol), lambda};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotPositiveDefinite) throw;
        throw Error(ErrorCode::CovarianceNotPD,
                    owner + " covariance is not positive definite even after adding " +
                        std::to_string(lambda) + " to its diagonal");
    }
}

void validate_class(const ClassStats& s, int expected_label, std::size_t d) {
    const std::string who = "class " + std::to_string(expected_label);
    if (s.label != expected_label) violation(who + " has label " + std::to_string(s.label));
    if (s.mean.size() != d) violation(who + " mean has the wrong length");
    if (!std::all_of(s.mean.begin(), s.mean.end(), [](double v) { return std::isfinite(v); })) {
        violation(who + " mean is not finite");
    }
    if (s.covariance.rows() != d || s.covariance.cols() != d) violation(who + " covariance has the wrong shape");
    if (!all_finite(s.covariance)) violation(who + " covariance is not finite");
    if (s.chol.dim() != d) violation(who + " cholesky factor has the wrong shape");
    try {
        require_symmetric(s.covariance);
    } catch (const Error&) {
        violation(who + " covariance is not symmetric");
    }
    const double scale = std::max(frobenius_norm(s.covariance), 1e-300);
    Matrix diff = s.chol.reconstruct();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) diff(i, j) -= s.covariance(i, j);
    if (frobenius_norm(diff) > 1e-9 * scale) violation(who + " cholesky factor does not reconstruct covariance");
    const double expected_log_det = log_det_pd(s.chol);
    if (!(std::abs(s.log_det - expected_log_det) <= 1e-9 * std::max(1.0, std::abs(expected_log_det)))) {
        violation(who + " log determinant disagrees with its cholesky factor");
    }
    if (!(s.prior > 0.0 && s.prior < 1.0)) violation(who + " prior must lie in (0, 1)");
    if (s.count < 1) violation(who + " has no samples");
    if (!(s.regularization >= 0.0) || !std::isfinite(s.regularization)) {
        violation(who + " regularization must be a finite non-negative number");
    }
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept { return kind == ModelKind::Lda ? "lda" : "qda"; }

ModelKind parse_model_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "lda") return ModelKind::Lda;
    if (lower == "qda") return ModelKind::Qda;
    throw Error(ErrorCode::InvalidArgument, "model kind must be lda or qda, got '" + std::string(text) + "'");
}

GdaModel GdaModel::from_parts(ModelKind kind, ClassStats negative, ClassStats positive) {
    const std::size_t d = negative.mean.size();
    if (d == 0) violation("model must have at least one feature");
    validate_class(negative, 0, d);
    validate_class(positive, 1, d);
    if (!(std::abs(negative.prior + positive.prior - 1.0) <= 1e-12)) violation("class priors do not sum to 1");
    const double total = static_cast<double>(negative.count + positive.count);
    for (const ClassStats* s : {&negative, &positive}) {
        if (!(std::abs(s->prior - static_cast<double>(s->count) / total) <= 1e-12)) {
            violation("class " + std::to_string(s->label) + " prior disagrees with its sample count");
        }
    }
    if (kind == ModelKind::Qda && (negative.count < 2 || positive.count < 2)) {
        violation("QDA classes need at least two samples each");
    }
    if (kind == ModelKind::Lda) {
        if (!(negative.covariance == positive.covariance) || !(negative.chol == positive.chol) ||
            std::bit_cast<std::uint64_t>(negative.log_det) != std::bit_cast<std::uint64_t>(positive.log_det) ||
            std::bit_cast<std::uint64_t>(negative.regularization) !=
                std::bit_cast<std::uint64_t>(positive.regularization)) {
            violation("LDA classes must share one covariance matrix");
        }
    }
    return GdaModel(kind, {std::move(negative), std::move(positive)});
}

double GdaModel::regularization_applied() const noexcept {
    return std::max(stats_[0].regularization, stats_[1].regularization);
}

Vector class_mean(const Dataset& d, int label) {
    Vector mean(d.n_features(), 0.0);
    std::size_t n = 0;
    for (std::size_t r = 0; r < d.n_samples(); ++r) {
        if (d.labels[r] != label) continue;
        const auto row = d.features.row(r);
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += row[c];
        ++n;
    }
    if (n == 0) {
        throw Error(ErrorCode::InsufficientClassSamples, "class " + std::to_string(label) + " has no samples");
    }
    for (double& v : mean) v /= static_cast<double>(n);
    return mean;
}

Matrix scatter_matrix(const Dataset& d, int label, std::span<const double> mean) {
    const std::size_t p = d.n_features();
    Matrix s(p, p);
    Vector dev(p);
    for (std::size_t r = 0; r < d.n_samples(); ++r) {
        if (d.labels[r] != label) continue;
        const auto row = d.features.row(r);
        for (std::size_t c = 0; c < p; ++c) dev[c] = row[c] - mean[c];
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i; j < p; ++j) s(i, j) += dev[i] * dev[j];
    }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < i; ++j) s(i, j) = s(j, i);
    return s;
}

Matrix class_covariance(const Dataset& d, int label) {
    const std::size_t n = d.count_label(label);
    if (n < 2) {
        throw Error(ErrorCode::InsufficientClassSamples,
                    "class " + std::to_string(label) + " has " + std::to_string(n) + " sample(s); need 2");
    }
    Matrix s = scatter_matrix(d, label, class_mean(d, label));
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j) s(i, j) /= static_cast<double>(n - 1);
    return s;
}

Matrix pooled_covariance(const Dataset& d) {
    const std::size_t n = d.n_samples();
    if (n < 3) {
        throw Error(ErrorCode::InsufficientClassSamples, "pooled covariance needs at least 3 samples");
    }
    Matrix s = scatter_matrix(d, 0, class_mean(d, 0));
    const Matrix s1 = scatter_matrix(d, 1, class_mean(d, 1));
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j) s(i, j) = (s(i, j) + s1(i, j)) / static_cast<double>(n - 2);
    return s;
}

GdaModel fit(const Dataset& d, ModelKind kind) {
    d.validate();
    if (d.n_features() == 0) throw Error(ErrorCode::InvalidArgument, "dataset has no feature columns");
    const std::array<std::size_t, 2> counts{d.count_label(0), d.count_label(1)};
    const std::size_t min_count = kind == ModelKind::Qda ? 2 : 1;
    for (int k = 0; k < 2; ++k) {
        if (counts[k] < min_count) {
            throw Error(ErrorCode::InsufficientClassSamples,
                        "class " + std::to_string(k) + " has " + std::to_string(counts[k]) +
                            " sample(s); " + std::string(to_string(kind)) + " needs " +
                            std::to_string(min_count));
        }
    }
    const double total = static_cast<double>(counts[0] + counts[1]);

    std::array<ClassStats, 2> stats;
    for (int k = 0; k < 2; ++k) {
        stats[k].label = k;
        stats[k].mean = class_mean(d, k);
        stats[k].count = counts[k];
        stats[k].prior = static_cast<double>(counts[k]) / total;
    }

    if (kind == ModelKind::Lda) {
        auto shared = factor_with_retry(pooled_covariance(d), "pooled");
        const double log_det = log_det_pd(shared.chol);
        for (auto& s : stats) {
            s.covariance = shared.covariance;
            s.chol = shared.chol;
            s.log_det = log_det;
            s.regularization = shared.lambda;
        }
    } else {
        for (int k = 0; k < 2; ++k) {
            auto f = factor_with_retry(class_covariance(d, k), "class " + std::to_string(k));
            stats[k].covariance = std::move(f.covariance);
            stats[k].chol = std::move(f.chol);
            stats[k].log_det = log_det_pd(stats[k].chol);
            stats[k].regularization = f.lambda;
        }
    }
    return GdaModel::from_parts(kind, std::move(stats[0]), std::move(stats[1]));
}

double log_class_density(const GdaModel& m, std::span<const double> x, int k) {
    require_label(k);
    require_dim(m, x);
    const ClassStats& s = m.class_stats(k);
    Vector diff(x.begin(), x.end());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= s.mean[i];
    const double d = static_cast<double>(diff.size());
    return -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * s.log_det -
           0.5 * mahalanobis_squared(s.chol, diff);
}

double class_conditional_density(const GdaModel& m, std::span<const double> x, int k) {
    return std::exp(log_class_density(m, x, k));
}

double discriminant(const GdaModel& m, std::span<const double> x, int k) {
    require_label(k);
    require_dim(m, x);
    const ClassStats& s = m.class_stats(k);
    Vector diff(x.begin(), x.end());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= s.mean[i];
    return -0.5 * s.log_det - 0.5 * mahalanobis_squared(s.chol, diff) + std::log(s.prior);
}

double log_likelihood_ratio(const GdaModel& m, std::span<const double> x) {
    return discriminant(m, x, 1) - discriminant(m, x, 0);
}

int classify_by_threshold(double ratio, double threshold) noexcept { return ratio > threshold ? 1 : 0; }

int predict(const GdaModel& m, std::span<const double> x) {
    return classify_by_threshold(log_likelihood_ratio(m, x), 0.0);
}

std::array<double, 2> posterior(const GdaModel& m, std::span<const double> x) {
    const double d0 = discriminant(m, x, 0);
    const double d1 = discriminant(m, x, 1);
    const double top = std::max(d0, d1);
    const double e0 = std::exp(d0 - top);
    const double e1 = std::exp(d1 - top);
    const double sum = e0 + e1;
    return {e0 / sum, e1 / sum};
}

Vector fisher_direction(const GdaModel& m) {
    if (m.kind() != ModelKind::Lda) {
        throw Error(ErrorCode::NotAnLdaModel, "the Fisher direction needs a shared covariance (LDA model)");
    }
    const ClassStats& s0 = m.class_stats(0);
    const ClassStats& s1 = m.class_stats(1);
    Vector diff(s1.mean);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= s0.mean[i];
    if (norm(diff) <= 1e-12) throw Error(ErrorCode::IdenticalMeans, "class means coincide");
    Vector w = solve_pd(s0.chol, diff);
    const double len = norm(w);
    for (double& v : w) v /= len;
    if (dot(w, diff) < 0.0) {
        for (double& v : w) v = -v;
    }
    return w;
}

}  // namespace gda
