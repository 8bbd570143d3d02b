#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gda/dataset.hpp"
#include "gda/linalg.hpp"

namespace gda {

enum class ModelKind { Lda, Qda };

std::string_view to_string(ModelKind kind) noexcept;
/// Accepts "lda"/"qda" in any case; throws InvalidArgument otherwise.
ModelKind parse_model_kind(std::string_view text);

/// Gaussian parameters for one class.
struct ClassStats {
    int label = 0;
    Vector mean;
    Matrix covariance;  // after regularization, if any was applied
    CholeskyFactor chol;
    double log_det = 0.0;
    double prior = 0.0;
    std::size_t count = 0;
    double regularization = 0.0;  // lambda added to the diagonal, 0 if none
};

/// A fitted binary LDA or QDA classifier. Immutable; obtain one from fit() or
/// deserialize().
class GdaModel {
public:
    /// Validates every invariant (shapes, priors, factor consistency, LDA
    /// sharing). Throws InvariantViolation.
    static GdaModel from_parts(ModelKind kind, ClassStats negative, ClassStats positive);

    ModelKind kind() const noexcept { return kind_; }
    std::size_t n_features() const noexcept { return stats_[0].mean.size(); }
    const ClassStats& class_stats(int label) const { return stats_.at(static_cast<std::size_t>(label)); }
    /// Largest diagonal load added to any covariance during fitting.
    double regularization_applied() const noexcept;

private:
    GdaModel(ModelKind kind, std::array<ClassStats, 2> stats)
        : kind_(kind), stats_(std::move(stats)) {}

    ModelKind kind_;
    std::array<ClassStats, 2> stats_;
};

/// Sum over class members of (x - mean)(x - mean)ᵀ.
Matrix scatter_matrix(const Dataset& d, int label, std::span<const double> mean);
/// Per-class sample mean.
Vector class_mean(const Dataset& d, int label);
/// Per-class sample covariance with divisor n_k - 1.
Matrix class_covariance(const Dataset& d, int label);
/// Pooled within-class covariance with divisor N - 2.
Matrix pooled_covariance(const Dataset& d);

/// Fits class means, priors n_k/N and covariances (per class for QDA, pooled
/// for LDA). A covariance that fails Cholesky is retried once with
/// lambda = 1e-6 * trace/d added to its diagonal. Errors:
/// InsufficientClassSamples, CovarianceNotPD.
GdaModel fit(const Dataset& d, ModelKind kind);

/// log N(x; mean_k, cov_k)
double log_class_density(const GdaModel& m, std::span<const double> x, int k);
double class_conditional_density(const GdaModel& m, std::span<const double> x, int k);

/// -1/2 log|cov_k| - 1/2 (x - mean_k)ᵀ cov_k⁻¹ (x - mean_k) + log prior_k
double discriminant(const GdaModel& m, std::span<const double> x, int k);

/// discriminant(x, 1) - discriminant(x, 0)
double log_likelihood_ratio(const GdaModel& m, std::span<const double> x);

/// 1 iff ratio > threshold.
int classify_by_threshold(double ratio, double threshold) noexcept;

/// argmax of the discriminants; an exact tie goes to class 0.
int predict(const GdaModel& m, std::span<const double> x);

/// Normalized exp(discriminant), computed with the max subtracted.
std::array<double, 2> posterior(const GdaModel& m, std::span<const double> x);

/// Unit vector along cov⁻¹(mean_1 - mean_0), oriented towards class 1. LDA
/// only. Errors: NotAnLdaModel, IdenticalMeans.
Vector fisher_direction(const GdaModel& m);

/// Optional metadata stored next to the model parameters in a model file.
struct ModelDocument {
    GdaModel model;
    std::vector<std::string> feature_names;  // may be empty
    std::optional<Scaling> scaling;          // present when fitted on standardized data
};

/// JSON text of the model; doubles are written in shortest round-trip form so
/// deserialize() reproduces them bit for bit.
std::string serialize(const GdaModel& m);
std::string serialize(const ModelDocument& doc);

/// Errors: MalformedDocument for unparsable or incomplete input,
/// InvariantViolation when the parsed parameters break a model invariant.
GdaModel deserialize(std::string_view text);
ModelDocument deserialize_document(std::string_view text);

}  // namespace gda
