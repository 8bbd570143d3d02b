#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "gda/dataset.hpp"
#include "gda/linalg.hpp"
#include "gda/model.hpp"

namespace gda {

struct CorrelationMatrix {
    Matrix values;
    std::vector<std::string> names;            // feature names followed by the label column
    std::vector<std::size_t> constant_columns; // indices into names
};

/// Pearson correlation of every feature and the 0/1 label column. Constant
/// columns correlate 0 with everything else and keep a unit diagonal.
/// Throws TooFewSamples below two rows.
CorrelationMatrix correlation_matrix(const Dataset& d);

/// Header row and first column carry the names.
void write_correlation_csv(const CorrelationMatrix& corr, const std::filesystem::path& path);

struct FiveNumbers {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Quantile with linear interpolation at position p * (n - 1) of the sorted values.
double quantile_sorted(std::span<const double> sorted, double p);
FiveNumbers five_numbers(std::vector<double> values);

struct GroupSummary {
    double category = 0.0;
    int label = 0;
    FiveNumbers stats;
    std::size_t count = 0;
};

inline constexpr std::size_t kMaxCategories = 32;

/// Five-number summary of value_column per (category, label) pair present in
/// the data, ascending by category then label.
/// Errors: UnknownColumn, TooManyCategories (more than 32 distinct categories).
std::vector<GroupSummary> group_summary(const Dataset& d, const std::string& category_column,
                                        const std::string& value_column);

void write_group_csv(const std::vector<GroupSummary>& groups, const std::filesystem::path& path);

struct EllipseSpec {
    std::array<double, 2> center{};
    std::array<double, 2> semi_axes{};  // major first
    double angle = 0.0;                 // major axis from the first coordinate axis, [0, pi)
    double scale = 2.0;                 // standard deviations
};

/// Contour of a 2-D Gaussian at `scale` standard deviations.
/// Errors: NotPositiveDefinite, InvalidArgument for scale <= 0.
EllipseSpec covariance_ellipse(std::array<double, 2> mean, const Matrix& cov, double scale = 2.0);

/// Project onto two raw feature columns.
struct FeaturePlane {
    std::string first;
    std::string second;
};

/// Project onto the Fisher axis and the orthogonal direction of largest
/// remaining variance. LDA models only.
struct FisherResidualPlane {};

using ProjectionPlane = std::variant<FeaturePlane, FisherResidualPlane>;

struct ClassProjection {
    int label = 0;
    std::vector<std::array<double, 2>> points;
    std::array<double, 2> mean{};
    EllipseSpec ellipse;
};

struct SeparabilityProjection {
    std::array<std::string, 2> axis_names;
    std::array<Vector, 2> axes;  // unit directions in feature space
    std::array<ClassProjection, 2> classes;
};

/// Projects the samples of `d` and the fitted class Gaussians of `m` onto a
/// plane. Ellipses come from the model covariance projected onto the plane.
/// Errors: UnknownColumn, NotAnLdaModel, DimensionMismatch.
SeparabilityProjection separability_projection(const Dataset& d, const GdaModel& m,
                                               const ProjectionPlane& plane, double scale = 2.0);

}  // namespace gda
