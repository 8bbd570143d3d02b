#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gda {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const noexcept { return tp + fp + fn + tn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

/// A ratio whose denominator may be zero. In that case value is 0.0 and
/// `undefined` is set; NaN never escapes.
struct Rate {
    double value = 0.0;
    bool undefined = false;
};

/// Errors: LengthMismatch, EmptyInput, InvalidArgument for labels outside {0,1}.
ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred);

/// (tp + tn) / total. Throws EmptyInput on an empty matrix.
double accuracy(const ConfusionMatrix& cm);
Rate precision(const ConfusionMatrix& cm);
Rate recall(const ConfusionMatrix& cm);
inline Rate true_positive_rate(const ConfusionMatrix& cm) { return recall(cm); }
Rate specificity(const ConfusionMatrix& cm);
Rate false_positive_rate(const ConfusionMatrix& cm);

enum class CurveKind { PrecisionRecall, Roc };

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
    double threshold = 0.0;
};

/// PR: x = recall, y = precision. ROC: x = FPR, y = TPR. Thresholds are
/// descending; a sample is predicted positive when score >= threshold.
struct Curve {
    CurveKind kind = CurveKind::Roc;
    std::vector<CurvePoint> points;
};

/// One point per distinct score, preceded by the plotting anchor
/// (recall 0, precision 1, threshold +inf). Errors: LengthMismatch, NoPositives.
Curve pr_curve(std::span<const int> y_true, std::span<const double> scores);

/// Non-interpolated step sum of (recall_k - recall_{k-1}) * precision_k over
/// the thresholds of pr_curve, anchor excluded.
double average_precision(std::span<const int> y_true, std::span<const double> scores);

/// Starts at (0,0,+inf) and ends at (1,1); errors: LengthMismatch, SingleClassInput.
Curve roc_curve(std::span<const int> y_true, std::span<const double> scores);

/// Trapezoidal area under a ROC curve. Throws WrongCurveKind for PR curves.
double auc(const Curve& curve);

/// Writes "x,y,threshold" rows with 17 significant digits.
void write_curve_csv(const Curve& curve, const std::filesystem::path& path);

/// 17-significant-digit decimal; infinities as "inf"/"-inf".
std::string format_real(double value);

}  // namespace gda
