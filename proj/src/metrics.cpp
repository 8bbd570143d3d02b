#include "gda/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "gda/error.hpp"

namespace gda {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Rate ratio(std::size_t num, std::size_t den) {
    if (den == 0) return {0.0, true};
    return {static_cast<double>(num) / static_cast<double>(den), false};
}

void require_scored_labels(std::span<const int> y_true, std::span<const double> scores) {
    if (y_true.size() != scores.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(y_true.size()) + " labels vs " +
                                                   std::to_string(scores.size()) + " scores");
    }
    if (y_true.empty()) throw Error(ErrorCode::EmptyInput, "no samples to score");
    for (int y : y_true) {
        if (y != 0 && y != 1) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    }
    for (double s : scores) {
        if (std::isnan(s)) throw Error(ErrorCode::InvalidArgument, "scores must not be NaN");
    }
}

/// Cumulative counts at each distinct threshold, highest score first.
struct ThresholdCounts {
    double threshold;
    std::size_t tp;
    std::size_t fp;
};

std::vector<ThresholdCounts> sweep(std::span<const int> y_true, std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<ThresholdCounts> out;
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t idx = order[i];
        if (y_true[idx] == 1) {
            ++tp;
        } else {
            ++fp;
        }
        const bool last_of_tie = i + 1 == order.size() || scores[order[i + 1]] != scores[idx];
        if (last_of_tie) out.push_back({scores[idx], tp, fp});
    }
    return out;
}

}  // namespace

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(y_true.size()) + " labels vs " +
                                                   std::to_string(y_pred.size()) + " predictions");
    }
    if (y_true.empty()) throw Error(ErrorCode::EmptyInput, "no predictions to tabulate");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
            throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
        }
        if (t == 1 && p == 1) ++cm.tp;
        else if (t == 0 && p == 1) ++cm.fp;
        else if (t == 1 && p == 0) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw Error(ErrorCode::EmptyInput, "accuracy of an empty confusion matrix");
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

Rate precision(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fp); }
Rate recall(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fn); }
Rate specificity(const ConfusionMatrix& cm) { return ratio(cm.tn, cm.tn + cm.fp); }
Rate false_positive_rate(const ConfusionMatrix& cm) { return ratio(cm.fp, cm.fp + cm.tn); }

Curve pr_curve(std::span<const int> y_true, std::span<const double> scores) {
    require_scored_labels(y_true, scores);
    const auto positives = static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
    if (positives == 0) throw Error(ErrorCode::NoPositives, "precision-recall needs a positive sample");

    Curve curve{CurveKind::PrecisionRecall, {}};
    curve.points.push_back({0.0, 1.0, kInf});
    for (const auto& c : sweep(y_true, scores)) {
        curve.points.push_back({static_cast<double>(c.tp) / static_cast<double>(positives),
                                static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp), c.threshold});
    }
    return curve;
}

double average_precision(std::span<const int> y_true, std::span<const double> scores) {
    const Curve curve = pr_curve(y_true, scores);
    double ap = 0.0;
    double previous_recall = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& p = curve.points[i];
        ap += (p.x - previous_recall) * p.y;
        previous_recall = p.x;
    }
    return ap;
}

Curve roc_curve(std::span<const int> y_true, std::span<const double> scores) {
    require_scored_labels(y_true, scores);
    const auto positives = static_cast<std::size_t>(std::count(y_true.begin(), y_true.end(), 1));
    const std::size_t negatives = y_true.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw Error(ErrorCode::SingleClassInput, "ROC needs both positive and negative samples");
    }

    Curve curve{CurveKind::Roc, {}};
    curve.points.push_back({0.0, 0.0, kInf});
    for (const auto& c : sweep(y_true, scores)) {
        curve.points.push_back({static_cast<double>(c.fp) / static_cast<double>(negatives),
                                static_cast<double>(c.tp) / static_cast<double>(positives), c.threshold});
    }
    // The lowest observed score already admits every sample, so (1,1) is
    // normally present; the closing point is only added if it is not.
    const auto& last = curve.points.back();
    if (last.x != 1.0 || last.y != 1.0) curve.points.push_back({1.0, 1.0, -kInf});
    return curve;
}

double auc(const Curve& curve) {
    if (curve.kind != CurveKind::Roc) throw Error(ErrorCode::WrongCurveKind, "AUC is defined on ROC curves");
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        area += (b.x - a.x) * (a.y + b.y) * 0.5;
    }
    return area;
}

std::string format_real(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_curve_csv(const Curve& curve, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << "x,y,threshold\n";
    for (const auto& p : curve.points) {
        out << format_real(p.x) << ',' << format_real(p.y) << ',' << format_real(p.threshold) << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace gda
