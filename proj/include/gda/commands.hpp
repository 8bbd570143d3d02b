#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gda/dataset.hpp"
#include "gda/model.hpp"

namespace gda {

struct RunConfig {
    std::filesystem::path data;
    std::string label_column;
    std::string positive_label;
    MissingPolicy on_missing = MissingPolicy::Reject;
    ModelKind kind = ModelKind::Qda;
    double test_fraction = 0.3;
    std::uint64_t seed = 42;
    bool standardize = false;
    std::filesystem::path out_dir = ".";
    double ellipse_scale = 2.0;
    std::vector<std::string> category_columns;
    std::string value_column;                  // group_summary value; empty = first non-category feature
    std::string projection;                    // "fisher", "a,b" or empty for the default plane
    std::optional<std::filesystem::path> model_path;  // fit output; default out_dir/model.json
};

struct PredictConfig {
    std::filesystem::path model;
    std::filesystem::path input;
    std::filesystem::path output;
    std::optional<std::string> label_column;  // dropped from the input when present
};

/// Each command returns the process exit code: 0 when every artifact was
/// written, 1 otherwise (with a diagnostic on `err` and no partial outputs).

/// correlation.csv plus groups_<category>.csv per requested category column.
int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Splits, fits on the training partition and writes the model document.
int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Split, fit and evaluate in one pass: report.json, pr_curve.csv, roc_curve.csv.
int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// One row per input sample: predicted label, class-1 posterior, log-likelihood ratio.
int cmd_predict(const PredictConfig& config, std::ostream& out, std::ostream& err);

}  // namespace gda
