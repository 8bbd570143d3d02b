#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gda/linalg.hpp"

namespace gda {

/// Feature matrix plus binary labels (1 = positive_label, 0 = everything else).
struct Dataset {
    Matrix features;  // n_samples x n_features
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    std::string label_column;
    std::string positive_label;

    std::size_t n_samples() const noexcept { return features.rows(); }
    std::size_t n_features() const noexcept { return features.cols(); }
    std::size_t count_label(int label) const noexcept;

    /// Rows in the given order.
    Dataset subset(std::span<const std::size_t> rows) const;

    /// Index of a feature column; throws UnknownColumn.
    std::size_t feature_index(const std::string& name) const;

    /// Throws when shapes disagree or a label is outside {0,1}.
    void validate() const;
};

enum class MissingPolicy { Reject, DropRow };

struct CsvOptions {
    std::string label_column;
    std::string positive_label;
    MissingPolicy on_missing = MissingPolicy::Reject;
};

struct LoadedCsv {
    Dataset dataset;
    std::size_t dropped_rows = 0;
    /// Rows per raw label value. Any value other than positive_label is encoded
    /// 0, so more than two keys means a non-binary column was collapsed.
    std::map<std::string, std::size_t> label_counts;
};

/// Reads a headered, comma-delimited CSV. Every non-label column must be
/// numeric. Errors: IoError, MissingLabelColumn, NonNumericCell, EmptyDataset,
/// SingleClassDataset.
LoadedCsv load_csv(const std::filesystem::path& path, const CsvOptions& options);

struct FeatureTable {
    Matrix features;
    std::vector<std::string> names;
};

/// Loads a numeric-only CSV (prediction input). `skip_column`, when present in
/// the header, is ignored.
FeatureTable load_feature_csv(const std::filesystem::path& path,
                              const std::optional<std::string>& skip_column = std::nullopt);

/// Parses CSV text into records (RFC-4180 quoting, CRLF or LF line ends).
/// Blank lines are skipped.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

struct SplitSpec {
    double test_fraction = 0.3;
    std::uint64_t seed = 42;
};

struct TrainTestSplit {
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
};

/// Seeded Fisher-Yates permutation of 0..n-1. Uses its own integer draws on
/// top of mt19937_64 so the result is identical across standard libraries.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

/// The first round(test_fraction * n) entries of the seeded permutation form
/// the test partition. Throws DegenerateSplit if either side would be empty.
TrainTestSplit train_test_split(const Dataset& d, const SplitSpec& spec);

/// Per-feature affine rescaling learned from a training partition.
struct Scaling {
    std::vector<double> mean;
    std::vector<double> stddev;                // sample stddev (n - 1 divisor)
    std::vector<std::size_t> constant_columns; // left untouched

    bool is_constant(std::size_t column) const;
    void apply_row(std::span<double> row) const;
    Matrix apply(const Matrix& features) const;
};

/// Learns a Scaling from the columns of `features`. A column whose values are
/// all identical is constant.
Scaling fit_scaling(const Matrix& features);

struct Standardized {
    Dataset train;
    Dataset test;
    Scaling scaling;
};

/// Standardizes both partitions with statistics computed on `train` only.
Standardized standardize(const Dataset& train, const Dataset& test);

/// True when every entry of the column is equal to the first.
bool is_constant_column(const Matrix& features, std::size_t column);

}  // namespace gda
