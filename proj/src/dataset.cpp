#include "gda/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "gda/error.hpp"

namespace gda {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_real(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (*begin == '+') ++begin;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
    return text;
}

std::vector<std::string> trimmed_header(const std::vector<std::vector<std::string>>& records,
                                        const std::filesystem::path& path) {
    if (records.empty()) throw Error(ErrorCode::EmptyDataset, path.string() + " has no header row");
    std::vector<std::string> header;
    for (const auto& h : records.front()) header.push_back(trim(h));
    return header;
}

std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t range) {
    // Rejection sampling: discard the low 2^64 mod range values.
    const std::uint64_t threshold = (0 - range) % range;
    for (;;) {
        const std::uint64_t r = engine();
        if (r >= threshold) return r % range;
    }
}

}  // namespace

std::size_t Dataset::count_label(int label) const noexcept {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.feature_names = feature_names;
    out.label_column = label_column;
    out.positive_label = positive_label;
    out.features = Matrix(rows.size(), n_features());
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = features.row(rows[i]);
        std::copy(src.begin(), src.end(), out.features.row(i).begin());
        out.labels.push_back(labels[rows[i]]);
    }
    return out;
}

std::size_t Dataset::feature_index(const std::string& name) const {
    const auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) throw Error(ErrorCode::UnknownColumn, "no feature column '" + name + "'");
    return static_cast<std::size_t>(it - feature_names.begin());
}

void Dataset::validate() const {
    if (labels.size() != features.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "label count differs from feature rows");
    }
    if (feature_names.size() != features.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "feature name count differs from feature columns");
    }
    for (int y : labels) {
        if (y != 0 && y != 1) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    }
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_record = [&] {
        record.push_back(std::move(field));
        field.clear();
        const bool blank = record.size() == 1 && trim(record.front()).empty() && !field_started;
        if (!blank) records.push_back(std::move(record));
        record.clear();
        field_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                record.push_back(std::move(field));
                field.clear();
                field_started = true;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (field_started || !field.empty() || !record.empty()) end_record();
    return records;
}

LoadedCsv load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    const auto records = parse_csv(read_file(path));
    const auto header = trimmed_header(records, path);

    const auto label_it = std::find(header.begin(), header.end(), options.label_column);
    if (label_it == header.end()) {
        throw Error(ErrorCode::MissingLabelColumn,
                    "label column '" + options.label_column + "' not in header of " + path.string());
    }
    const std::size_t label_col = static_cast<std::size_t>(label_it - header.begin());
    const std::string positive = trim(options.positive_label);

    LoadedCsv out;
    Dataset& d = out.dataset;
    d.label_column = options.label_column;
    d.positive_label = positive;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_col) d.feature_names.push_back(header[c]);
    }
    const std::size_t n_features = d.feature_names.size();

    std::vector<double> entries;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size()) {
            throw Error(ErrorCode::NonNumericCell, "row " + std::to_string(r) + " has " +
                                                       std::to_string(rec.size()) + " fields, header has " +
                                                       std::to_string(header.size()));
        }
        std::vector<double> row;
        row.reserve(n_features);
        bool missing = false;
        for (std::size_t c = 0; c < rec.size(); ++c) {
            const std::string cell = trim(rec[c]);
            if (cell.empty()) {
                if (options.on_missing == MissingPolicy::DropRow) {
                    missing = true;
                    break;
                }
                throw Error(ErrorCode::NonNumericCell,
                            "row " + std::to_string(r) + ", column '" + header[c] + "' is empty");
            }
            if (c == label_col) continue;
            const auto value = parse_real(cell);
            if (!value) {
                throw Error(ErrorCode::NonNumericCell, "row " + std::to_string(r) + ", column '" +
                                                           header[c] + "': '" + cell + "' is not a number");
            }
            row.push_back(*value);
        }
        if (missing) {
            ++out.dropped_rows;
            continue;
        }
        const std::string raw_label = trim(rec[label_col]);
        const bool is_positive = raw_label == positive;
        ++out.label_counts[raw_label];
        entries.insert(entries.end(), row.begin(), row.end());
        d.labels.push_back(is_positive ? 1 : 0);
    }

    if (d.labels.empty()) throw Error(ErrorCode::EmptyDataset, path.string() + " has no usable data rows");
    d.features = Matrix(d.labels.size(), n_features, std::move(entries));
    if (d.count_label(1) == 0 || d.count_label(0) == 0) {
        throw Error(ErrorCode::SingleClassDataset,
                    "only one class present (positive label '" + positive + "')");
    }
    return out;
}

FeatureTable load_feature_csv(const std::filesystem::path& path,
                              const std::optional<std::string>& skip_column) {
    const auto records = parse_csv(read_file(path));
    const auto header = trimmed_header(records, path);

    std::vector<bool> keep(header.size(), true);
    FeatureTable out;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (skip_column && header[c] == *skip_column) {
            keep[c] = false;
        } else {
            out.names.push_back(header[c]);
        }
    }

    std::vector<double> entries;
    std::size_t rows = 0;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size()) {
            throw Error(ErrorCode::NonNumericCell, "row " + std::to_string(r) + " has " +
                                                       std::to_string(rec.size()) + " fields, header has " +
                                                       std::to_string(header.size()));
        }
        for (std::size_t c = 0; c < rec.size(); ++c) {
            if (!keep[c]) continue;
            const std::string cell = trim(rec[c]);
            const auto value = parse_real(cell);
            if (!value) {
                throw Error(ErrorCode::NonNumericCell, "row " + std::to_string(r) + ", column '" +
                                                           header[c] + "': '" + cell + "' is not a number");
            }
            entries.push_back(*value);
        }
        ++rows;
    }
    if (rows == 0) throw Error(ErrorCode::EmptyDataset, path.string() + " has no data rows");
    out.features = Matrix(rows, out.names.size(), std::move(entries));
    return out;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::mt19937_64 engine(seed);
    for (std::size_t i = n; i-- > 1;) {
        const auto j = static_cast<std::size_t>(uniform_below(engine, static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

TrainTestSplit train_test_split(const Dataset& d, const SplitSpec& spec) {
    d.validate();
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "test fraction must lie in (0, 1)");
    }
    const std::size_t n = d.n_samples();
    const auto n_test = static_cast<std::size_t>(std::llround(spec.test_fraction * static_cast<double>(n)));
    if (n_test == 0 || n_test >= n) {
        throw Error(ErrorCode::DegenerateSplit, "test fraction " + std::to_string(spec.test_fraction) +
                                                    " of " + std::to_string(n) +
                                                    " samples leaves a partition empty");
    }
    const auto perm = seeded_permutation(n, spec.seed);

    TrainTestSplit out;
    out.test_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
    out.train = d.subset(out.train_rows);
    out.test = d.subset(out.test_rows);
    return out;
}

bool is_constant_column(const Matrix& features, std::size_t column) {
    for (std::size_t r = 1; r < features.rows(); ++r) {
        if (features(r, column) != features(0, column)) return false;
    }
    return true;
}

bool Scaling::is_constant(std::size_t column) const {
    return std::find(constant_columns.begin(), constant_columns.end(), column) != constant_columns.end();
}

void Scaling::apply_row(std::span<double> row) const {
    if (row.size() != mean.size()) {
        throw Error(ErrorCode::DimensionMismatch, "row has " + std::to_string(row.size()) +
                                                      " features, scaling expects " +
                                                      std::to_string(mean.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
        if (!is_constant(c)) row[c] = (row[c] - mean[c]) / stddev[c];
    }
}

Matrix Scaling::apply(const Matrix& features) const {
    Matrix out = features;
    for (std::size_t r = 0; r < out.rows(); ++r) apply_row(out.row(r));
    return out;
}

Scaling fit_scaling(const Matrix& features) {
    const std::size_t n = features.rows();
    const std::size_t d = features.cols();
    Scaling s;
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) sum += features(r, c);
        const double mean = n > 0 ? sum / static_cast<double>(n) : 0.0;
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) ss += (features(r, c) - mean) * (features(r, c) - mean);
        s.mean[c] = mean;
        if (n < 2 || is_constant_column(features, c)) {
            s.stddev[c] = 1.0;
            s.constant_columns.push_back(c);
        } else {
            s.stddev[c] = std::sqrt(ss / static_cast<double>(n - 1));
        }
    }
    return s;
}

Standardized standardize(const Dataset& train, const Dataset& test) {
    if (train.n_features() != test.n_features()) {
        throw Error(ErrorCode::DimensionMismatch, "train and test feature counts differ");
    }
    Standardized out{train, test, fit_scaling(train.features)};
    out.train.features = out.scaling.apply(train.features);
    out.test.features = out.scaling.apply(test.features);
    return out;
}

}  // namespace gda
