#include "gda/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "gda/analysis.hpp"
#include "gda/error.hpp"
#include "gda/metrics.hpp"

namespace gda {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// Files written by one command. Unless commit() is called they are deleted
/// when the set goes out of scope.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;
    ~OutputSet() {
        if (committed_) return;
        for (const auto& p : paths_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

    fs::path add(const std::string& name) { return track(dir_ / name); }
    fs::path track(fs::path p) {
        paths_.push_back(p);
        return p;
    }
    void commit() { committed_ = true; }

private:
    fs::path dir_;
    std::vector<fs::path> paths_;
    bool committed_ = false;
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) {
        throw Error(ErrorCode::IoError, "cannot create output directory " + dir.string());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::string human(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

LoadedCsv load(const RunConfig& c, std::ostream& err) {
    if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "--test-fraction must lie in (0, 1)");
    }
    LoadedCsv loaded = load_csv(c.data, {c.label_column, c.positive_label, c.on_missing});
    if (loaded.dropped_rows > 0) {
        err << "warning: dropped " << loaded.dropped_rows << " row(s) with missing cells\n";
    }
    if (loaded.label_counts.size() > 2) {
        err << "warning: label column '" << c.label_column << "' has " << loaded.label_counts.size()
            << " distinct values; everything other than '" << loaded.dataset.positive_label
            << "' is encoded 0\n";
    }
    return loaded;
}

struct Prepared {
    Dataset train;
    Dataset test;
    std::optional<Scaling> scaling;
};

Prepared prepare(const RunConfig& c, const Dataset& d, std::ostream& err) {
    TrainTestSplit split = train_test_split(d, {c.test_fraction, c.seed});
    if (!c.standardize) return {std::move(split.train), std::move(split.test), std::nullopt};
    Standardized s = standardize(split.train, split.test);
    for (std::size_t col : s.scaling.constant_columns) {
        err << "warning: feature '" << d.feature_names[col] << "' is constant in the training partition\n";
    }
    return {std::move(s.train), std::move(s.test), std::move(s.scaling)};
}

GdaModel fit_named(const Dataset& train, ModelKind kind, const std::string& positive) {
    try {
        return fit(train, kind);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InsufficientClassSamples || e.code() == ErrorCode::CovarianceNotPD) {
            throw Error(e.code(), std::string(e.what()) + " [class 1 = '" + positive + "', class 0 = other]");
        }
        throw;
    }
}

std::vector<int> predict_all(const GdaModel& m, const Matrix& x) {
    std::vector<int> out;
    out.reserve(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(predict(m, x.row(r)));
    return out;
}

json rate_json(const Rate& r) { return json{{"value", r.value}, {"undefined", r.undefined}}; }

json ellipse_json(const EllipseSpec& e) {
    return json{{"center", e.center}, {"semi_axes", e.semi_axes}, {"angle", e.angle}, {"scale", e.scale}};
}

std::optional<ProjectionPlane> choose_plane(const RunConfig& c, const Dataset& d) {
    if (c.projection == "fisher" || c.projection == "fisher+residual") return FisherResidualPlane{};
    if (!c.projection.empty()) {
        const auto comma = c.projection.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "--projection must be 'fisher' or 'feature_a,feature_b'");
        }
        return FeaturePlane{c.projection.substr(0, comma), c.projection.substr(comma + 1)};
    }
    if (d.n_features() < 2) return std::nullopt;
    if (c.kind == ModelKind::Lda) return FisherResidualPlane{};
    return FeaturePlane{d.feature_names[0], d.feature_names[1]};
}

json separability_json(const SeparabilityProjection& sp) {
    json classes = json::array();
    for (const auto& cp : sp.classes) {
        json points = json::array();
        for (const auto& p : cp.points) points.push_back(p);
        classes.push_back(json{{"label", cp.label},
                               {"mean", cp.mean},
                               {"ellipse", ellipse_json(cp.ellipse)},
                               {"points", std::move(points)}});
    }
    return json{{"axes", sp.axis_names},
                {"directions", json::array({sp.axes[0], sp.axes[1]})},
                {"classes", std::move(classes)}};
}

json config_json(const RunConfig& c) {
    return json{
        {"data", c.data.string()},
        {"label_column", c.label_column},
        {"positive_label", c.positive_label},
        {"on_missing", c.on_missing == MissingPolicy::Reject ? "reject" : "drop"},
        {"kind", std::string(to_string(c.kind))},
        {"test_fraction", c.test_fraction},
        {"seed", c.seed},
        {"standardize", c.standardize},
        {"ellipse_scale", c.ellipse_scale},
        {"projection", c.projection},
    };
}

template <typename Body>
int run_guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int cmd_analyze(const RunConfig& c, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        const LoadedCsv loaded = load(c, err);
        const Dataset& d = loaded.dataset;

        std::string value_column = c.value_column;
        if (!c.category_columns.empty() && value_column.empty()) {
            for (const auto& name : d.feature_names) {
                if (std::find(c.category_columns.begin(), c.category_columns.end(), name) ==
                    c.category_columns.end()) {
                    value_column = name;
                    break;
                }
            }
            if (value_column.empty()) {
                throw Error(ErrorCode::UnknownColumn, "no feature left to summarize; pass --value-column");
            }
        }
        // Validate every column before any file is written.
        for (const auto& cat : c.category_columns) d.feature_index(cat);
        if (!value_column.empty()) d.feature_index(value_column);

        ensure_dir(c.out_dir);
        OutputSet outputs(c.out_dir);
        const CorrelationMatrix corr = correlation_matrix(d);
        write_correlation_csv(corr, outputs.add("correlation.csv"));
        for (std::size_t col : corr.constant_columns) {
            err << "warning: column '" << corr.names[col] << "' is constant; its correlations are 0\n";
        }
        out << "correlation: " << corr.names.size() << "x" << corr.names.size() << " -> "
            << (c.out_dir / "correlation.csv").string() << '\n';

        for (const auto& cat : c.category_columns) {
            const auto groups = group_summary(d, cat, value_column);
            const fs::path path = outputs.add("groups_" + cat + ".csv");
            write_group_csv(groups, path);
            out << "groups: " << groups.size() << " (" << cat << " x label) of '" << value_column << "' -> "
                << path.string() << '\n';
        }
        outputs.commit();
        return 0;
    });
}

int cmd_fit(const RunConfig& c, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        const LoadedCsv loaded = load(c, err);
        const Prepared prep = prepare(c, loaded.dataset, err);
        GdaModel model = fit_named(prep.train, c.kind, loaded.dataset.positive_label);
        const double train_acc = accuracy(confusion_matrix(prep.train.labels, predict_all(model, prep.train.features)));

        const fs::path model_path = c.model_path.value_or(c.out_dir / "model.json");
        if (model_path.has_parent_path()) ensure_dir(model_path.parent_path());
        OutputSet outputs(model_path.parent_path());
        write_text(outputs.track(model_path),
                   serialize(ModelDocument{model, loaded.dataset.feature_names, prep.scaling}));
        outputs.commit();

        if (model.regularization_applied() > 0.0) {
            err << "warning: covariance regularized with lambda = " << model.regularization_applied() << '\n';
        }
        out << to_string(c.kind) << " fitted on " << prep.train.n_samples() << " samples\n";
        out << "training accuracy: " << human(train_acc) << '\n';
        out << "model: " << model_path.string() << '\n';
        return 0;
    });
}

int cmd_evaluate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        const LoadedCsv loaded = load(c, err);
        const Prepared prep = prepare(c, loaded.dataset, err);
        const GdaModel model = fit_named(prep.train, c.kind, loaded.dataset.positive_label);

        const auto train_pred = predict_all(model, prep.train.features);
        const auto test_pred = predict_all(model, prep.test.features);
        const double train_acc = accuracy(confusion_matrix(prep.train.labels, train_pred));
        const ConfusionMatrix cm = confusion_matrix(prep.test.labels, test_pred);

        std::vector<double> scores;
        scores.reserve(prep.test.n_samples());
        for (std::size_t r = 0; r < prep.test.n_samples(); ++r) {
            scores.push_back(posterior(model, prep.test.features.row(r))[1]);
        }

        json warnings = json::array();
        const bool curves_possible = prep.test.count_label(0) > 0 && prep.test.count_label(1) > 0;

        std::optional<SeparabilityProjection> separability;
        const auto plane = choose_plane(c, prep.train);
        if (plane) {
            try {
                separability = separability_projection(prep.train, model, *plane, c.ellipse_scale);
            } catch (const Error& e) {
                if (!c.projection.empty()) throw;
                warnings.push_back(std::string("separability skipped: ") + e.what());
            }
        }

        ensure_dir(c.out_dir);
        OutputSet outputs(c.out_dir);

        json report{
            {"config", config_json(c)},
            {"n_train", prep.train.n_samples()},
            {"n_test", prep.test.n_samples()},
            {"train_accuracy", train_acc},
            {"test_accuracy", accuracy(cm)},
            {"confusion_matrix", json{{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}}},
            {"precision", rate_json(precision(cm))},
            {"recall", rate_json(recall(cm))},
            {"specificity", rate_json(specificity(cm))},
            {"false_positive_rate", rate_json(false_positive_rate(cm))},
            {"regularization_applied", model.regularization_applied()},
            {"score", "posterior_class_1"},
        };
        json files = json::object();
        if (curves_possible) {
            const Curve pr = pr_curve(prep.test.labels, scores);
            const Curve roc = roc_curve(prep.test.labels, scores);
            report["average_precision"] = average_precision(prep.test.labels, scores);
            report["auc"] = auc(roc);
            write_curve_csv(pr, outputs.add("pr_curve.csv"));
            write_curve_csv(roc, outputs.add("roc_curve.csv"));
            files["pr_curve"] = "pr_curve.csv";
            files["roc_curve"] = "roc_curve.csv";
        } else {
            report["average_precision"] = nullptr;
            report["auc"] = nullptr;
            warnings.push_back("test partition holds a single class; PR/ROC curves skipped");
        }
        if (separability) report["separability"] = separability_json(*separability);
        report["files"] = files;
        report["warnings"] = warnings;
        write_text(outputs.add("report.json"), report.dump(2) + "\n");
        outputs.commit();

        for (const auto& w : warnings) err << "warning: " << w.get<std::string>() << '\n';
        out << to_string(c.kind) << ": train " << prep.train.n_samples() << ", test " << prep.test.n_samples()
            << '\n';
        out << "training accuracy: " << human(train_acc) << '\n';
        out << "testing accuracy:  " << human(accuracy(cm)) << '\n';
        out << "confusion: tp=" << cm.tp << " fp=" << cm.fp << " fn=" << cm.fn << " tn=" << cm.tn << '\n';
        out << "precision " << human(precision(cm).value) << ", recall " << human(recall(cm).value)
            << ", specificity " << human(specificity(cm).value) << ", fpr "
            << human(false_positive_rate(cm).value) << '\n';
        if (curves_possible) {
            out << "average precision " << human(report["average_precision"].get<double>()) << ", auc "
                << human(report["auc"].get<double>()) << '\n';
        }
        out << "report: " << (c.out_dir / "report.json").string() << '\n';
        return 0;
    });
}

int cmd_predict(const PredictConfig& c, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        std::ifstream in(c.model, std::ios::binary);
        if (!in) throw Error(ErrorCode::IoError, "cannot open model " + c.model.string());
        std::stringstream buf;
        buf << in.rdbuf();
        const ModelDocument doc = deserialize_document(buf.str());

        FeatureTable table = load_feature_csv(c.input, c.label_column);
        const std::size_t expected = doc.model.n_features();
        if (table.features.cols() != expected) {
            throw Error(ErrorCode::DimensionMismatch, "model expects " + std::to_string(expected) +
                                                          " feature columns, input has " +
                                                          std::to_string(table.features.cols()));
        }
        if (!doc.feature_names.empty() && doc.feature_names != table.names) {
            err << "warning: input column names differ from the model's; columns are matched by position\n";
        }
        if (doc.scaling) table.features = doc.scaling->apply(table.features);

        std::ostringstream csv;
        csv << "predicted_label,posterior_1,log_likelihood_ratio\n";
        for (std::size_t r = 0; r < table.features.rows(); ++r) {
            const auto x = table.features.row(r);
            const double ratio = log_likelihood_ratio(doc.model, x);
            csv << classify_by_threshold(ratio, 0.0) << ',' << format_real(posterior(doc.model, x)[1]) << ','
                << format_real(ratio) << '\n';
        }

        if (c.output.has_parent_path()) ensure_dir(c.output.parent_path());
        OutputSet outputs(c.output.parent_path());
        write_text(outputs.track(c.output), csv.str());
        outputs.commit();
        out << "predicted " << table.features.rows() << " row(s) -> " << c.output.string() << '\n';
        return 0;
    });
}

}  // namespace gda
