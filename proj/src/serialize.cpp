#include <string>

#include "json.hpp"

#include "gda/error.hpp"
#include "gda/model.hpp"

namespace gda {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "gda-model";
constexpr int kVersion = 1;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const char* field) {
    if (!j.is_array()) throw Error(ErrorCode::MalformedDocument, std::string(field) + " must be an array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    std::vector<double> entries;
    for (const auto& row : j) {
        auto values = row.get<std::vector<double>>();
        if (entries.empty() && cols == 0) cols = values.size();
        if (values.size() != cols) throw Error(ErrorCode::MalformedDocument, std::string(field) + " is ragged");
        entries.insert(entries.end(), values.begin(), values.end());
    }
    try {
        return Matrix(rows, cols, std::move(entries));
    } catch (const Error& e) {
        throw Error(ErrorCode::MalformedDocument, std::string(field) + ": " + e.what());
    }
}

json class_to_json(const ClassStats& s) {
    return json{
        {"label", s.label},
        {"count", s.count},
        {"prior", s.prior},
        {"log_det", s.log_det},
        {"regularization", s.regularization},
        {"mean", s.mean},
        {"covariance", matrix_to_json(s.covariance)},
        {"cholesky", matrix_to_json(s.chol.lower())},
    };
}

ClassStats class_from_json(const json& j) {
    ClassStats s;
    s.label = j.at("label").get<int>();
    s.count = j.at("count").get<std::size_t>();
    s.prior = j.at("prior").get<double>();
    s.log_det = j.at("log_det").get<double>();
    s.regularization = j.value("regularization", 0.0);
    s.mean = j.at("mean").get<Vector>();
    s.covariance = matrix_from_json(j.at("covariance"), "covariance");
    try {
        s.chol = CholeskyFactor::from_validated_lower(matrix_from_json(j.at("cholesky"), "cholesky"));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::MalformedDocument) throw;
        throw Error(ErrorCode::InvariantViolation, e.what());
    }
    return s;
}

json model_to_json(const GdaModel& m) {
    return json{
        {"format", kFormat},
        {"version", kVersion},
        {"kind", std::string(to_string(m.kind()))},
        {"n_features", m.n_features()},
        {"regularization_applied", m.regularization_applied()},
        {"classes", json::array({class_to_json(m.class_stats(0)), class_to_json(m.class_stats(1))})},
    };
}

GdaModel model_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedDocument, "model document must be a JSON object");
    if (j.value("format", std::string()) != kFormat) {
        throw Error(ErrorCode::MalformedDocument, "not a gda-model document");
    }
    if (j.at("version").get<int>() != kVersion) {
        throw Error(ErrorCode::MalformedDocument, "unsupported model version");
    }
    ModelKind kind;
    try {
        kind = parse_model_kind(j.at("kind").get<std::string>());
    } catch (const Error& e) {
        throw Error(ErrorCode::MalformedDocument, e.what());
    }
    const auto& classes = j.at("classes");
    if (!classes.is_array() || classes.size() != 2) {
        throw Error(ErrorCode::MalformedDocument, "classes must hold exactly two records");
    }
    GdaModel model = GdaModel::from_parts(kind, class_from_json(classes[0]), class_from_json(classes[1]));
    if (j.at("n_features").get<std::size_t>() != model.n_features()) {
        throw Error(ErrorCode::InvariantViolation, "n_features disagrees with the class means");
    }
    if (j.at("regularization_applied").get<double>() != model.regularization_applied()) {
        throw Error(ErrorCode::InvariantViolation, "regularization_applied disagrees with the class records");
    }
    return model;
}

template <typename F>
auto guarded(F&& body) {
    try {
        return body();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, e.what());
    }
}

}  // namespace

std::string serialize(const GdaModel& m) { return model_to_json(m).dump(2) + "\n"; }

std::string serialize(const ModelDocument& doc) {
    json j = model_to_json(doc.model);
    if (!doc.feature_names.empty()) j["feature_names"] = doc.feature_names;
    if (doc.scaling) {
        j["standardization"] = json{
            {"mean", doc.scaling->mean},
            {"stddev", doc.scaling->stddev},
            {"constant_columns", doc.scaling->constant_columns},
        };
    }
    return j.dump(2) + "\n";
}

GdaModel deserialize(std::string_view text) {
    return guarded([&] { return model_from_json(json::parse(text)); });
}

ModelDocument deserialize_document(std::string_view text) {
    return guarded([&] {
        const json j = json::parse(text);
        ModelDocument doc{model_from_json(j), {}, std::nullopt};
        const std::size_t d = doc.model.n_features();
        if (j.contains("feature_names")) {
            doc.feature_names = j.at("feature_names").get<std::vector<std::string>>();
            if (doc.feature_names.size() != d) {
                throw Error(ErrorCode::InvariantViolation, "feature_names length disagrees with n_features");
            }
        }
        if (j.contains("standardization")) {
            const auto& s = j.at("standardization");
            Scaling scaling;
            scaling.mean = s.at("mean").get<std::vector<double>>();
            scaling.stddev = s.at("stddev").get<std::vector<double>>();
            scaling.constant_columns = s.at("constant_columns").get<std::vector<std::size_t>>();
            if (scaling.mean.size() != d || scaling.stddev.size() != d) {
                throw Error(ErrorCode::InvariantViolation, "standardization length disagrees with n_features");
            }
            for (std::size_t c = 0; c < d; ++c) {
                if (!scaling.is_constant(c) && !(scaling.stddev[c] > 0.0)) {
                    throw Error(ErrorCode::InvariantViolation, "standardization stddev must be positive");
                }
            }
            doc.scaling = std::move(scaling);
        }
        return doc;
    });
}

}  // namespace gda
