#include "gda/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <utility>

#include "gda/error.hpp"
#include "gda/metrics.hpp"

namespace gda {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// Features with the label appended as a final numeric column.
Matrix with_label_column(const Dataset& d) {
    const std::size_t n = d.n_samples();
    const std::size_t p = d.n_features();
    Matrix out(n, p + 1);
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = d.features.row(r);
        std::copy(row.begin(), row.end(), out.row(r).begin());
        out(r, p) = static_cast<double>(d.labels[r]);
    }
    return out;
}

/// Unit vector spanning the largest-variance direction of cov restricted to
/// the orthogonal complement of `w`. Power iteration on P·cov·P.
Vector residual_direction(const Matrix& cov, std::span<const double> w) {
    const std::size_t p = cov.rows();
    Matrix proj = Matrix::identity(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) proj(i, j) -= w[i] * w[j];
    const Matrix restricted = multiply(proj, multiply(cov, proj));

    auto largest_column = [p](const Matrix& m) {
        std::size_t best = 0;
        double best_norm = -1.0;
        for (std::size_t j = 0; j < p; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < p; ++i) s += m(i, j) * m(i, j);
            if (s > best_norm) {
                best_norm = s;
                best = j;
            }
        }
        Vector col(p);
        for (std::size_t i = 0; i < p; ++i) col[i] = m(i, best);
        return col;
    };

    Vector v = largest_column(restricted);
    if (norm(v) <= 1e-300) v = largest_column(proj);  // no residual variance: any orthogonal direction
    auto normalize_in_complement = [&](Vector& x) {
        x = multiply(proj, x);
        const double len = norm(x);
        for (double& e : x) e /= len;
    };
    normalize_in_complement(v);

    for (int iter = 0; iter < 10000; ++iter) {
        Vector next = multiply(restricted, v);
        if (norm(next) <= 1e-300) break;
        normalize_in_complement(next);
        double delta = 0.0;
        for (std::size_t i = 0; i < p; ++i) delta = std::max(delta, std::abs(next[i] - v[i]));
        v = std::move(next);
        if (delta < 1e-14) break;
    }

    const auto lead = std::max_element(v.begin(), v.end(),
                                       [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*lead < 0.0) {
        for (double& e : v) e = -e;
    }
    return v;
}

Matrix sample_covariance(const Matrix& x) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    Vector mean(p, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < p; ++c) mean[c] += x(r, c);
    for (double& m : mean) m /= static_cast<double>(n);
    Matrix cov(p, p);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i; j < p; ++j) cov(i, j) += (x(r, i) - mean[i]) * (x(r, j) - mean[j]);
    const double div = n > 1 ? static_cast<double>(n - 1) : 1.0;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            cov(i, j) /= div;
            cov(j, i) = cov(i, j);
        }
    }
    return cov;
}

}  // namespace

CorrelationMatrix correlation_matrix(const Dataset& d) {
    d.validate();
    if (d.n_samples() < 2) throw Error(ErrorCode::TooFewSamples, "correlation needs at least two samples");
    const Matrix x = with_label_column(d);
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();

    CorrelationMatrix out;
    out.names = d.feature_names;
    out.names.push_back(d.label_column.empty() ? "label" : d.label_column);

    std::vector<bool> constant(p);
    Vector mean(p, 0.0);
    for (std::size_t c = 0; c < p; ++c) {
        constant[c] = is_constant_column(x, c);
        if (constant[c]) out.constant_columns.push_back(c);
        for (std::size_t r = 0; r < n; ++r) mean[c] += x(r, c);
        mean[c] /= static_cast<double>(n);
    }

    out.values = Matrix::identity(p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            double r = 0.0;
            if (!constant[i] && !constant[j]) {
                double sxy = 0.0;
                double sxx = 0.0;
                double syy = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double dx = x(k, i) - mean[i];
                    const double dy = x(k, j) - mean[j];
                    sxy += dx * dy;
                    sxx += dx * dx;
                    syy += dy * dy;
                }
                r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
            }
            out.values(i, j) = r;
            out.values(j, i) = r;
        }
    }
    return out;
}

void write_correlation_csv(const CorrelationMatrix& corr, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "feature";
    for (const auto& name : corr.names) out << ',' << csv_escape(name);
    out << '\n';
    for (std::size_t i = 0; i < corr.values.rows(); ++i) {
        out << csv_escape(corr.names[i]);
        for (std::size_t j = 0; j < corr.values.cols(); ++j) out << ',' << format_real(corr.values(i, j));
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw Error(ErrorCode::EmptyInput, "quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile level must lie in [0, 1]");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size() || frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

FiveNumbers five_numbers(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return {quantile_sorted(values, 0.0), quantile_sorted(values, 0.25), quantile_sorted(values, 0.5),
            quantile_sorted(values, 0.75), quantile_sorted(values, 1.0)};
}

std::vector<GroupSummary> group_summary(const Dataset& d, const std::string& category_column,
                                        const std::string& value_column) {
    d.validate();
    const std::size_t cat = d.feature_index(category_column);
    const std::size_t val = d.feature_index(value_column);

    std::set<double> categories;
    std::map<std::pair<double, int>, std::vector<double>> groups;
    for (std::size_t r = 0; r < d.n_samples(); ++r) {
        const double c = d.features(r, cat);
        categories.insert(c);
        if (categories.size() > kMaxCategories) {
            throw Error(ErrorCode::TooManyCategories,
                        "column '" + category_column + "' has more than " + std::to_string(kMaxCategories) +
                            " distinct values");
        }
        groups[{c, d.labels[r]}].push_back(d.features(r, val));
    }

    std::vector<GroupSummary> out;
    out.reserve(groups.size());
    for (auto& [key, values] : groups) {
        const std::size_t count = values.size();
        out.push_back({key.first, key.second, five_numbers(std::move(values)), count});
    }
    return out;
}

void write_group_csv(const std::vector<GroupSummary>& groups, const std::filesystem::path& path) {
    auto out = open_output(path);
    out << "category,label,min,q1,median,q3,max,count\n";
    for (const auto& g : groups) {
        out << format_real(g.category) << ',' << g.label << ',' << format_real(g.stats.min) << ','
            << format_real(g.stats.q1) << ',' << format_real(g.stats.median) << ','
            << format_real(g.stats.q3) << ',' << format_real(g.stats.max) << ',' << g.count << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

EllipseSpec covariance_ellipse(std::array<double, 2> mean, const Matrix& cov, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::InvalidArgument, "ellipse scale must be positive");
    }
    if (cov.rows() != 2 || cov.cols() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "ellipse covariance must be 2x2");
    }
    cholesky(cov);  // NotPositiveDefinite for degenerate input
    const SymEigen2 eig = sym_eigen_2x2(cov);

    EllipseSpec e;
    e.center = mean;
    e.scale = scale;
    e.semi_axes = {scale * std::sqrt(eig.values[0]), scale * std::sqrt(eig.values[1])};
    double angle = std::atan2(eig.vectors[0][1], eig.vectors[0][0]);
    if (angle < 0.0) angle += std::numbers::pi;
    if (angle >= std::numbers::pi) angle = 0.0;
    e.angle = angle;
    return e;
}

SeparabilityProjection separability_projection(const Dataset& d, const GdaModel& m,
                                               const ProjectionPlane& plane, double scale) {
    d.validate();
    if (d.n_features() != m.n_features()) {
        throw Error(ErrorCode::DimensionMismatch, "dataset has " + std::to_string(d.n_features()) +
                                                      " features, model has " +
                                                      std::to_string(m.n_features()));
    }
    const std::size_t p = d.n_features();
    SeparabilityProjection out;

    if (const auto* fp = std::get_if<FeaturePlane>(&plane)) {
        const std::size_t a = d.feature_index(fp->first);
        const std::size_t b = d.feature_index(fp->second);
        if (a == b) throw Error(ErrorCode::InvalidArgument, "projection axes must be two different features");
        out.axis_names = {fp->first, fp->second};
        out.axes = {Vector(p, 0.0), Vector(p, 0.0)};
        out.axes[0][a] = 1.0;
        out.axes[1][b] = 1.0;
    } else {
        if (m.kind() != ModelKind::Lda) {
            throw Error(ErrorCode::NotAnLdaModel, "the fisher+residual plane needs an LDA model");
        }
        if (p < 2) throw Error(ErrorCode::DimensionMismatch, "the fisher+residual plane needs two features");
        out.axis_names = {"fisher", "residual"};
        out.axes[0] = fisher_direction(m);
        out.axes[1] = residual_direction(sample_covariance(d.features), out.axes[0]);
    }

    for (int k = 0; k < 2; ++k) {
        const ClassStats& s = m.class_stats(k);
        ClassProjection& cp = out.classes[static_cast<std::size_t>(k)];
        cp.label = k;
        for (std::size_t r = 0; r < d.n_samples(); ++r) {
            if (d.labels[r] != k) continue;
            const auto row = d.features.row(r);
            cp.points.push_back({dot(out.axes[0], row), dot(out.axes[1], row)});
        }
        cp.mean = {dot(out.axes[0], s.mean), dot(out.axes[1], s.mean)};

        const Vector c0 = multiply(s.covariance, out.axes[0]);
        const Vector c1 = multiply(s.covariance, out.axes[1]);
        const double off = dot(out.axes[0], c1);
        const Matrix projected{{dot(out.axes[0], c0), off}, {off, dot(out.axes[1], c1)}};
        cp.ellipse = covariance_ellipse(cp.mean, projected, scale);
    }
    return out;
}

}  // namespace gda
