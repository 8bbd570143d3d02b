#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gda/analysis.hpp"
#include "gda/error.hpp"
#include "support.hpp"

using namespace gda;
using gda::testing::error_code_of;
using gda::testing::GaussianSpec;
using gda::testing::Rng;

namespace {

Dataset columns(const std::vector<std::vector<double>>& cols, std::vector<int> labels) {
    Dataset d;
    d.features = Matrix(labels.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        d.feature_names.push_back("c" + std::to_string(c));
        for (std::size_t r = 0; r < labels.size(); ++r) d.features(r, c) = cols[c][r];
    }
    d.labels = std::move(labels);
    d.label_column = "label";
    return d;
}

Matrix rebuild(const EllipseSpec& e) {
    const double c = std::cos(e.angle), s = std::sin(e.angle);
    const double a = e.semi_axes[0] / e.scale, b = e.semi_axes[1] / e.scale;
    const double la = a * a, lb = b * b;
    return Matrix{{la * c * c + lb * s * s, (la - lb) * c * s}, {(la - lb) * c * s, la * s * s + lb * c * c}};
}

double max_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("correlation known values") {
    const Dataset d = columns({{1, 2, 3}, {1, 2, 4}, {-1, -2, -3}}, {0, 1, 1});
    const CorrelationMatrix c = correlation_matrix(d);
    CHECK(c.names == std::vector<std::string>{"c0", "c1", "c2", "label"});
    CHECK(c.values.rows() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(c.values(i, i) == 1.0);
    CHECK(c.values(0, 1) == doctest::Approx(0.98198050606).epsilon(1e-10));
    CHECK(c.values(0, 2) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(c.constant_columns.empty());
    CHECK(error_code_of([] { correlation_matrix(columns({{1}}, {0})); }) == ErrorCode::TooFewSamples);
}

TEST_CASE("constant columns correlate zero and are flagged") {
    const CorrelationMatrix c = correlation_matrix(columns({{5, 5, 5, 5}, {1, 2, 3, 5}}, {0, 1, 0, 1}));
    CHECK(c.constant_columns == std::vector<std::size_t>{0});
    CHECK(c.values(0, 0) == 1.0);
    CHECK(c.values(0, 1) == 0.0);
    CHECK(c.values(0, 2) == 0.0);
    CHECK(c.values(2, 0) == 0.0);
}

TEST_CASE("property: correlation matches the pairwise oracle") {
    Rng rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + std::size_t(rng.uniform() * 40), p = 1 + std::size_t(rng.uniform() * 6);
        std::vector<std::vector<double>> cols(p, std::vector<double>(n));
        std::vector<int> labels(n);
        for (std::size_t r = 0; r < n; ++r) {
            labels[r] = r % 2 == 0 ? 0 : 1;
            for (std::size_t c = 0; c < p; ++c) cols[c][r] = rng.normal() * double(c + 1) + (c > 0 ? cols[0][r] : 0);
        }
        const CorrelationMatrix cm = correlation_matrix(columns(cols, labels));
        auto all = cols;
        all.emplace_back(labels.begin(), labels.end());
        for (std::size_t i = 0; i <= p; ++i) {
            for (std::size_t j = 0; j <= p; ++j) {
                CHECK(cm.values(i, j) == cm.values(j, i));
                CHECK(std::abs(cm.values(i, j)) <= 1.0);
                if (i != j) CHECK(std::abs(cm.values(i, j) - gda::testing::brute_pearson(all[i], all[j])) <= 1e-12);
            }
        }
    }
}

TEST_CASE("five_numbers known values") {
    const auto a = five_numbers({5, 3, 1, 4, 2});
    CHECK(a.min == 1);
    CHECK(a.q1 == 2);
    CHECK(a.median == 3);
    CHECK(a.q3 == 4);
    CHECK(a.max == 5);
    const auto b = five_numbers({7});
    CHECK((b.min == 7 && b.q1 == 7 && b.median == 7 && b.q3 == 7 && b.max == 7));
    const auto c = five_numbers({4, 1, 3, 2});
    CHECK(c.q1 == 1.75);
    CHECK(c.median == 2.5);
    CHECK(c.q3 == 3.25);
}

TEST_CASE("property: quantiles match the sorted piecewise-linear oracle") {
    Rng rng(73);
    for (std::size_t n = 1; n <= 10; ++n) {
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> v(n);
            for (double& x : v) x = std::floor(rng.uniform(-5, 5) * 4) / 4;
            const auto f = five_numbers(v);
            CHECK(f.min <= f.q1);
            CHECK(f.q1 <= f.median);
            CHECK(f.median <= f.q3);
            CHECK(f.q3 <= f.max);
            CHECK(std::abs(f.q1 - gda::testing::piecewise_quantile(v, 0.25)) <= 1e-12);
            CHECK(std::abs(f.median - gda::testing::piecewise_quantile(v, 0.5)) <= 1e-12);
            CHECK(std::abs(f.q3 - gda::testing::piecewise_quantile(v, 0.75)) <= 1e-12);
            CHECK(f.min == *std::min_element(v.begin(), v.end()));
            CHECK(f.max == *std::max_element(v.begin(), v.end()));
        }
    }
}

TEST_CASE("group_summary orders by category then label") {
    const Dataset d = columns({{2, 1, 2, 1, 1, 2}, {10, 20, 30, 40, 50, 60}}, {1, 0, 0, 0, 1, 1});
    const auto g = group_summary(d, "c0", "c1");
    REQUIRE(g.size() == 4);
    CHECK(g[0].category == 1);
    CHECK(g[0].label == 0);
    CHECK(g[0].count == 2);
    CHECK(g[0].stats.median == 30);
    CHECK(g[1].category == 1);
    CHECK(g[1].label == 1);
    CHECK(g[1].stats.min == 50);
    CHECK(g[2].category == 2);
    CHECK(g[2].label == 0);
    CHECK(g[2].count == 1);
    CHECK(g[3].category == 2);
    CHECK(g[3].label == 1);
    CHECK(g[3].stats.max == 60);
    CHECK(g[3].stats.median == 35);
    CHECK(error_code_of([&] { group_summary(d, "nope", "c1"); }) == ErrorCode::UnknownColumn);

    std::vector<double> many(40);
    for (std::size_t i = 0; i < many.size(); ++i) many[i] = double(i);
    const Dataset wide = columns({many, many}, std::vector<int>(40, 0));
    CHECK(error_code_of([&] { group_summary(wide, "c0", "c1"); }) == ErrorCode::TooManyCategories);
}

TEST_CASE("covariance_ellipse known values") {
    auto e = covariance_ellipse({0, 0}, Matrix{{4, 0}, {0, 1}}, 2.0);
    CHECK(e.semi_axes[0] == 4.0);
    CHECK(e.semi_axes[1] == 2.0);
    CHECK(e.angle == 0.0);

    e = covariance_ellipse({1, 2}, Matrix::identity(2), 1.0);
    CHECK(e.semi_axes == std::array<double, 2>{1, 1});
    CHECK(e.center == std::array<double, 2>{1, 2});

    e = covariance_ellipse({0, 0}, Matrix{{2, 1}, {1, 2}}, 1.0);
    CHECK(e.semi_axes[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(e.semi_axes[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.angle == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));

    e = covariance_ellipse({0, 0}, Matrix{{2, -1}, {-1, 2}}, 1.0);
    CHECK(e.angle == doctest::Approx(3 * std::numbers::pi / 4).epsilon(1e-14));

    CHECK(error_code_of([] { covariance_ellipse({0, 0}, Matrix{{1, 1}, {1, 1}}); }) ==
          ErrorCode::NotPositiveDefinite);
    CHECK(error_code_of([] { covariance_ellipse({0, 0}, Matrix::identity(2), 0.0); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("property: ellipse reconstruction recovers the covariance") {
    Rng rng(79);
    for (int trial = 0; trial < 1000; ++trial) {
        const Matrix cov = gda::testing::random_spd(rng, 2, 0.05);
        const auto e = covariance_ellipse({0, 0}, cov, rng.uniform(0.5, 3));
        CHECK(e.angle >= 0.0);
        CHECK(e.angle < std::numbers::pi);
        CHECK(e.semi_axes[0] >= e.semi_axes[1]);
        CHECK(e.semi_axes[1] > 0.0);
        CHECK(max_diff(rebuild(e), cov) <= 1e-9 * std::max(1.0, max_abs_entry(cov)));
    }
}

TEST_CASE("separability on raw features centers on the class means") {
    Rng rng(83);
    const GaussianSpec g0{{0, 0, 0}, Matrix::identity(3)};
    const GaussianSpec g1{{8, -6, 1}, Matrix::identity(3)};
    const Dataset d = gda::testing::sample_two_gaussians(rng, g0, g1, 100, 100);
    const GdaModel m = fit(d, ModelKind::Qda);
    const auto proj = separability_projection(d, m, FeaturePlane{"f0", "f1"});
    CHECK(proj.axis_names == std::array<std::string, 2>{"f0", "f1"});
    for (int k = 0; k < 2; ++k) {
        const auto& cp = proj.classes[std::size_t(k)];
        CHECK(cp.ellipse.center[0] == m.class_stats(k).mean[0]);
        CHECK(cp.ellipse.center[1] == m.class_stats(k).mean[1]);
        CHECK(cp.points.size() == 100);
        CHECK(cp.ellipse.scale == 2.0);
    }
    CHECK(error_code_of([&] { separability_projection(d, m, FeaturePlane{"f0", "zz"}); }) ==
          ErrorCode::UnknownColumn);
    CHECK(error_code_of([&] { separability_projection(d, m, FisherResidualPlane{}); }) ==
          ErrorCode::NotAnLdaModel);
}

TEST_CASE("identical classes give overlapping ellipses") {
    Rng rng(89);
    const GaussianSpec g{{1, 1}, Matrix{{2, 0.5}, {0.5, 1}}};
    const Dataset d = gda::testing::sample_two_gaussians(rng, g, g, 2000, 2000);
    const auto proj = separability_projection(d, fit(d, ModelKind::Qda), FeaturePlane{"f0", "f1"});
    const auto a = proj.classes[0].ellipse.center, b = proj.classes[1].ellipse.center;
    CHECK(std::hypot(a[0] - b[0], a[1] - b[1]) <= 0.15);
}

TEST_CASE("anisotropic classes: QDA ellipses track each class, LDA ellipses are congruent") {
    Rng rng(97);
    const GaussianSpec g0{{0, 0}, Matrix{{4, 1}, {1, 1}}};
    const GaussianSpec g1{{3, 3}, Matrix{{1, -0.3}, {-0.3, 2}}};
    const Dataset d = gda::testing::sample_two_gaussians(rng, g0, g1, 3000, 3000);

    const auto q = separability_projection(d, fit(d, ModelKind::Qda), FeaturePlane{"f0", "f1"}, 1.0);
    for (int k = 0; k < 2; ++k) {
        const auto truth = sym_eigen_2x2(k == 0 ? g0.cov : g1.cov);
        const auto& e = q.classes[std::size_t(k)].ellipse;
        for (int i = 0; i < 2; ++i) {
            const double expected = std::sqrt(truth.values[std::size_t(i)]);
            CHECK(std::abs(e.semi_axes[std::size_t(i)] - expected) <= 0.15 * expected);
        }
    }
    CHECK(std::abs(q.classes[0].ellipse.semi_axes[0] - q.classes[1].ellipse.semi_axes[0]) > 0.1);

    const GdaModel lda = fit(d, ModelKind::Lda);
    for (const ProjectionPlane& plane : {ProjectionPlane{FeaturePlane{"f0", "f1"}}, ProjectionPlane{FisherResidualPlane{}}}) {
        const auto l = separability_projection(d, lda, plane);
        CHECK(l.classes[0].ellipse.semi_axes == l.classes[1].ellipse.semi_axes);
        CHECK(l.classes[0].ellipse.angle == l.classes[1].ellipse.angle);
    }
}

TEST_CASE("fisher+residual axes are orthonormal") {
    Rng rng(101);
    const GaussianSpec g0{{0, 0, 0, 0}, gda::testing::random_spd(rng, 4)};
    const GaussianSpec g1{{1, 2, 0, -1}, g0.cov};
    const Dataset d = gda::testing::sample_two_gaussians(rng, g0, g1, 200, 200);
    const GdaModel m = fit(d, ModelKind::Lda);
    const auto proj = separability_projection(d, m, FisherResidualPlane{});
    CHECK(std::abs(norm(proj.axes[0]) - 1.0) <= 1e-12);
    CHECK(std::abs(norm(proj.axes[1]) - 1.0) <= 1e-12);
    CHECK(std::abs(dot(proj.axes[0], proj.axes[1])) <= 1e-10);
    const Vector w = fisher_direction(m);
    for (std::size_t i = 0; i < 4; ++i) CHECK(proj.axes[0][i] == w[i]);
}

}
