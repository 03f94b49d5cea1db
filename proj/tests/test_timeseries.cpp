#include <doctest.h>

#include "gbsvr/timeseries.hpp"
#include "test_util.hpp"

using namespace gbsvr;

TEST_CASE("windowize lays out lagged rows with the stated target") {
    Vector series(6);
    series << 1, 2, 3, 4, 5, 6;
    const Dataset d = windowize(series, {4, 1});
    REQUIRE(d.rows() == 2);
    CHECK(d.features.row(0)[0] == doctest::Approx(1));
    CHECK(d.features.row(0)[3] == doctest::Approx(4));
    CHECK(d.targets[0] == doctest::Approx(5));
    CHECK(d.features.row(1)[0] == doctest::Approx(2));
    CHECK(d.targets[1] == doctest::Approx(6));
}

TEST_CASE("a horizon past the next step skips ahead") {
    Vector series(6);
    series << 1, 2, 3, 4, 5, 6;
    const Dataset d = windowize(series, {4, 2});
    REQUIRE(d.rows() == 1);
    CHECK(d.targets[0] == doctest::Approx(6));
}

TEST_CASE("the minimal window produces a single row") {
    Vector series(2);
    series << 3.0, 9.0;
    const Dataset d = windowize(series, {1, 1});
    REQUIRE(d.rows() == 1);
    CHECK(d.features(0, 0) == doctest::Approx(3.0));
    CHECK(d.targets[0] == doctest::Approx(9.0));
}

TEST_CASE("windowize rejects series shorter than window plus horizon") {
    Vector series(4);
    series << 1, 2, 3, 4;
    CHECK_THROWS_WITH_AS(windowize(series, {4, 1}), doctest::Contains("too short"),
                         DataError);
}

TEST_CASE("the original series is recoverable from the first row plus targets") {
    Vector series(30);
    for (Index i = 0; i < 30; ++i) series[i] = std::sin(0.3 * i) + 0.01 * i;
    const WindowSpec spec{5, 1};
    const Dataset d = windowize(series, spec);

    Vector rebuilt(series.size());
    for (int j = 0; j < spec.window; ++j) rebuilt[j] = d.features(0, j);
    for (Index t = 0; t < d.rows(); ++t) rebuilt[spec.window + t] = d.targets[t];
    CHECK((rebuilt - series).lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
}

TEST_CASE("chrono_split keeps training strictly before test") {
    Vector series(20);
    for (Index i = 0; i < 20; ++i) series[i] = static_cast<double>(i);
    const Dataset d = windowize(series, {4, 1});

    auto [train30, test30] = chrono_split(d, 0.3);
    CHECK(train30.rows() == 4); // floor(0.3 * 15)
    CHECK(train30.targets.maxCoeff() < test30.targets.minCoeff());

    auto [train80, test80] = chrono_split(d, 0.8);
    CHECK(train80.rows() == 12);
}

TEST_CASE("chrono_split of ten rows at the stated fractions") {
    Vector series(14);
    for (Index i = 0; i < 14; ++i) series[i] = static_cast<double>(i);
    const Dataset d = windowize(series, {3, 1});
    REQUIRE(d.rows() == 11);

    auto [train, test] = chrono_split(d, 0.3);
    CHECK(train.rows() == 3);
    CHECK(test.rows() == 8);
}

TEST_CASE("chrono_split rejects a full-train fraction") {
    Vector series(10);
    series.setLinSpaced(10, 0, 9);
    const Dataset d = windowize(series, {2, 1});
    CHECK_THROWS_AS(chrono_split(d, 1.0), std::invalid_argument);
}

TEST_CASE("load_series_csv reads one value per line") {
    test_util::TempFile file("value\n1.5\n-2.25\n3\n");
    const Vector v = load_series_csv(file.path(), true);
    REQUIRE(v.size() == 3);
    CHECK(v[1] == doctest::Approx(-2.25));
    CHECK_THROWS_AS(load_series_csv(file.path(), false), DataError);
}
