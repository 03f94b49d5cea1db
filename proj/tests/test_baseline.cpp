#include <doctest.h>

#include "gbsvr/baseline.hpp"
#include "gbsvr/rng.hpp"
#include "test_util.hpp"

using namespace gbsvr;

namespace {

Dataset two_point_line() {
    Dataset d;
    d.features.resize(2, 1);
    d.features << -1.0, 1.0;
    d.targets.resize(2);
    d.targets << -1.0, 1.0;
    return d;
}

SvrConfig linear_config(double epsilon, double C) {
    SvrConfig cfg;
    cfg.epsilon = epsilon;
    cfg.C = C;
    cfg.kernel.kind = KernelKind::linear;
    return cfg;
}

} // namespace

TEST_CASE("two symmetric points give the shrunk-slope tube fit") {
    const SvrModel m = svr_fit(two_point_line(), linear_config(0.1, 1.0));
    Vector x(1);
    x << 1.0;
    CHECK(m.predict(x) == doctest::Approx(0.9).epsilon(1e-6));
    x << 0.0;
    CHECK(m.predict(x) == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    x << -1.0;
    CHECK(m.predict(x) == doctest::Approx(-0.9).epsilon(1e-6));
}

TEST_CASE("constant targets produce the flat model") {
    Dataset d;
    d.features.resize(3, 1);
    d.features << 0, 1, 2;
    d.targets.resize(3);
    d.targets << 4.0, 4.0, 4.0;
    const SvrModel m = svr_fit(d, linear_config(0.1, 1.0));
    Vector x(1);
    x << 0.7;
    CHECK(m.predict(x) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(m.beta.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
}

TEST_CASE("a tube wider than the target spread leaves every coefficient zero") {
    const Dataset d = test_util::random_dataset(15, 2, 4);
    SvrConfig cfg = linear_config(10.0, 1.0); // standardized spread is ~2
    const SvrModel m = svr_fit(d, cfg);
    CHECK(m.beta.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
    Vector x = d.features.row(3).transpose();
    CHECK(m.predict(x) == doctest::Approx(d.targets.mean()).epsilon(1e-9));
}

TEST_CASE("the dual stays feasible at termination") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Dataset d = test_util::random_dataset(30, 2, 60 + seed);
        SvrConfig cfg = linear_config(0.05, 2.0);
        cfg.kernel.kind = KernelKind::rbf;
        cfg.kernel.sigma = 0.8;
        cfg.seed = seed;
        const SvrModel m = svr_fit(d, cfg);
        CHECK(m.beta.maxCoeff() <= cfg.C + 1e-12);
        CHECK(m.beta.minCoeff() >= -cfg.C - 1e-12);
        CHECK(std::abs(m.beta.sum()) <= 1e-6 * d.rows() * cfg.C);
    }
}

TEST_CASE("the objective never decreases across accepted pair updates") {
    const Dataset d = test_util::random_dataset(40, 2, 11);
    SvrConfig cfg = linear_config(0.01, 5.0);
    cfg.kernel.kind = KernelKind::rbf;
    cfg.kernel.sigma = 0.6;
    cfg.collect_trace = true;
    const SvrModel m = svr_fit(d, cfg);
    REQUIRE(m.objective_trace.size() >= 2);
    for (std::size_t i = 1; i < m.objective_trace.size(); ++i) {
        CHECK(m.objective_trace[i] >= m.objective_trace[i - 1] - 1e-12);
    }
}

TEST_CASE("same seed reproduces the same model") {
    const Dataset d = test_util::random_dataset(25, 2, 19);
    SvrConfig cfg = linear_config(0.05, 1.0);
    cfg.seed = 123;
    const SvrModel a = svr_fit(d, cfg);
    const SvrModel b = svr_fit(d, cfg);
    CHECK(a.beta == b.beta);
    CHECK(a.bias == b.bias);
}

TEST_CASE("linear-kernel prediction agrees with the explicit weight vector") {
    const Dataset d = test_util::random_dataset(20, 3, 23);
    SvrConfig cfg = linear_config(0.05, 2.0);
    cfg.kkt_tol = 1e-5;
    const SvrModel m = svr_fit(d, cfg);
    const Vector w = m.inputs.transpose() * m.beta; // explicit primal weights
    for (int i = 0; i < 5; ++i) {
        const Vector x = d.features.row(i).transpose();
        const Vector x_std =
            m.standardization.transform_features(x.transpose()).row(0).transpose();
        const double direct = w.dot(x_std) + m.bias;
        CHECK(m.predict_standardized(x) == doctest::Approx(direct).epsilon(1e-8));
    }
}
