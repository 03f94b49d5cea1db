#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "gbsvr/kernel.hpp"
#include "gbsvr/rng.hpp"
#include "test_util.hpp"

using namespace gbsvr;

TEST_CASE("linear kernel is the dot product") {
    KernelSpec spec{KernelKind::linear};
    Vector a(2), b(2);
    a << 1, 2;
    b << 3, 4;
    CHECK(k_eval(spec, a, b) == doctest::Approx(11.0));
}

TEST_CASE("rbf kernel is 1 at zero distance") {
    KernelSpec spec{KernelKind::rbf, 0.37};
    Vector a(3);
    a << 1, -2, 0.5;
    CHECK(k_eval(spec, a, a) == doctest::Approx(1.0));
}

TEST_CASE("rbf kernel matches an independent scalar computation") {
    KernelSpec spec{KernelKind::rbf, 1.0};
    Vector a(1), b(1);
    a << 0.0;
    b << 2.0;
    const double direct = std::exp(-(2.0 * 2.0) / (2.0 * 1.0 * 1.0));
    CHECK(k_eval(spec, a, b) == doctest::Approx(direct).epsilon(1e-15));
    CHECK(k_eval(spec, a, b) == doctest::Approx(0.1353352832366127).epsilon(1e-12));
}

TEST_CASE("unsquared rbf form drops the square on the distance") {
    KernelSpec spec{KernelKind::rbf, 1.0, RbfForm::unsquared_norm};
    Vector a(1), b(1);
    a << 0.0;
    b << 2.0;
    CHECK(k_eval(spec, a, b) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("k_eval rejects mismatched lengths") {
    KernelSpec spec{KernelKind::linear};
    Vector a(2), b(3);
    a.setZero();
    b.setZero();
    CHECK_THROWS_AS(k_eval(spec, a, b), std::invalid_argument);
}

TEST_CASE("gram handles a single center") {
    KernelSpec spec{KernelKind::rbf, 0.5};
    Matrix centers(1, 2);
    centers << 0.3, -0.7;
    const Matrix g = gram(spec, centers);
    REQUIRE(g.rows() == 1);
    CHECK(g(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("gram of orthogonal unit vectors under the linear kernel") {
    KernelSpec spec{KernelKind::linear};
    Matrix centers(2, 2);
    centers << 1, 0, 0, 1;
    const Matrix g = gram(spec, centers);
    CHECK(g(0, 0) == doctest::Approx(1.0));
    CHECK(g(1, 1) == doctest::Approx(1.0));
    CHECK(g(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("gram matches element-wise recomputation and is exactly symmetric") {
    KernelSpec spec{KernelKind::rbf, 0.8};
    const Dataset d = test_util::random_dataset(20, 3, 5);
    const Matrix g = gram(spec, d.features);
    for (Index i = 0; i < g.rows(); ++i) {
        for (Index j = 0; j < g.cols(); ++j) {
            CHECK(g(i, j) ==
                  doctest::Approx(k_eval(spec, d.features.row(i), d.features.row(j)))
                      .epsilon(1e-12));
            CHECK(g(i, j) == g(j, i)); // bitwise, mirrored at construction
            CHECK(g(i, j) > 0.0);
            CHECK(g(i, j) <= 1.0);
        }
    }
}

TEST_CASE("rbf gram is positive semidefinite within tolerance") {
    KernelSpec spec{KernelKind::rbf, 0.6};
    const Dataset d = test_util::random_dataset(40, 2, 8);
    const Matrix g = gram(spec, d.features);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("linear gram reproduces explicit norms of weighted center sums") {
    KernelSpec spec{KernelKind::linear};
    const Dataset d = test_util::random_dataset(12, 3, 3);
    const Matrix g = gram(spec, d.features);
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        Vector beta(12);
        for (Index i = 0; i < beta.size(); ++i) beta[i] = rng.next_uniform(-1, 1);
        const double via_gram = beta.dot(g * beta);
        const double explicit_norm = (d.features.transpose() * beta).squaredNorm();
        CHECK(via_gram == doctest::Approx(explicit_norm).epsilon(1e-9));
    }
}
