#pragma once

#include <cmath>

#include "gbsvr/types.hpp"

namespace gbsvr {

enum class KernelKind { linear, rbf };

/// The Gaussian form exp(-|a-b|^2 / (2 sigma^2)) is the default; the
/// unsquared-norm variant exp(-|a-b| / (2 sigma^2)) is available as a switch.
enum class RbfForm { squared_norm, unsquared_norm };

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double sigma = 0.5; // rbf width
    RbfForm rbf_form = RbfForm::squared_norm;
};

void validate(const KernelSpec& spec);

/// Inner-product rule between two points under the given kernel.
template <typename DerivedA, typename DerivedB>
double k_eval(const KernelSpec& spec, const Eigen::MatrixBase<DerivedA>& a,
              const Eigen::MatrixBase<DerivedB>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("k_eval: vector length mismatch");
    }
    if (spec.kind == KernelKind::linear) {
        return a.dot(b);
    }
    const double d2 = (a - b).squaredNorm();
    const double exponent = spec.rbf_form == RbfForm::squared_norm ? d2 : std::sqrt(d2);
    return std::exp(-exponent / (2.0 * spec.sigma * spec.sigma));
}

/// Pairwise kernel matrix over the rows of `points`; computed once per pair
/// and mirrored, so it is exactly symmetric.
Matrix gram(const KernelSpec& spec, const Matrix& points);

/// k(points.row(i), x) for all i; the prediction column.
Vector kernel_column(const KernelSpec& spec, const Matrix& points, const Vector& x);

} // namespace gbsvr
