#include "gbsvr/kernel.hpp"

namespace gbsvr {

void validate(const KernelSpec& spec) {
    if (spec.kind == KernelKind::rbf && !(spec.sigma > 0.0)) {
        throw std::invalid_argument("rbf kernel requires sigma > 0");
    }
}

Matrix gram(const KernelSpec& spec, const Matrix& points) {
    validate(spec);
    const Index n = points.rows();
    Matrix g(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i; j < n; ++j) {
            const double v = k_eval(spec, points.row(i), points.row(j));
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

Vector kernel_column(const KernelSpec& spec, const Matrix& points, const Vector& x) {
    Vector col(points.rows());
    for (Index i = 0; i < points.rows(); ++i) {
        col[i] = k_eval(spec, points.row(i).transpose(), x);
    }
    return col;
}

} // namespace gbsvr
