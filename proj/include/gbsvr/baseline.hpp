#pragma once

#include <cstdint>
#include <vector>

#include "gbsvr/dataset.hpp"
#include "gbsvr/kernel.hpp"
#include "gbsvr/types.hpp"

namespace gbsvr {

/// Epsilon-insensitive SVR trained by pairwise coordinate (SMO) updates on
/// the classical dual. Serves as the accuracy/robustness/timing baseline.
struct SvrConfig {
    double epsilon = 0.1;
    double C = 1.0;
    KernelSpec kernel;
    double kkt_tol = 1e-3;
    long max_updates = 100000;
    std::uint64_t seed = 0;
    bool collect_trace = false;
};

struct SvrModel {
    Matrix inputs; // standardized training inputs, one row per sample
    Vector beta;   // alpha - alpha_star per sample, in [-C, C]
    double bias = 0.0;
    KernelSpec kernel;
    Standardization standardization;
    double C = 0.0;
    double epsilon = 0.0;

    double solve_seconds = 0.0; // gram + SMO, excludes data handling
    long updates = 0;
    double kkt_violation = 0.0;
    std::vector<double> objective_trace; // dual objective after each update

    double predict(const Vector& x) const; // original scale
    double predict_standardized(const Vector& x) const;
    Vector predict(const Matrix& x) const;
    Vector predict_standardized(const Matrix& x) const;
};

SvrModel svr_fit(const Dataset& train, const SvrConfig& cfg);

} // namespace gbsvr
