#pragma once

#include <string>

#include "gbsvr/dataset.hpp"
#include "gbsvr/granulation.hpp"
#include "gbsvr/kernel.hpp"
#include "gbsvr/solver.hpp"
#include "gbsvr/types.hpp"

namespace gbsvr {

struct GbsvrConfig {
    GranulationConfig granulation;
    KernelSpec kernel;
    double epsilon = 1e-2;
    double C = 10.0;
    SolverConfig solver;
};

enum class PredictionScale { original, standardized };

/// Fitted granular-ball regressor: the ball summary of the training set plus
/// the dual solution and recovered weights over ball centers. Immutable after
/// fit; predict is pure.
struct GbsvrModel {
    BallSet ball_set;
    KernelSpec kernel;
    WeightRepr weights;
    DualSolution duals;
    Standardization standardization;
    GbsvrConfig train_config;
    double granulation_seconds = 0.0;
    double solve_seconds = 0.0; // gram + dual solve + weight recovery

    double train_seconds() const { return granulation_seconds + solve_seconds; }

    double predict(const Vector& x,
                   PredictionScale scale = PredictionScale::original) const;
    Vector predict(const Matrix& x,
                   PredictionScale scale = PredictionScale::original) const;
};

/// standardize -> granulate -> gram over centers -> dual solve -> weights.
GbsvrModel fit(const Dataset& train, const GbsvrConfig& cfg);

/// Plain-text serialization with 17-significant-digit reals, so a
/// save/load/save round trip is byte-identical.
void save_model(const GbsvrModel& model, const std::string& path);
GbsvrModel load_model(const std::string& path);

} // namespace gbsvr
