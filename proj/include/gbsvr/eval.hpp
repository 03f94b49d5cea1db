#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gbsvr/baseline.hpp"
#include "gbsvr/dataset.hpp"
#include "gbsvr/model.hpp"
#include "gbsvr/types.hpp"

namespace gbsvr {

struct MetricsReport {
    double r2 = 0.0;
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double train_seconds = 0.0;
    int ball_count = 0; // 0 for the point-based baseline
};

/// R^2, MAE, MSE, RMSE. Throws on length mismatch or constant y_true
/// (undefined R^2).
MetricsReport metrics(const Vector& y_true, const Vector& y_pred);

enum class Method { gbsvr, svr };
std::string method_name(Method m);

/// Hyperparameter grid; the cross product of the applicable axes is searched.
/// sigma applies to the rbf kernel, purity/min_points to gbsvr only.
struct HyperGrid {
    std::vector<double> epsilons{1e-2};
    std::vector<double> c_values{10.0};
    std::vector<double> sigmas{0.5};
    std::vector<double> purities{0.99};
    std::vector<int> min_points{2};
    int label_count = 10;
    KernelSpec kernel; // kind and rbf form; sigma is filled per grid point
};

/// One selected grid point.
struct ChosenParams {
    double epsilon = 0.0;
    double C = 0.0;
    double sigma = 0.0;
    double purity = 0.0;
    int min_points = 0;
};

struct BenchConfig {
    int folds = 5;
    std::vector<double> noise_fractions{0.0};
    double noise_sigma = 0.2;
    std::uint64_t seed = 0;
    PredictionScale metrics_scale = PredictionScale::standardized;
    SolverConfig solver;
    double svr_kkt_tol = 1e-3;
    long svr_max_updates = 100000;
    double inner_holdout = 0.25; // fraction of the training fold used to rank grid points
    int threads = 0;             // 0 = hardware concurrency
};

struct MetricsAggregate {
    double r2 = 0.0, mae = 0.0, mse = 0.0, rmse = 0.0;
    double train_seconds = 0.0, ball_count = 0.0;
};

struct BenchResult {
    Method method = Method::gbsvr;
    double noise_fraction = 0.0;
    std::vector<MetricsReport> per_fold;
    MetricsAggregate mean;
    MetricsAggregate stddev; // population
    std::vector<std::uint64_t> fold_target_checksums; // test targets per fold
    std::vector<ChosenParams> fold_params;
};

MetricsAggregate aggregate_mean(const std::vector<MetricsReport>& reports);
MetricsAggregate aggregate_std(const std::vector<MetricsReport>& reports);

/// k-fold benchmark with per-fraction training-target noise injection (test
/// folds are never injected) and per-fold grid search ranked on an inner
/// holdout. Deterministic for a given seed; folds run in parallel.
std::vector<BenchResult> crossval_bench(const Dataset& d,
                                        const std::vector<Method>& methods,
                                        const HyperGrid& grid, const BenchConfig& cfg);

/// Grid search on `train` via an inner holdout, then a refit on all of
/// `train` with the winning parameters.
struct TunedGbsvr {
    GbsvrModel model;
    ChosenParams params;
};
TunedGbsvr tune_gbsvr(const Dataset& train, const HyperGrid& grid,
                      const BenchConfig& cfg, std::uint64_t salt = 0);

struct TunedSvr {
    SvrModel model;
    ChosenParams params;
};
TunedSvr tune_svr(const Dataset& train, const HyperGrid& grid, const BenchConfig& cfg,
                  std::uint64_t salt = 0);

enum class AblationAxis { purity, min_points };

struct AblationRow {
    double value = 0.0;
    double mean_r2 = 0.0;
    double mean_mae = 0.0;
};

/// Cross-validated sweep along one granulation axis with everything else
/// pinned to the base grid's single values.
std::vector<AblationRow> ablation_sweep(const Dataset& d, AblationAxis axis,
                                        const std::vector<double>& values,
                                        const HyperGrid& base, const BenchConfig& cfg);

/// One row per BenchResult: method, noise fraction, mean/std per metric.
void write_summary_csv(const std::vector<BenchResult>& results,
                       const std::string& path);

} // namespace gbsvr
