#include "gbsvr/eval.hpp"

#include "gbsvr/datagen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "gbsvr/rng.hpp"

namespace gbsvr {

MetricsReport metrics(const Vector& y_true, const Vector& y_pred) {
    if (y_true.size() != y_pred.size() || y_true.size() == 0) {
        throw std::invalid_argument("metrics: length mismatch or empty input");
    }
    const double mean = y_true.mean();
    const double ss_tot = (y_true.array() - mean).square().sum();
    if (ss_tot <= 0.0) {
        throw std::invalid_argument("metrics: constant y_true leaves R^2 undefined");
    }
    const Vector err = y_true - y_pred;
    MetricsReport r;
    r.mse = err.squaredNorm() / static_cast<double>(err.size());
    r.mae = err.array().abs().mean();
    r.rmse = std::sqrt(r.mse);
    r.r2 = 1.0 - err.squaredNorm() / ss_tot;
    return r;
}

std::string method_name(Method m) { return m == Method::gbsvr ? "gbsvr" : "svr"; }

namespace {

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
    }
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::uint64_t checksum_bytes(const Vector& v) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    const auto* bytes = reinterpret_cast<const unsigned char*>(v.data());
    for (Index i = 0; i < v.size() * static_cast<Index>(sizeof(double)); ++i) {
        h = (h ^ bytes[i]) * 0x100000001b3ULL;
    }
    return h;
}

std::vector<ChosenParams> expand_grid(const HyperGrid& grid, Method method) {
    std::vector<ChosenParams> points;
    const bool rbf = grid.kernel.kind == KernelKind::rbf;
    const std::vector<double> sigmas = rbf ? grid.sigmas : std::vector<double>{0.0};
    const bool granular = method == Method::gbsvr;
    const std::vector<double> purities =
        granular ? grid.purities : std::vector<double>{0.0};
    const std::vector<int> min_points = granular ? grid.min_points : std::vector<int>{0};
    for (double eps : grid.epsilons) {
        for (double c : grid.c_values) {
            for (double sigma : sigmas) {
                for (double purity : purities) {
                    for (int p : min_points) {
                        points.push_back({eps, c, sigma, purity, p});
                    }
                }
            }
        }
    }
    return points;
}

GbsvrConfig make_gbsvr_config(const HyperGrid& grid, const ChosenParams& point,
                              const BenchConfig& cfg, std::uint64_t seed) {
    GbsvrConfig out;
    out.granulation.purity_threshold = point.purity;
    out.granulation.min_points = point.min_points;
    out.granulation.label_count = grid.label_count;
    out.granulation.seed = seed;
    out.kernel = grid.kernel;
    out.kernel.sigma = point.sigma > 0.0 ? point.sigma : grid.kernel.sigma;
    out.epsilon = point.epsilon;
    out.C = point.C;
    out.solver = cfg.solver;
    return out;
}

SvrConfig make_svr_config(const HyperGrid& grid, const ChosenParams& point,
                          const BenchConfig& cfg, std::uint64_t seed) {
    SvrConfig out;
    out.epsilon = point.epsilon;
    out.C = point.C;
    out.kernel = grid.kernel;
    out.kernel.sigma = point.sigma > 0.0 ? point.sigma : grid.kernel.sigma;
    out.kkt_tol = cfg.svr_kkt_tol;
    out.max_updates = cfg.svr_max_updates;
    out.seed = seed;
    return out;
}

// Inner-holdout R^2 of one grid point; -inf when the fit or the metric fails
// so the point simply loses the ranking.
template <typename FitScore>
std::size_t rank_grid(const std::vector<ChosenParams>& points, FitScore&& score) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < points.size(); ++g) {
        double s;
        try {
            s = score(points[g]);
        } catch (const std::exception&) {
            s = -std::numeric_limits<double>::infinity();
        }
        if (s > best_score) {
            best_score = s;
            best = g;
        }
    }
    return best;
}

} // namespace

TunedGbsvr tune_gbsvr(const Dataset& train, const HyperGrid& grid,
                      const BenchConfig& cfg, std::uint64_t salt) {
    const auto points = expand_grid(grid, Method::gbsvr);
    ChosenParams chosen = points.front();
    if (points.size() > 1) {
        auto [inner_train, inner_val] = train_test_split(
            train, 1.0 - cfg.inner_holdout, /*shuffle=*/true, mix_seed(cfg.seed, salt));
        const std::size_t best = rank_grid(points, [&](const ChosenParams& p) {
            GbsvrConfig fit_cfg =
                make_gbsvr_config(grid, p, cfg, mix_seed(cfg.seed, salt + 1));
            const GbsvrModel m = fit(inner_train, fit_cfg);
            const Vector pred =
                m.predict(inner_val.features, PredictionScale::standardized);
            const Vector truth =
                m.standardization.transform_targets(inner_val.targets);
            return metrics(truth, pred).r2;
        });
        chosen = points[best];
    }
    GbsvrConfig fit_cfg =
        make_gbsvr_config(grid, chosen, cfg, mix_seed(cfg.seed, salt + 1));
    return {fit(train, fit_cfg), chosen};
}

TunedSvr tune_svr(const Dataset& train, const HyperGrid& grid, const BenchConfig& cfg,
                  std::uint64_t salt) {
    const auto points = expand_grid(grid, Method::svr);
    ChosenParams chosen = points.front();
    if (points.size() > 1) {
        auto [inner_train, inner_val] = train_test_split(
            train, 1.0 - cfg.inner_holdout, /*shuffle=*/true, mix_seed(cfg.seed, salt));
        const std::size_t best = rank_grid(points, [&](const ChosenParams& p) {
            SvrConfig fit_cfg =
                make_svr_config(grid, p, cfg, mix_seed(cfg.seed, salt + 2));
            const SvrModel m = svr_fit(inner_train, fit_cfg);
            const Vector pred = m.predict_standardized(inner_val.features);
            const Vector truth =
                m.standardization.transform_targets(inner_val.targets);
            return metrics(truth, pred).r2;
        });
        chosen = points[best];
    }
    SvrConfig fit_cfg = make_svr_config(grid, chosen, cfg, mix_seed(cfg.seed, salt + 2));
    return {svr_fit(train, fit_cfg), chosen};
}

MetricsAggregate aggregate_mean(const std::vector<MetricsReport>& reports) {
    MetricsAggregate a;
    const auto n = static_cast<double>(reports.size());
    for (const auto& r : reports) {
        a.r2 += r.r2 / n;
        a.mae += r.mae / n;
        a.mse += r.mse / n;
        a.rmse += r.rmse / n;
        a.train_seconds += r.train_seconds / n;
        a.ball_count += r.ball_count / n;
    }
    return a;
}

MetricsAggregate aggregate_std(const std::vector<MetricsReport>& reports) {
    const MetricsAggregate mean = aggregate_mean(reports);
    MetricsAggregate a;
    const auto n = static_cast<double>(reports.size());
    for (const auto& r : reports) {
        a.r2 += (r.r2 - mean.r2) * (r.r2 - mean.r2) / n;
        a.mae += (r.mae - mean.mae) * (r.mae - mean.mae) / n;
        a.mse += (r.mse - mean.mse) * (r.mse - mean.mse) / n;
        a.rmse += (r.rmse - mean.rmse) * (r.rmse - mean.rmse) / n;
        a.train_seconds +=
            (r.train_seconds - mean.train_seconds) * (r.train_seconds - mean.train_seconds) / n;
        a.ball_count += (r.ball_count - mean.ball_count) * (r.ball_count - mean.ball_count) / n;
    }
    a.r2 = std::sqrt(a.r2);
    a.mae = std::sqrt(a.mae);
    a.mse = std::sqrt(a.mse);
    a.rmse = std::sqrt(a.rmse);
    a.train_seconds = std::sqrt(a.train_seconds);
    a.ball_count = std::sqrt(a.ball_count);
    return a;
}

std::vector<BenchResult> crossval_bench(const Dataset& d,
                                        const std::vector<Method>& methods,
                                        const HyperGrid& grid, const BenchConfig& cfg) {
    validate(d);
    if (cfg.folds < 2) throw std::invalid_argument("crossval_bench: folds must be >= 2");
    const FoldPlan plan = kfold(d, cfg.folds, mix_seed(cfg.seed, 17));

    std::vector<BenchResult> results;
    for (std::size_t nf = 0; nf < cfg.noise_fractions.size(); ++nf) {
        for (Method method : methods) {
            BenchResult r;
            r.method = method;
            r.noise_fraction = cfg.noise_fractions[nf];
            r.per_fold.resize(static_cast<std::size_t>(cfg.folds));
            r.fold_target_checksums.resize(static_cast<std::size_t>(cfg.folds));
            r.fold_params.resize(static_cast<std::size_t>(cfg.folds));

            parallel_for(cfg.folds, cfg.threads, [&](int f) {
                const Dataset train = subset(d, plan.complement(f));
                const Dataset test = subset(d, plan.fold(f));
                // Noise goes into the training folds only, with a seed shared
                // by both methods so they face identical corruption.
                const std::uint64_t noise_seed =
                    mix_seed(cfg.seed, 1000 + nf * 97 + static_cast<std::uint64_t>(f));
                const Dataset train_noisy = inject_target_noise(
                    train, r.noise_fraction, cfg.noise_sigma, noise_seed);
                const std::uint64_t salt =
                    5000 + nf * 211 + static_cast<std::uint64_t>(f) * 7;

                MetricsReport report;
                if (method == Method::gbsvr) {
                    TunedGbsvr tuned = tune_gbsvr(train_noisy, grid, cfg, salt);
                    const auto scale = cfg.metrics_scale;
                    const Vector pred = tuned.model.predict(test.features, scale);
                    const Vector truth =
                        scale == PredictionScale::standardized
                            ? Vector(tuned.model.standardization.transform_targets(
                                  test.targets))
                            : test.targets;
                    report = metrics(truth, pred);
                    report.train_seconds = tuned.model.train_seconds();
                    report.ball_count = static_cast<int>(tuned.model.ball_set.size());
                    r.fold_params[static_cast<std::size_t>(f)] = tuned.params;
                } else {
                    TunedSvr tuned = tune_svr(train_noisy, grid, cfg, salt);
                    const auto scale = cfg.metrics_scale;
                    const Vector pred =
                        scale == PredictionScale::standardized
                            ? tuned.model.predict_standardized(test.features)
                            : tuned.model.predict(test.features);
                    const Vector truth =
                        scale == PredictionScale::standardized
                            ? Vector(tuned.model.standardization.transform_targets(
                                  test.targets))
                            : test.targets;
                    report = metrics(truth, pred);
                    report.train_seconds = tuned.model.solve_seconds;
                    r.fold_params[static_cast<std::size_t>(f)] = tuned.params;
                }
                r.per_fold[static_cast<std::size_t>(f)] = report;
                r.fold_target_checksums[static_cast<std::size_t>(f)] =
                    checksum_bytes(test.targets);
            });

            r.mean = aggregate_mean(r.per_fold);
            r.stddev = aggregate_std(r.per_fold);
            results.push_back(std::move(r));
        }
    }
    return results;
}

std::vector<AblationRow> ablation_sweep(const Dataset& d, AblationAxis axis,
                                        const std::vector<double>& values,
                                        const HyperGrid& base, const BenchConfig& cfg) {
    std::vector<AblationRow> rows;
    for (double v : values) {
        HyperGrid grid = base;
        if (axis == AblationAxis::purity) {
            grid.purities = {v};
        } else {
            grid.min_points = {static_cast<int>(std::llround(v))};
        }
        BenchConfig run_cfg = cfg;
        run_cfg.noise_fractions = {0.0};
        const auto results = crossval_bench(d, {Method::gbsvr}, grid, run_cfg);
        rows.push_back({v, results.front().mean.r2, results.front().mean.mae});
    }
    return rows;
}

void write_summary_csv(const std::vector<BenchResult>& results,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << "method,noise_fraction,r2_mean,r2_std,mae_mean,mae_std,mse_mean,mse_std,"
           "rmse_mean,rmse_std,train_seconds_mean,train_seconds_std,ball_count_mean\n";
    char buf[64];
    const auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        out << buf << sep;
    };
    for (const auto& r : results) {
        out << method_name(r.method) << ',';
        put(r.noise_fraction, ',');
        put(r.mean.r2, ',');
        put(r.stddev.r2, ',');
        put(r.mean.mae, ',');
        put(r.stddev.mae, ',');
        put(r.mean.mse, ',');
        put(r.stddev.mse, ',');
        put(r.mean.rmse, ',');
        put(r.stddev.rmse, ',');
        put(r.mean.train_seconds, ',');
        put(r.stddev.train_seconds, ',');
        put(r.mean.ball_count, '\n');
    }
}

} // namespace gbsvr
