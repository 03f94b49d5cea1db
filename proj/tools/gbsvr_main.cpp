// Command-line surface for the granular-ball SVR toolkit: synthetic data
// generation, granulation inspection, training, prediction, benchmarking,
// ablation sweeps and sliding-window dataset construction.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbsvr/datagen.hpp"
#include "gbsvr/eval.hpp"
#include "gbsvr/model.hpp"
#include "gbsvr/timeseries.hpp"

namespace {

using nlohmann::json;
constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitDataError = 3;
constexpr int kExitNumericError = 4;

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string kernel = "rbf";
    std::string rbf_form = "squared";
    std::vector<double> sigmas{0.5};
    std::vector<double> epsilons{1e-2};
    std::vector<double> c_values{10.0};
    std::vector<double> purities{0.99};
    std::vector<int> min_points{2};
    int labels = 10;
    int folds = 5;
    std::vector<double> noise_fractions{0.0};
    std::string metrics_scale = "standardized";
    std::string out_dir = ".";
    int threads = 0;
};

gbsvr::KernelSpec kernel_from(const GlobalOptions& opt) {
    gbsvr::KernelSpec spec;
    spec.kind = opt.kernel == "linear" ? gbsvr::KernelKind::linear
                                       : gbsvr::KernelKind::rbf;
    spec.sigma = opt.sigmas.front();
    spec.rbf_form = opt.rbf_form == "unsquared" ? gbsvr::RbfForm::unsquared_norm
                                                : gbsvr::RbfForm::squared_norm;
    return spec;
}

gbsvr::HyperGrid grid_from(const GlobalOptions& opt) {
    gbsvr::HyperGrid grid;
    grid.epsilons = opt.epsilons;
    grid.c_values = opt.c_values;
    grid.sigmas = opt.sigmas;
    grid.purities = opt.purities;
    grid.min_points = opt.min_points;
    grid.label_count = opt.labels;
    grid.kernel = kernel_from(opt);
    return grid;
}

gbsvr::PredictionScale scale_from(const GlobalOptions& opt) {
    return opt.metrics_scale == "original" ? gbsvr::PredictionScale::original
                                           : gbsvr::PredictionScale::standardized;
}

std::string out_path(const GlobalOptions& opt, const std::string& name) {
    std::filesystem::create_directories(opt.out_dir);
    return (std::filesystem::path(opt.out_dir) / name).string();
}

gbsvr::SyntheticFamily family_from(const std::string& name) {
    if (name == "A" || name == "a" || name == "sinc") {
        return gbsvr::SyntheticFamily::sinc_a;
    }
    if (name == "B" || name == "b" || name == "cos") {
        return gbsvr::SyntheticFamily::cosine_b;
    }
    throw CLI::ValidationError("--family", "expected A or B");
}

json grid_json(const gbsvr::HyperGrid& grid) {
    return json{{"epsilons", grid.epsilons},
                {"c_values", grid.c_values},
                {"sigmas", grid.sigmas},
                {"purities", grid.purities},
                {"min_points", grid.min_points},
                {"label_count", grid.label_count},
                {"kernel", grid.kernel.kind == gbsvr::KernelKind::linear ? "linear" : "rbf"},
                {"rbf_form", grid.kernel.rbf_form == gbsvr::RbfForm::squared_norm
                                 ? "squared"
                                 : "unsquared"}};
}

void write_run_json(const GlobalOptions& opt, const std::string& command,
                    const json& extra, const std::string& path) {
    json doc{{"tool", "gbsvr"},
             {"version", kVersion},
             {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                           std::to_string(EIGEN_MAJOR_VERSION) + "." +
                           std::to_string(EIGEN_MINOR_VERSION)},
             {"command", command},
             {"seed", opt.seed},
             {"folds", opt.folds},
             {"noise_fractions", opt.noise_fractions},
             {"metrics_scale", opt.metrics_scale},
             {"grid", grid_json(grid_from(opt))}};
    doc.update(extra);
    std::ofstream out(path);
    out << doc.dump(2) << '\n';
}

void print_bench_table(const std::vector<gbsvr::BenchResult>& results) {
    std::printf("%-8s %-7s %22s %22s %22s %12s %8s\n", "method", "noise",
                "R2 (mean+/-std)", "MAE (mean+/-std)", "RMSE (mean+/-std)",
                "train[s]", "balls");
    for (const auto& r : results) {
        char r2[32], mae[32], rmse[32];
        std::snprintf(r2, sizeof(r2), "%.4f+/-%.4f", r.mean.r2, r.stddev.r2);
        std::snprintf(mae, sizeof(mae), "%.4f+/-%.4f", r.mean.mae, r.stddev.mae);
        std::snprintf(rmse, sizeof(rmse), "%.4f+/-%.4f", r.mean.rmse, r.stddev.rmse);
        std::printf("%-8s %-7.3g %22s %22s %22s %12.3f %8.1f\n",
                    gbsvr::method_name(r.method).c_str(), r.noise_fraction, r2, mae,
                    rmse, r.mean.train_seconds, r.mean.ball_count);
    }
}

void write_predictions_csv(const std::string& path, const gbsvr::Vector& predictions) {
    std::ofstream out(path);
    if (!out) throw gbsvr::DataError("cannot write file: " + path);
    out << "prediction\n";
    char buf[64];
    for (gbsvr::Index i = 0; i < predictions.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g", predictions[i]);
        out << buf << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Granular-ball support vector regression toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opt;
    app.add_option("--seed", opt.seed, "Base seed for all randomized steps");
    app.add_option("--kernel", opt.kernel, "Kernel: linear or rbf")
        ->check(CLI::IsMember({"linear", "rbf"}));
    app.add_option("--rbf-form", opt.rbf_form,
                   "RBF exponent form: squared (default) or unsquared")
        ->check(CLI::IsMember({"squared", "unsquared"}));
    app.add_option("--sigma", opt.sigmas, "RBF width(s)")->delimiter(',');
    app.add_option("--epsilon", opt.epsilons, "Tube half-width(s)")->delimiter(',');
    app.add_option("--C", opt.c_values, "Penalty value(s)")->delimiter(',');
    app.add_option("--purity", opt.purities, "Ball purity threshold(s)")
        ->delimiter(',');
    app.add_option("--min-points", opt.min_points, "Minimum ball cardinality value(s)")
        ->delimiter(',');
    app.add_option("--labels", opt.labels, "Quantile label count");
    app.add_option("--folds", opt.folds, "Cross-validation fold count");
    app.add_option("--noise-fractions", opt.noise_fractions,
                   "Training-target noise fractions for bench")
        ->delimiter(',');
    app.add_option("--metrics-scale", opt.metrics_scale,
                   "Report metrics on standardized or original target scale")
        ->check(CLI::IsMember({"standardized", "original"}));
    app.add_option("--out", opt.out_dir, "Output directory");
    app.add_option("--threads", opt.threads, "Worker threads (0 = hardware)");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset CSV");
    std::string synth_family = "A";
    int synth_noise_type = 1;
    int synth_m = 1000;
    std::string synth_output;
    synth->add_option("--family", synth_family, "A (sinc) or B (cosine)");
    synth->add_option("--noise-type", synth_noise_type, "Noise type 1..6")
        ->check(CLI::Range(1, 6));
    synth->add_option("--m", synth_m, "Sample count")->check(CLI::PositiveNumber);
    synth->add_option("--output", synth_output, "Output CSV (default <out>/synth.csv)");

    // granulate
    auto* granulate = app.add_subcommand("granulate", "Granulate a CSV into balls");
    std::string gran_input;
    bool gran_header = false;
    granulate->add_option("--input", gran_input, "Input CSV")->required();
    granulate->add_flag("--header", gran_header, "Input has a header row");

    // train
    auto* train_cmd = app.add_subcommand("train", "Fit a model on a CSV");
    std::string train_input;
    bool train_header = false;
    bool train_trace = false;
    std::string model_output;
    train_cmd->add_option("--input", train_input, "Training CSV")->required();
    train_cmd->add_flag("--header", train_header, "Input has a header row");
    train_cmd->add_flag("--trace", train_trace, "Write the solver trace CSV");
    train_cmd->add_option("--model-output", model_output,
                          "Model file (default <out>/model.txt)");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Predict with a saved model");
    std::string pred_model, pred_input, pred_output;
    bool pred_header = false;
    predict_cmd->add_option("--model", pred_model, "Model file")->required();
    predict_cmd->add_option("--input", pred_input, "CSV with features + target column")
        ->required();
    predict_cmd->add_flag("--header", pred_header, "Input has a header row");
    predict_cmd->add_option("--output", pred_output,
                            "Predictions CSV (default <out>/predictions.csv)");

    // bench
    auto* bench = app.add_subcommand("bench", "Cross-validated benchmark");
    std::string bench_input, bench_family = "A";
    bool bench_header = false;
    int bench_noise_type = 1, bench_m = 1000;
    std::vector<std::string> bench_methods{"gbsvr", "svr"};
    bench->add_option("--input", bench_input, "Input CSV (omit to use synthetic data)");
    bench->add_flag("--header", bench_header, "Input has a header row");
    bench->add_option("--family", bench_family, "Synthetic family when no input");
    bench->add_option("--noise-type", bench_noise_type, "Synthetic noise type")
        ->check(CLI::Range(1, 6));
    bench->add_option("--m", bench_m, "Synthetic sample count");
    bench->add_option("--methods", bench_methods, "Methods: gbsvr and/or svr")
        ->delimiter(',');

    // ablate
    auto* ablate = app.add_subcommand("ablate", "Sweep purity or min-points");
    std::string ablate_input, ablate_axis = "purity", ablate_family = "A";
    bool ablate_header = false;
    int ablate_noise_type = 1, ablate_m = 500;
    std::vector<double> ablate_values;
    ablate->add_option("--input", ablate_input, "Input CSV (omit for synthetic)");
    ablate->add_flag("--header", ablate_header, "Input has a header row");
    ablate->add_option("--axis", ablate_axis, "purity or min-points")
        ->check(CLI::IsMember({"purity", "min-points"}));
    ablate->add_option("--values", ablate_values, "Axis values")
        ->delimiter(',')
        ->required();
    ablate->add_option("--family", ablate_family, "Synthetic family when no input");
    ablate->add_option("--noise-type", ablate_noise_type, "Synthetic noise type");
    ablate->add_option("--m", ablate_m, "Synthetic sample count");

    // tswindow
    auto* tswindow = app.add_subcommand(
        "tswindow", "Turn a single-column series CSV into train/test windows");
    std::string ts_input;
    bool ts_header = false;
    int ts_window = 5, ts_horizon = 1;
    double ts_fraction = 0.3;
    tswindow->add_option("--input", ts_input, "Series CSV (one column)")->required();
    tswindow->add_flag("--header", ts_header, "Input has a header row");
    tswindow->add_option("--window", ts_window, "Window length");
    tswindow->add_option("--horizon", ts_horizon, "Steps past the window end");
    tswindow->add_option("--train-fraction", ts_fraction, "Chronological train share");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadArgs;
    }

    try {
        if (*synth) {
            gbsvr::SyntheticSpec spec;
            spec.family = family_from(synth_family);
            spec.m = synth_m;
            spec.noise = {synth_noise_type, opt.seed};
            const gbsvr::Dataset d = gen_synthetic(spec);
            const std::string path =
                synth_output.empty() ? out_path(opt, "synth.csv") : synth_output;
            gbsvr::write_csv(d, path);
            std::printf("wrote %lld rows to %s\n",
                        static_cast<long long>(d.rows()), path.c_str());
        } else if (*granulate) {
            const gbsvr::Dataset raw = gbsvr::load_csv(gran_input, gran_header);
            auto [std_data, standardization] = gbsvr::fit_standardize(raw);
            gbsvr::GranulationConfig cfg;
            cfg.purity_threshold = opt.purities.front();
            cfg.min_points = opt.min_points.front();
            cfg.label_count = opt.labels;
            cfg.seed = opt.seed;
            const gbsvr::BallSet balls = gbsvr::generate_balls(std_data, cfg);
            const std::string path = out_path(opt, "balls.csv");
            gbsvr::export_balls_csv(balls, path);
            std::printf("m=%d  balls=%lld  compression=%.3f  objective=%.3f\n",
                        balls.source_m, static_cast<long long>(balls.size()),
                        static_cast<double>(balls.size()) / balls.source_m,
                        gbsvr::generation_objective(balls));
            std::printf("wrote %s\n", path.c_str());
        } else if (*train_cmd) {
            const gbsvr::Dataset train = gbsvr::load_csv(train_input, train_header);
            gbsvr::GbsvrConfig cfg;
            cfg.granulation.purity_threshold = opt.purities.front();
            cfg.granulation.min_points = opt.min_points.front();
            cfg.granulation.label_count = opt.labels;
            cfg.granulation.seed = opt.seed;
            cfg.kernel = kernel_from(opt);
            cfg.epsilon = opt.epsilons.front();
            cfg.C = opt.c_values.front();
            cfg.solver.collect_trace = train_trace;
            const gbsvr::GbsvrModel model = gbsvr::fit(train, cfg);
            const std::string path =
                model_output.empty() ? out_path(opt, "model.txt") : model_output;
            gbsvr::save_model(model, path);
            std::printf("balls=%lld  granulate=%.3fs  solve=%.3fs  model=%s\n",
                        static_cast<long long>(model.ball_set.size()),
                        model.granulation_seconds, model.solve_seconds, path.c_str());
            if (train_trace) {
                const std::string trace_path = out_path(opt, "solver_trace.csv");
                std::ofstream trace(trace_path);
                trace << "iteration,objective,pg_norm\n";
                for (const auto& t : model.duals.trace) {
                    trace << t.iteration << ',' << t.objective << ',' << t.pg_norm
                          << '\n';
                }
                std::printf("wrote %s\n", trace_path.c_str());
            }
        } else if (*predict_cmd) {
            const gbsvr::GbsvrModel model = gbsvr::load_model(pred_model);
            const gbsvr::Dataset data = gbsvr::load_csv(pred_input, pred_header);
            const auto scale = scale_from(opt);
            const gbsvr::Vector pred = model.predict(data.features, scale);
            const std::string path =
                pred_output.empty() ? out_path(opt, "predictions.csv") : pred_output;
            write_predictions_csv(path, pred);
            const gbsvr::Vector truth =
                scale == gbsvr::PredictionScale::standardized
                    ? gbsvr::Vector(
                          model.standardization.transform_targets(data.targets))
                    : data.targets;
            const gbsvr::MetricsReport m = gbsvr::metrics(truth, pred);
            std::printf("R2=%.4f  MAE=%.4f  MSE=%.4f  RMSE=%.4f  (%s scale)\n", m.r2,
                        m.mae, m.mse, m.rmse, opt.metrics_scale.c_str());
            std::printf("wrote %s\n", path.c_str());
        } else if (*bench) {
            gbsvr::Dataset data;
            json source;
            if (!bench_input.empty()) {
                data = gbsvr::load_csv(bench_input, bench_header);
                source = {{"input", bench_input}};
            } else {
                gbsvr::SyntheticSpec spec;
                spec.family = family_from(bench_family);
                spec.m = bench_m;
                spec.noise = {bench_noise_type, opt.seed};
                data = gen_synthetic(spec);
                source = {{"family", bench_family},
                          {"noise_type", bench_noise_type},
                          {"m", bench_m}};
            }
            std::vector<gbsvr::Method> methods;
            for (const auto& name : bench_methods) {
                if (name == "gbsvr") {
                    methods.push_back(gbsvr::Method::gbsvr);
                } else if (name == "svr") {
                    methods.push_back(gbsvr::Method::svr);
                } else {
                    throw CLI::ValidationError("--methods", "expected gbsvr or svr");
                }
            }
            gbsvr::BenchConfig cfg;
            cfg.folds = opt.folds;
            cfg.noise_fractions = opt.noise_fractions;
            cfg.seed = opt.seed;
            cfg.metrics_scale = scale_from(opt);
            cfg.threads = opt.threads;
            const auto results =
                gbsvr::crossval_bench(data, methods, grid_from(opt), cfg);
            print_bench_table(results);
            gbsvr::write_summary_csv(results, out_path(opt, "summary.csv"));
            write_run_json(opt, "bench", {{"source", source}},
                           out_path(opt, "run.json"));
            std::printf("wrote %s and %s\n", out_path(opt, "summary.csv").c_str(),
                        out_path(opt, "run.json").c_str());
        } else if (*ablate) {
            gbsvr::Dataset data;
            json source;
            if (!ablate_input.empty()) {
                data = gbsvr::load_csv(ablate_input, ablate_header);
                source = {{"input", ablate_input}};
            } else {
                gbsvr::SyntheticSpec spec;
                spec.family = family_from(ablate_family);
                spec.m = ablate_m;
                spec.noise = {ablate_noise_type, opt.seed};
                data = gen_synthetic(spec);
                source = {{"family", ablate_family},
                          {"noise_type", ablate_noise_type},
                          {"m", ablate_m}};
            }
            gbsvr::BenchConfig cfg;
            cfg.folds = opt.folds;
            cfg.seed = opt.seed;
            cfg.metrics_scale = scale_from(opt);
            cfg.threads = opt.threads;
            const auto axis = ablate_axis == "purity" ? gbsvr::AblationAxis::purity
                                                      : gbsvr::AblationAxis::min_points;
            const auto rows =
                gbsvr::ablation_sweep(data, axis, ablate_values, grid_from(opt), cfg);
            std::printf("%-12s %-10s %-10s\n", ablate_axis.c_str(), "mean R2",
                        "mean MAE");
            const std::string path = out_path(opt, "ablation.csv");
            std::ofstream out(path);
            out << ablate_axis << ",mean_r2,mean_mae\n";
            for (const auto& row : rows) {
                std::printf("%-12g %-10.4f %-10.4f\n", row.value, row.mean_r2,
                            row.mean_mae);
                out << row.value << ',' << row.mean_r2 << ',' << row.mean_mae << '\n';
            }
            write_run_json(opt, "ablate",
                           {{"source", source},
                            {"axis", ablate_axis},
                            {"values", ablate_values}},
                           out_path(opt, "run.json"));
            std::printf("wrote %s\n", path.c_str());
        } else if (*tswindow) {
            const gbsvr::Vector series = gbsvr::load_series_csv(ts_input, ts_header);
            const gbsvr::Dataset d =
                gbsvr::windowize(series, {ts_window, ts_horizon});
            auto [train, test] = gbsvr::chrono_split(d, ts_fraction);
            const std::string train_path = out_path(opt, "train.csv");
            const std::string test_path = out_path(opt, "test.csv");
            gbsvr::write_csv(train, train_path);
            gbsvr::write_csv(test, test_path);
            std::printf("series length %lld -> %lld train rows, %lld test rows\n",
                        static_cast<long long>(series.size()),
                        static_cast<long long>(train.rows()),
                        static_cast<long long>(test.rows()));
            std::printf("wrote %s and %s\n", train_path.c_str(), test_path.c_str());
        }
    } catch (const CLI::Error& e) {
        std::cerr << "argument error: " << e.what() << '\n';
        return kExitBadArgs;
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << '\n';
        return kExitBadArgs;
    } catch (const gbsvr::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const gbsvr::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumericError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericError;
    }
    return kExitOk;
}
