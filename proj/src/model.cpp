#include "gbsvr/model.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gbsvr {

double GbsvrModel::predict(const Vector& x, PredictionScale scale) const {
    if (ball_set.balls.empty()) {
        throw std::invalid_argument("predict called on an unfitted model");
    }
    if (x.size() != ball_set.balls.front().center.size()) {
        throw std::invalid_argument("predict: feature length mismatch");
    }
    const Vector x_std =
        standardization.transform_features(x.transpose()).row(0).transpose();
    double acc = weights.bias;
    const double factor = weights.expansion_scale();
    if (factor != 0.0) {
        for (Index i = 0; i < ball_set.size(); ++i) {
            const auto& ball = ball_set.balls[static_cast<std::size_t>(i)];
            if (weights.beta[i] != 0.0) {
                acc += factor * weights.beta[i] * k_eval(kernel, ball.center, x_std);
            }
        }
    }
    if (!std::isfinite(acc)) throw NumericError("prediction is non-finite");
    return scale == PredictionScale::standardized ? acc
                                                  : standardization.inverse_target(acc);
}

Vector GbsvrModel::predict(const Matrix& x, PredictionScale scale) const {
    Vector out(x.rows());
    for (Index i = 0; i < x.rows(); ++i) {
        out[i] = predict(Vector(x.row(i).transpose()), scale);
    }
    return out;
}

GbsvrModel fit(const Dataset& train, const GbsvrConfig& cfg) {
    validate(train);
    validate(cfg.kernel);
    if (train.rows() < 2) {
        throw std::invalid_argument("fit needs at least 2 training rows");
    }

    GbsvrModel model;
    auto [std_data, standardization] = fit_standardize(train);
    model.standardization = standardization;

    const auto t0 = std::chrono::steady_clock::now();
    model.ball_set = generate_balls(std_data, cfg.granulation);
    const auto t1 = std::chrono::steady_clock::now();

    DualProblem problem;
    problem.gram = gram(cfg.kernel, model.ball_set.centers());
    problem.radii = model.ball_set.radii();
    problem.targets = model.ball_set.ball_targets();
    problem.epsilon = cfg.epsilon;
    problem.C = cfg.C;
    model.duals = solve_dual(problem, cfg.solver);
    model.weights = recover_weights(problem, model.duals);
    const auto t2 = std::chrono::steady_clock::now();

    model.kernel = cfg.kernel;
    model.train_config = cfg;
    model.granulation_seconds = std::chrono::duration<double>(t1 - t0).count();
    model.solve_seconds = std::chrono::duration<double>(t2 - t1).count();
    return model;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_vector(std::ostream& out, const std::string& name, const Vector& v) {
    out << name << ' ' << v.size();
    for (Index i = 0; i < v.size(); ++i) out << ' ' << fmt(v[i]);
    out << '\n';
}

Vector read_vector(std::istream& in, const std::string& expected) {
    std::string name;
    Index n = 0;
    if (!(in >> name >> n) || name != expected) {
        throw DataError("model file: expected vector '" + expected + "'");
    }
    Vector v(n);
    for (Index i = 0; i < n; ++i) {
        if (!(in >> v[i])) throw DataError("model file: truncated vector " + expected);
    }
    return v;
}

double read_scalar(std::istream& in, const std::string& expected) {
    std::string name;
    double v = 0.0;
    if (!(in >> name >> v) || name != expected) {
        throw DataError("model file: expected scalar '" + expected + "'");
    }
    return v;
}

long read_integer(std::istream& in, const std::string& expected) {
    std::string name;
    long v = 0;
    if (!(in >> name >> v) || name != expected) {
        throw DataError("model file: expected integer '" + expected + "'");
    }
    return v;
}

std::string read_word(std::istream& in, const std::string& expected) {
    std::string name, value;
    if (!(in >> name >> value) || name != expected) {
        throw DataError("model file: expected field '" + expected + "'");
    }
    return value;
}

} // namespace

void save_model(const GbsvrModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);

    out << "gbsvr-model 1\n";
    const auto& cfg = model.train_config;
    out << "kernel " << (model.kernel.kind == KernelKind::linear ? "linear" : "rbf")
        << '\n';
    out << "sigma " << fmt(model.kernel.sigma) << '\n';
    out << "rbf_form "
        << (model.kernel.rbf_form == RbfForm::squared_norm ? "squared_norm"
                                                           : "unsquared_norm")
        << '\n';
    out << "epsilon " << fmt(cfg.epsilon) << '\n';
    out << "C " << fmt(cfg.C) << '\n';
    out << "purity_threshold " << fmt(cfg.granulation.purity_threshold) << '\n';
    out << "min_points " << cfg.granulation.min_points << '\n';
    out << "label_count " << cfg.granulation.label_count << '\n';
    out << "granulation_seed " << cfg.granulation.seed << '\n';
    out << "radius_rule "
        << (cfg.granulation.radius_rule == RadiusRule::mean_distance ? "mean_distance"
                                                                     : "max_distance")
        << '\n';
    out << "solver_max_iter " << cfg.solver.max_iter << '\n';
    out << "solver_tol " << fmt(cfg.solver.tol) << '\n';

    write_vector(out, "feature_means", model.standardization.feature_means);
    write_vector(out, "feature_stds", model.standardization.feature_stds);
    out << "target_mean " << fmt(model.standardization.target_mean) << '\n';
    out << "target_std " << fmt(model.standardization.target_std) << '\n';

    out << "source_m " << model.ball_set.source_m << '\n';
    out << "n_balls " << model.ball_set.size() << '\n';
    for (const auto& ball : model.ball_set.balls) {
        write_vector(out, "center", ball.center);
        out << "radius " << fmt(ball.radius) << '\n';
        out << "y_hat " << fmt(ball.y_hat) << '\n';
        out << "cardinality " << ball.cardinality << '\n';
        out << "majority_label " << ball.majority_label << '\n';
        out << "quality " << fmt(ball.quality) << '\n';
        out << "unsplittable_impure " << (ball.unsplittable_impure ? 1 : 0) << '\n';
        out << "members " << ball.member_indices.size();
        for (int idx : ball.member_indices) out << ' ' << idx;
        out << '\n';
    }

    write_vector(out, "alpha", model.duals.alpha);
    write_vector(out, "alpha_star", model.duals.alpha_star);
    out << "dual_objective " << fmt(model.duals.objective) << '\n';
    out << "dual_kkt_residual " << fmt(model.duals.kkt_residual) << '\n';
    out << "dual_iterations " << model.duals.iterations << '\n';

    write_vector(out, "beta", model.weights.beta);
    out << "norm_A " << fmt(model.weights.norm_A) << '\n';
    out << "B " << fmt(model.weights.B) << '\n';
    out << "norm_w " << fmt(model.weights.norm_w) << '\n';
    out << "bias " << fmt(model.weights.bias) << '\n';
    out << "norm_clamped " << (model.weights.norm_clamped ? 1 : 0) << '\n';

    out << "granulation_seconds " << fmt(model.granulation_seconds) << '\n';
    out << "solve_seconds " << fmt(model.solve_seconds) << '\n';
}

GbsvrModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);

    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "gbsvr-model" || version != 1) {
        throw DataError("not a gbsvr model file: " + path);
    }

    GbsvrModel model;
    auto& cfg = model.train_config;
    const std::string kind = read_word(in, "kernel");
    model.kernel.kind = kind == "linear" ? KernelKind::linear : KernelKind::rbf;
    model.kernel.sigma = read_scalar(in, "sigma");
    model.kernel.rbf_form = read_word(in, "rbf_form") == "squared_norm"
                                ? RbfForm::squared_norm
                                : RbfForm::unsquared_norm;
    cfg.kernel = model.kernel;
    cfg.epsilon = read_scalar(in, "epsilon");
    cfg.C = read_scalar(in, "C");
    cfg.granulation.purity_threshold = read_scalar(in, "purity_threshold");
    cfg.granulation.min_points = static_cast<int>(read_integer(in, "min_points"));
    cfg.granulation.label_count = static_cast<int>(read_integer(in, "label_count"));
    cfg.granulation.seed =
        static_cast<std::uint64_t>(read_integer(in, "granulation_seed"));
    cfg.granulation.radius_rule = read_word(in, "radius_rule") == "mean_distance"
                                      ? RadiusRule::mean_distance
                                      : RadiusRule::max_distance;
    cfg.solver.max_iter = static_cast<int>(read_integer(in, "solver_max_iter"));
    cfg.solver.tol = read_scalar(in, "solver_tol");

    model.standardization.feature_means = read_vector(in, "feature_means");
    model.standardization.feature_stds = read_vector(in, "feature_stds");
    model.standardization.target_mean = read_scalar(in, "target_mean");
    model.standardization.target_std = read_scalar(in, "target_std");

    model.ball_set.source_m = static_cast<int>(read_integer(in, "source_m"));
    const long n_balls = read_integer(in, "n_balls");
    model.ball_set.config = cfg.granulation;
    for (long b = 0; b < n_balls; ++b) {
        GranularRegressionBall ball;
        ball.center = read_vector(in, "center");
        ball.radius = read_scalar(in, "radius");
        ball.y_hat = read_scalar(in, "y_hat");
        ball.cardinality = static_cast<int>(read_integer(in, "cardinality"));
        ball.majority_label = static_cast<int>(read_integer(in, "majority_label"));
        ball.quality = read_scalar(in, "quality");
        ball.unsplittable_impure = read_integer(in, "unsplittable_impure") != 0;
        const long count = read_integer(in, "members");
        ball.member_indices.resize(static_cast<std::size_t>(count));
        for (long i = 0; i < count; ++i) {
            if (!(in >> ball.member_indices[static_cast<std::size_t>(i)])) {
                throw DataError("model file: truncated member list");
            }
        }
        model.ball_set.balls.push_back(std::move(ball));
    }

    model.duals.alpha = read_vector(in, "alpha");
    model.duals.alpha_star = read_vector(in, "alpha_star");
    model.duals.objective = read_scalar(in, "dual_objective");
    model.duals.kkt_residual = read_scalar(in, "dual_kkt_residual");
    model.duals.iterations = static_cast<int>(read_integer(in, "dual_iterations"));

    model.weights.beta = read_vector(in, "beta");
    model.weights.norm_A = read_scalar(in, "norm_A");
    model.weights.B = read_scalar(in, "B");
    model.weights.norm_w = read_scalar(in, "norm_w");
    model.weights.bias = read_scalar(in, "bias");
    model.weights.norm_clamped = read_integer(in, "norm_clamped") != 0;

    model.granulation_seconds = read_scalar(in, "granulation_seconds");
    model.solve_seconds = read_scalar(in, "solve_seconds");
    return model;
}

} // namespace gbsvr
