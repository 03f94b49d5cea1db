#include "gbsvr/baseline.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "gbsvr/rng.hpp"

namespace gbsvr {

double SvrModel::predict_standardized(const Vector& x) const {
    if (x.size() != inputs.cols()) {
        throw std::invalid_argument("predict: feature length mismatch");
    }
    const Vector x_std =
        standardization.transform_features(x.transpose()).row(0).transpose();
    double acc = bias;
    for (Index i = 0; i < inputs.rows(); ++i) {
        if (beta[i] != 0.0) {
            acc += beta[i] * k_eval(kernel, inputs.row(i).transpose(), x_std);
        }
    }
    return acc;
}

double SvrModel::predict(const Vector& x) const {
    return standardization.inverse_target(predict_standardized(x));
}

Vector SvrModel::predict_standardized(const Matrix& x) const {
    Vector out(x.rows());
    for (Index i = 0; i < x.rows(); ++i) {
        out[i] = predict_standardized(Vector(x.row(i).transpose()));
    }
    return out;
}

Vector SvrModel::predict(const Matrix& x) const {
    return standardization.inverse_targets(predict_standardized(x));
}

// Pairwise coordinate ascent on the epsilon-SVR dual, formulated over the
// stacked variables (alpha, alpha_star) with signs z = (+1, -1). The first
// pair member is the maximal violator of the stationarity condition; the
// second is drawn at random among the indices that still allow progress.
SvrModel svr_fit(const Dataset& train, const SvrConfig& cfg) {
    validate(train);
    validate(cfg.kernel);
    if (!(cfg.epsilon >= 0.0) || !(cfg.C > 0.0)) {
        throw std::invalid_argument("svr_fit: need epsilon >= 0 and C > 0");
    }

    auto [std_data, standardization] = fit_standardize(train);
    const auto m = static_cast<int>(std_data.rows());
    const double C = cfg.C;
    const double eps = cfg.epsilon;

    const auto t0 = std::chrono::steady_clock::now();
    const Matrix K = gram(cfg.kernel, std_data.features);

    Vector alpha = Vector::Zero(m);      // upper-tube multipliers
    Vector alpha_star = Vector::Zero(m); // lower-tube multipliers
    Vector beta = Vector::Zero(m);
    Vector fhat = Vector::Zero(m); // K * beta
    const Vector& y = std_data.targets;

    Rng rng(cfg.seed);
    std::vector<int> eligible; // candidate second members, encoded side*m + i
    eligible.reserve(2 * static_cast<std::size_t>(m));

    std::vector<double> trace;
    double objective = 0.0;
    if (cfg.collect_trace) trace.push_back(objective);

    long updates = 0;
    double violation = 0.0;
    while (updates < cfg.max_updates) {
        // Stationarity scan. For sample i the candidate bias values are
        // (y - fhat) -/+ epsilon on the alpha / alpha_star side.
        double best_up = -std::numeric_limits<double>::infinity();
        double best_low = std::numeric_limits<double>::infinity();
        int up_side = 0, up_index = -1;
        for (int i = 0; i < m; ++i) {
            const double r = y[i] - fhat[i];
            const double v_plus = r - eps;
            const double v_minus = r + eps;
            if (alpha[i] < C && v_plus > best_up) {
                best_up = v_plus;
                up_side = 0;
                up_index = i;
            }
            if (alpha_star[i] > 0.0 && v_minus > best_up) {
                best_up = v_minus;
                up_side = 1;
                up_index = i;
            }
            if (alpha[i] > 0.0 && v_plus < best_low) best_low = v_plus;
            if (alpha_star[i] < C && v_minus < best_low) best_low = v_minus;
        }
        violation = best_up - best_low;
        if (!(violation > cfg.kkt_tol)) break;

        eligible.clear();
        for (int i = 0; i < m; ++i) {
            const double r = y[i] - fhat[i];
            if (alpha[i] > 0.0 && r - eps < best_up) eligible.push_back(i);
            if (alpha_star[i] < C && r + eps < best_up) eligible.push_back(m + i);
        }
        if (eligible.empty()) break;
        const int pick = eligible[rng.next_below(eligible.size())];
        const int low_side = pick >= m ? 1 : 0;
        const int low_index = pick % m;

        const int i = up_index, j = low_index;
        const double ri = y[i] - fhat[i];
        const double rj = y[j] - fhat[j];
        const double vi = up_side == 0 ? ri - eps : ri + eps;
        const double vj = low_side == 0 ? rj - eps : rj + eps;

        const double curvature = K(i, i) + K(j, j) - 2.0 * K(i, j);
        const double slope = vj - vi; // directional derivative, negative here

        // The step moves beta[i] up by t and beta[j] down by t; per side that
        // means growing alpha / shrinking alpha_star on i and the reverse on j.
        double t_max = up_side == 0 ? C - alpha[i] : alpha_star[i];
        t_max = std::min(t_max, low_side == 0 ? alpha[j] : C - alpha_star[j]);
        double t = curvature > 1e-12 ? std::min(-slope / curvature, t_max) : t_max;
        if (!(t > 0.0)) break;

        if (up_side == 0) {
            alpha[i] += t;
        } else {
            alpha_star[i] -= t;
        }
        if (low_side == 0) {
            alpha[j] -= t;
        } else {
            alpha_star[j] += t;
        }
        beta[i] += t;
        beta[j] -= t;
        fhat += t * (K.col(i) - K.col(j));
        objective += -slope * t - 0.5 * curvature * t * t;
        ++updates;
        if (cfg.collect_trace) trace.push_back(objective);
    }

    // Bias from the final stationarity interval midpoint.
    double best_up = -std::numeric_limits<double>::infinity();
    double best_low = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        const double r = y[i] - fhat[i];
        if (alpha[i] < C) best_up = std::max(best_up, r - eps);
        if (alpha_star[i] > 0.0) best_up = std::max(best_up, r + eps);
        if (alpha[i] > 0.0) best_low = std::min(best_low, r - eps);
        if (alpha_star[i] < C) best_low = std::min(best_low, r + eps);
    }
    double bias = 0.0;
    if (std::isfinite(best_up) && std::isfinite(best_low)) {
        bias = 0.5 * (best_up + best_low);
    } else if (std::isfinite(best_up)) {
        bias = best_up;
    } else if (std::isfinite(best_low)) {
        bias = best_low;
    }

    const auto t1 = std::chrono::steady_clock::now();

    SvrModel model;
    model.inputs = std_data.features;
    model.beta = beta;
    model.bias = bias;
    model.kernel = cfg.kernel;
    model.standardization = standardization;
    model.C = C;
    model.epsilon = eps;
    model.solve_seconds = std::chrono::duration<double>(t1 - t0).count();
    model.updates = updates;
    model.kkt_violation = violation;
    model.objective_trace = std::move(trace);
    return model;
}

} // namespace gbsvr
