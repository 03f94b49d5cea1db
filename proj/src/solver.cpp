#include "gbsvr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gbsvr {

namespace {

constexpr double kNormFloor = 1e-12; // below this |A| counts as zero

struct ObjectiveTerms {
    Vector beta;
    Vector gram_beta;
    double norm_A2 = 0.0;
    double norm_A = 0.0;
    double B = 0.0;
};

ObjectiveTerms eval_terms(const DualProblem& p, const Vector& alpha,
                          const Vector& alpha_star) {
    ObjectiveTerms t;
    t.beta = alpha - alpha_star;
    t.gram_beta = p.gram * t.beta;
    t.norm_A2 = std::max(0.0, t.beta.dot(t.gram_beta));
    t.norm_A = std::sqrt(t.norm_A2);
    t.B = t.beta.dot(p.radii);
    return t;
}

} // namespace

void validate(const DualProblem& p) {
    const Index n = p.size();
    if (n < 1 || p.gram.cols() != n || p.radii.size() != n || p.targets.size() != n) {
        throw std::invalid_argument("dual problem dimensions disagree");
    }
    if (!(p.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    if (!(p.C > 0.0)) throw std::invalid_argument("C must be > 0");
    if ((p.radii.array() < 0.0).any()) {
        throw std::invalid_argument("radii must be nonnegative");
    }
    if (!p.gram.allFinite() || !p.radii.allFinite() || !p.targets.allFinite()) {
        throw NumericError("dual problem contains non-finite entries");
    }
}

void validate(const DualProblem& p, const DualSolution& s) {
    const Index n = p.size();
    if (s.alpha.size() != n || s.alpha_star.size() != n) {
        throw std::invalid_argument("solution dimensions disagree with problem");
    }
    const double lo = 0.0, hi = p.C;
    if ((s.alpha.array() < lo).any() || (s.alpha.array() > hi).any() ||
        (s.alpha_star.array() < lo).any() || (s.alpha_star.array() > hi).any()) {
        throw NumericError("dual solution violates the box constraints");
    }
    const double balance = std::abs(s.alpha.sum() - s.alpha_star.sum());
    if (balance > 1e-8 * static_cast<double>(n) * p.C) {
        throw NumericError("dual solution violates the balance constraint");
    }
}

double dual_objective(const DualProblem& p, const Vector& alpha,
                      const Vector& alpha_star) {
    if (alpha.size() != p.size() || alpha_star.size() != p.size()) {
        throw std::invalid_argument("dual_objective: dimension mismatch");
    }
    const ObjectiveTerms t = eval_terms(p, alpha, alpha_star);
    const double linear = t.beta.dot(p.targets);
    const double penalty = p.epsilon * (alpha.sum() + alpha_star.sum());

    const double expanded =
        -0.5 * t.norm_A2 - 0.5 * t.B * t.B + t.norm_A * t.B + linear - penalty;
    const double diff = t.norm_A - t.B;
    const double compact = -0.5 * diff * diff + linear - penalty;
    const double scale = std::max({1.0, std::abs(expanded), std::abs(compact)});
    if (std::abs(expanded - compact) > 1e-10 * scale) {
        throw NumericError("dual objective forms disagree beyond tolerance");
    }
    if (!std::isfinite(expanded)) {
        throw NumericError("dual objective is non-finite");
    }
    return expanded;
}

double dual_objective(const DualProblem& p, const DualSolution& s) {
    return dual_objective(p, s.alpha, s.alpha_star);
}

std::pair<Vector, Vector> dual_gradient(const DualProblem& p, const Vector& alpha,
                                        const Vector& alpha_star) {
    if (alpha.size() != p.size() || alpha_star.size() != p.size()) {
        throw std::invalid_argument("dual_gradient: dimension mismatch");
    }
    const ObjectiveTerms t = eval_terms(p, alpha, alpha_star);
    const double h = t.norm_A - t.B;

    Vector direction;
    if (t.norm_A < kNormFloor) {
        direction = Vector::Zero(p.size());
    } else {
        direction = t.gram_beta / t.norm_A;
    }
    // d/d(beta_i) of -(1/2)(|A| - B)^2 + beta.y, then the -epsilon shift on
    // both alpha and alpha_star sides.
    Vector grad_beta = -h * (direction - p.radii) + p.targets;
    Vector g_alpha = grad_beta.array() - p.epsilon;
    Vector g_alpha_star = -grad_beta.array() - p.epsilon;
    return {std::move(g_alpha), std::move(g_alpha_star)};
}

std::pair<Vector, Vector> project_feasible(Vector alpha, Vector alpha_star, double C) {
    const auto n = static_cast<double>(alpha.size());
    constexpr int kMaxRounds = 1000;
    constexpr double kResidualTol = 1e-10;
    for (int round = 0; round < kMaxRounds; ++round) {
        alpha = alpha.cwiseMax(0.0).cwiseMin(C);
        alpha_star = alpha_star.cwiseMax(0.0).cwiseMin(C);
        const double residual = alpha.sum() - alpha_star.sum();
        if (std::abs(residual) <= kResidualTol) {
            return {std::move(alpha), std::move(alpha_star)};
        }
        const double t = residual / (2.0 * n);
        alpha.array() -= t;
        alpha_star.array() += t;
    }
    alpha = alpha.cwiseMax(0.0).cwiseMin(C);
    alpha_star = alpha_star.cwiseMax(0.0).cwiseMin(C);
    return {std::move(alpha), std::move(alpha_star)};
}

DualSolution solve_dual(const DualProblem& p, const SolverConfig& cfg) {
    validate(p);
    const Index n = p.size();

    DualSolution s;
    s.alpha = Vector::Zero(n);
    s.alpha_star = Vector::Zero(n);
    double objective = dual_objective(p, s.alpha, s.alpha_star);

    const double initial_step =
        1.0 / (p.gram.trace() / static_cast<double>(n) + 1.0);
    double step = initial_step;
    constexpr int kMaxHalvings = 60;

    int iter = 0;
    double pg_norm = std::numeric_limits<double>::infinity();
    for (iter = 0; iter < cfg.max_iter; ++iter) {
        auto [g_alpha, g_alpha_star] = dual_gradient(p, s.alpha, s.alpha_star);

        // Unit-step gradient mapping measures stationarity on the feasible set.
        auto [pa, pas] =
            project_feasible(s.alpha + g_alpha, s.alpha_star + g_alpha_star, p.C);
        pg_norm = std::sqrt((pa - s.alpha).squaredNorm() +
                            (pas - s.alpha_star).squaredNorm());
        if (cfg.collect_trace) s.trace.push_back({iter, objective, pg_norm});
        if (pg_norm <= cfg.tol) break;

        bool accepted = false;
        double trial = std::min(step * 2.0, initial_step * 16.0);
        for (int halving = 0; halving < kMaxHalvings; ++halving) {
            auto [ca, cas] = project_feasible(s.alpha + trial * g_alpha,
                                              s.alpha_star + trial * g_alpha_star, p.C);
            const double moved =
                (ca - s.alpha).lpNorm<Eigen::Infinity>() +
                (cas - s.alpha_star).lpNorm<Eigen::Infinity>();
            if (moved > 0.0) {
                const double candidate = dual_objective(p, ca, cas);
                if (candidate >= objective) {
                    s.alpha = std::move(ca);
                    s.alpha_star = std::move(cas);
                    objective = candidate;
                    step = trial;
                    accepted = true;
                    break;
                }
            }
            trial *= 0.5;
        }
        if (!accepted) break; // no ascent direction at line-search resolution
    }

    s.objective = objective;
    s.kkt_residual = pg_norm;
    s.iterations = iter;
    if (cfg.collect_trace &&
        (s.trace.empty() || s.trace.back().iteration != iter)) {
        s.trace.push_back({iter, objective, pg_norm});
    }
    validate(p, s);
    return s;
}

namespace {

struct GridBest {
    double objective = -std::numeric_limits<double>::infinity();
    Vector alpha;
    Vector alpha_star;
    long evaluated = 0;
};

// Enumerates the lattice over [lo, hi] per coordinate with `steps` cells,
// keeping candidates whose balance residual fits within one cell width. The
// last alpha_star coordinate is scanned only over the indices that can pass
// the filter; every surviving candidate is evaluated exactly. The objective
// is computed allocation-free (same formula as dual_objective) because the
// scan touches tens of millions of points.
void grid_scan(const DualProblem& p, const Matrix& bounds, int steps, GridBest& best) {
    const auto n = static_cast<int>(p.size());
    const int dims = 2 * n;
    std::vector<double> lo(dims), width(dims);
    double cell = 0.0;
    for (int d = 0; d < dims; ++d) {
        lo[d] = bounds(d, 0);
        width[d] = (bounds(d, 1) - bounds(d, 0)) / steps;
        cell = std::max(cell, width[d]);
    }

    double alpha[3] = {0, 0, 0};
    double alpha_star[3] = {0, 0, 0};
    double beta[3] = {0, 0, 0};
    const auto evaluate = [&]() {
        double norm_A2 = 0.0, B = 0.0, linear = 0.0, sum = 0.0;
        for (int i = 0; i < n; ++i) {
            beta[i] = alpha[i] - alpha_star[i];
            sum += alpha[i] + alpha_star[i];
        }
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += p.gram(i, j) * beta[j];
            norm_A2 += beta[i] * row;
            B += beta[i] * p.radii[i];
            linear += beta[i] * p.targets[i];
        }
        norm_A2 = std::max(0.0, norm_A2);
        const double norm_A = std::sqrt(norm_A2);
        const double obj =
            -0.5 * norm_A2 - 0.5 * B * B + norm_A * B + linear - p.epsilon * sum;
        ++best.evaluated;
        if (obj > best.objective) {
            best.objective = obj;
            best.alpha = Eigen::Map<const Vector>(alpha, n);
            best.alpha_star = Eigen::Map<const Vector>(alpha_star, n);
        }
    };

    std::vector<int> idx(dims - 1, 0);
    const int last = dims - 1; // alpha_star[n-1]
    while (true) {
        double partial = 0.0; // sum(alpha) - sum(alpha_star) without the last dim
        for (int d = 0; d < n; ++d) {
            alpha[d] = lo[d] + idx[d] * width[d];
            partial += alpha[d];
        }
        for (int d = n; d < last; ++d) {
            alpha_star[d - n] = lo[d] + idx[d] * width[d];
            partial -= alpha_star[d - n];
        }

        // Need |partial - v| <= cell for v on the last-dim lattice.
        if (width[last] > 0.0) {
            int j0 = static_cast<int>(
                std::ceil((partial - cell - lo[last]) / width[last] - 1e-12));
            int j1 = static_cast<int>(
                std::floor((partial + cell - lo[last]) / width[last] + 1e-12));
            j0 = std::max(j0, 0);
            j1 = std::min(j1, steps);
            for (int j = j0; j <= j1; ++j) {
                alpha_star[n - 1] = lo[last] + j * width[last];
                evaluate();
            }
        } else if (std::abs(partial - lo[last]) <= cell) {
            alpha_star[n - 1] = lo[last];
            evaluate();
        }

        int d = 0;
        for (; d < dims - 1; ++d) {
            if (++idx[d] <= steps) break;
            idx[d] = 0;
        }
        if (d == dims - 1) break;
    }
}

} // namespace

DualSolution oracle_grid_solve(const DualProblem& p, int grid_steps) {
    validate(p);
    const auto n = static_cast<int>(p.size());
    if (n > 3) {
        throw std::invalid_argument("oracle_grid_solve supports n <= 3 only");
    }
    if (grid_steps < 2) {
        throw std::invalid_argument("oracle_grid_solve needs grid_steps >= 2");
    }

    const int dims = 2 * n;
    Matrix bounds(dims, 2);
    bounds.col(0).setZero();
    bounds.col(1).setConstant(p.C);

    GridBest best;
    grid_scan(p, bounds, grid_steps, best);

    // One refinement pass around the best coarse cell.
    const double cell = p.C / grid_steps;
    Matrix refined(dims, 2);
    for (int d = 0; d < n; ++d) {
        refined(d, 0) = std::max(0.0, best.alpha[d] - cell);
        refined(d, 1) = std::min(p.C, best.alpha[d] + cell);
        refined(n + d, 0) = std::max(0.0, best.alpha_star[d] - cell);
        refined(n + d, 1) = std::min(p.C, best.alpha_star[d] + cell);
    }
    grid_scan(p, refined, grid_steps, best);

    DualSolution s;
    s.alpha = best.alpha;
    s.alpha_star = best.alpha_star;
    s.objective = best.objective;
    s.kkt_residual = std::abs(best.alpha.sum() - best.alpha_star.sum());
    s.iterations = static_cast<int>(std::min<long>(best.evaluated,
                                                   std::numeric_limits<int>::max()));
    return s;
}

WeightRepr recover_weights(const DualProblem& p, const DualSolution& s) {
    const Index n = p.size();
    const ObjectiveTerms t = eval_terms(p, s.alpha, s.alpha_star);

    WeightRepr w;
    w.beta = t.beta;
    w.norm_A = t.norm_A;
    w.B = t.B;
    w.norm_clamped = t.norm_A < t.B;
    w.norm_w = std::max(0.0, t.norm_A - t.B);

    // Kernelized w.c_i for every ball center.
    const double scale = w.expansion_scale();
    const Vector w_dot_c = scale * t.gram_beta;

    // A free dual variable pins the bias through its active tube constraint;
    // otherwise the stationarity conditions bound it from both sides and we
    // take the interval midpoint.
    const double bound_margin = 1e-8 * p.C;
    double free_sum = 0.0;
    int free_count = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
        const double up_value =
            w.norm_w * p.radii[i] + p.targets[i] - w_dot_c[i] - p.epsilon;
        const double down_value =
            p.targets[i] + w.norm_w * p.radii[i] - w_dot_c[i] + p.epsilon;

        const bool alpha_free =
            s.alpha[i] > bound_margin && s.alpha[i] < p.C - bound_margin;
        const bool star_free =
            s.alpha_star[i] > bound_margin && s.alpha_star[i] < p.C - bound_margin;
        if (alpha_free) {
            free_sum += up_value;
            ++free_count;
        }
        if (star_free) {
            free_sum += down_value;
            ++free_count;
        }

        if (s.alpha[i] < p.C - bound_margin) lower = std::max(lower, up_value);
        if (s.alpha[i] > bound_margin) upper = std::min(upper, up_value);
        if (s.alpha_star[i] < p.C - bound_margin) upper = std::min(upper, down_value);
        if (s.alpha_star[i] > bound_margin) lower = std::max(lower, down_value);
    }

    if (free_count > 0) {
        w.bias = free_sum / free_count;
    } else if (std::isfinite(lower) && std::isfinite(upper)) {
        w.bias = 0.5 * (lower + upper);
    } else if (std::isfinite(lower)) {
        w.bias = lower;
    } else if (std::isfinite(upper)) {
        w.bias = upper;
    } else {
        w.bias = 0.0;
    }
    return w;
}

} // namespace gbsvr
