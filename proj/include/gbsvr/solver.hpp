#pragma once

#include <utility>
#include <vector>

#include "gbsvr/types.hpp"

namespace gbsvr {

/// Box- and sum-constrained dual over n granular regression balls. The
/// objective couples the kernel quadratic form with the beta-weighted radius
/// sum, so it is solved by projected gradient ascent rather than a stock QP.
struct DualProblem {
    Matrix gram;    // n x n kernel matrix over ball centers
    Vector radii;   // n, nonnegative
    Vector targets; // ball targets y_hat, n
    double epsilon = 0.1;
    double C = 1.0;

    Index size() const { return gram.rows(); }
};

void validate(const DualProblem& p);

struct TracePoint {
    int iteration = 0;
    double objective = 0.0;
    double pg_norm = 0.0;
};

struct SolverConfig {
    int max_iter = 10000;
    double tol = 1e-6; // projected-gradient norm threshold
    bool collect_trace = false;
};

struct DualSolution {
    Vector alpha;
    Vector alpha_star;
    double objective = 0.0;
    double kkt_residual = 0.0; // final projected-gradient norm
    int iterations = 0;
    std::vector<TracePoint> trace;

    Vector beta() const { return alpha - alpha_star; }
};

/// Checks the box and balance constraints of a solver-produced solution.
void validate(const DualProblem& p, const DualSolution& s);

/// Recovered weight representation: beta = alpha - alpha_star, the center-sum
/// norm |A| (through the Gram form), the radius sum B, the clamped weight
/// norm |w| = max(0, |A| - B), and the bias.
struct WeightRepr {
    Vector beta;
    double norm_A = 0.0;
    double B = 0.0;
    double norm_w = 0.0;
    double bias = 0.0;
    bool norm_clamped = false; // set when |A| < B forced the clamp

    /// Coefficient applied to the kernel expansion, |w| / |A| (0 for |A|=0).
    double expansion_scale() const {
        return norm_A < 1e-12 ? 0.0 : norm_w / norm_A;
    }
};

/// Dual objective value. Evaluates both the expanded and the compact
/// algebraic form and throws NumericError if they disagree or the value is
/// non-finite.
double dual_objective(const DualProblem& p, const Vector& alpha,
                      const Vector& alpha_star);
double dual_objective(const DualProblem& p, const DualSolution& s);

/// Exact partials of the dual objective with respect to (alpha, alpha_star).
/// At the nonsmooth point |A| < 1e-12 the |A|-direction term is dropped
/// (subgradient choice that keeps the origin stationary when appropriate).
std::pair<Vector, Vector> dual_gradient(const DualProblem& p, const Vector& alpha,
                                        const Vector& alpha_star);

/// Alternating projection onto the box [0, C]^n x [0, C]^n intersected with
/// the balance hyperplane sum(alpha - alpha_star) = 0; iterated to a 1e-10
/// residual, capped at 1000 rounds. Idempotent on feasible input.
std::pair<Vector, Vector> project_feasible(Vector alpha, Vector alpha_star, double C);

/// Projected gradient ascent with backtracking line search. The objective is
/// non-decreasing across accepted iterations; terminates when the
/// projected-gradient norm falls below cfg.tol or max_iter is reached.
DualSolution solve_dual(const DualProblem& p, const SolverConfig& cfg = {});

/// Exhaustive box-grid search keeping only balance-feasible points
/// (|sum beta| within one grid cell), refined once around the best cell.
/// Verification oracle for n <= 3 only.
DualSolution oracle_grid_solve(const DualProblem& p, int grid_steps);

/// Recovers beta, |A|, B, |w| and the bias from a feasible dual solution.
/// The bias averages the values implied by free dual variables; without any
/// free variable it is the midpoint of the tightest interval the stationarity
/// conditions admit.
WeightRepr recover_weights(const DualProblem& p, const DualSolution& s);

} // namespace gbsvr
