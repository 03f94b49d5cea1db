#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gbsvr/dataset.hpp"
#include "gbsvr/types.hpp"

namespace gbsvr {

enum class RadiusRule { mean_distance, max_distance };

struct GranulationConfig {
    double purity_threshold = 0.99; // T in (0.5, 1]
    int min_points = 2;             // p: balls at or below this size stop splitting
    int label_count = 10;           // k: quantile bins for the target
    std::uint64_t seed = 0;
    RadiusRule radius_rule = RadiusRule::mean_distance;
};

/// Throws std::invalid_argument if the config is out of range.
void validate(const GranulationConfig& cfg);

/// A cluster of training samples summarized by its center (feature mean),
/// radius (mean member-to-center distance by default), and ball target y_hat
/// (member target mean).
struct GranularRegressionBall {
    Vector center;
    double radius = 0.0;
    double y_hat = 0.0;
    int cardinality = 0;
    int majority_label = 1;         // in [1, k]
    double quality = 1.0;           // majority count / cardinality
    std::vector<int> member_indices;
    bool unsplittable_impure = false; // identical rows with mixed labels
};

struct BallSet {
    std::vector<GranularRegressionBall> balls;
    int source_m = 0;
    GranulationConfig config;

    Index size() const { return static_cast<Index>(balls.size()); }
    Matrix centers() const; // n x l
    Vector radii() const;
    Vector ball_targets() const;
};

/// Rank-based quantile labels in [1, k]. Ties keep their original row order,
/// so equal values fall into the lower bin of their sorted position.
std::vector<int> quantile_labels(const Vector& targets, int k);

/// Deterministic 2-means (Lloyd) split of the given points. Initial centers
/// are the mutually farthest pair among min(n, 64) seeded samples. Returns
/// two non-empty index sets into `points`. Throws NumericError when all
/// points coincide.
std::pair<std::vector<int>, std::vector<int>> two_means_split(const Matrix& points,
                                                              std::uint64_t seed);

/// Summarizes one member set into a ball; labels are the global quantile
/// labels of the full dataset. Majority ties break toward the smaller label.
GranularRegressionBall ball_stats(const Dataset& d, const std::vector<int>& members,
                                  const std::vector<int>& labels,
                                  RadiusRule rule = RadiusRule::mean_distance);

/// Queue-driven recursive 2-means splitting: a ball splits while its quality
/// is below the threshold, it holds more than min_points samples, and its
/// rows are not all identical. Largest balls are processed first. The output
/// balls partition the input rows.
BallSet generate_balls(const Dataset& d, const GranulationConfig& cfg);

/// Diagnostic value of the generation objective sum(m / |ball|) + n.
double generation_objective(const BallSet& bs);

/// One row per ball: center components, radius, y_hat, cardinality, quality.
void export_balls_csv(const BallSet& bs, const std::string& path);

} // namespace gbsvr
