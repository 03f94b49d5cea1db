#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gbsvr/types.hpp"

namespace gbsvr {

/// A regression sample set: m feature rows of width l plus one target per row.
struct Dataset {
    Matrix features;                        // m x l
    Vector targets;                         // m
    std::vector<std::string> feature_names; // empty, or one label per column

    Index rows() const { return features.rows(); }
    Index cols() const { return features.cols(); }
};

/// Throws DataError if the Dataset invariants are violated (empty, ragged
/// naming, or non-finite entries).
void validate(const Dataset& d);

/// Per-column z-score parameters fitted on a training set. Zero-variance
/// columns keep std = 1 so the transform is the identity on them.
struct Standardization {
    Vector feature_means;
    Vector feature_stds;
    double target_mean = 0.0;
    double target_std = 1.0;

    Matrix transform_features(const Matrix& x) const;
    Matrix inverse_features(const Matrix& x) const;
    Vector transform_targets(const Vector& y) const;
    Vector inverse_targets(const Vector& y) const;
    double transform_target(double y) const { return (y - target_mean) / target_std; }
    double inverse_target(double y) const { return y * target_std + target_mean; }
    Dataset transform(const Dataset& d) const;
};

/// Fits standardization on d (population moments) and returns the
/// standardized copy together with the fitted parameters. Requires m >= 2.
std::pair<Dataset, Standardization> fit_standardize(const Dataset& d);

/// Assignment of every row to one of fold_count folds.
struct FoldPlan {
    int fold_count = 0;
    std::vector<int> assignments; // per-row fold id in [0, fold_count)

    std::vector<int> fold(int f) const;       // rows assigned to fold f
    std::vector<int> complement(int f) const; // rows outside fold f
};

/// Deterministic shuffled k-fold plan; fold sizes differ by at most one.
FoldPlan kfold(const Dataset& d, int k, std::uint64_t seed);

/// Splits into (train, test) with train row count floor(m * train_fraction).
/// With shuffle off the train side is the row prefix. Throws if either side
/// would be empty.
std::pair<Dataset, Dataset> train_test_split(const Dataset& d, double train_fraction,
                                             bool shuffle, std::uint64_t seed);

/// Row subset in the given order.
Dataset subset(const Dataset& d, const std::vector<int>& row_indices);

/// CSV ingestion: comma-separated numeric cells, last column is the target.
Dataset load_csv(const std::string& path, bool has_header);

/// CSV output, 12 significant digits. Writes a header row when the dataset
/// carries feature names or with_header is forced.
void write_csv(const Dataset& d, const std::string& path, bool with_header = false);

} // namespace gbsvr
