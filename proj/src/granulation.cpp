#include "gbsvr/granulation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>

#include "gbsvr/rng.hpp"

namespace gbsvr {

void validate(const GranulationConfig& cfg) {
    if (!(cfg.purity_threshold > 0.5 && cfg.purity_threshold <= 1.0)) {
        throw std::invalid_argument("purity_threshold must lie in (0.5, 1]");
    }
    if (cfg.min_points < 1) {
        throw std::invalid_argument("min_points must be >= 1");
    }
    if (cfg.label_count < 2) {
        throw std::invalid_argument("label_count must be >= 2");
    }
}

Matrix BallSet::centers() const {
    const Index n = size();
    const Index l = n > 0 ? balls.front().center.size() : 0;
    Matrix c(n, l);
    for (Index i = 0; i < n; ++i) c.row(i) = balls[static_cast<std::size_t>(i)].center;
    return c;
}

Vector BallSet::radii() const {
    Vector r(size());
    for (Index i = 0; i < size(); ++i) r[i] = balls[static_cast<std::size_t>(i)].radius;
    return r;
}

Vector BallSet::ball_targets() const {
    Vector y(size());
    for (Index i = 0; i < size(); ++i) y[i] = balls[static_cast<std::size_t>(i)].y_hat;
    return y;
}

std::vector<int> quantile_labels(const Vector& targets, int k) {
    const auto m = static_cast<int>(targets.size());
    if (k < 2) throw std::invalid_argument("quantile_labels: k must be >= 2");
    if (k > m) throw std::invalid_argument("quantile_labels: k exceeds sample count");

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return targets[a] < targets[b]; });

    std::vector<int> labels(m);
    for (int pos = 0; pos < m; ++pos) {
        labels[order[pos]] =
            static_cast<int>((static_cast<long long>(pos) * k) / m) + 1;
    }
    return labels;
}

namespace {

bool all_rows_identical(const Matrix& points) {
    for (Index i = 1; i < points.rows(); ++i) {
        if (points.row(i) != points.row(0)) return false;
    }
    return true;
}

} // namespace

std::pair<std::vector<int>, std::vector<int>> two_means_split(const Matrix& points,
                                                              std::uint64_t seed) {
    const auto n = static_cast<int>(points.rows());
    if (n < 2) throw std::invalid_argument("two_means_split needs at least 2 points");
    if (all_rows_identical(points)) throw NumericError("unsplittable ball");

    // Seeded candidate pool for the farthest-pair initialization.
    std::vector<int> candidates(n);
    std::iota(candidates.begin(), candidates.end(), 0);
    constexpr int kMaxCandidates = 64;
    if (n > kMaxCandidates) {
        Rng rng(seed);
        rng.shuffle(candidates);
        candidates.resize(kMaxCandidates);
        std::sort(candidates.begin(), candidates.end());
    }

    int init_a = candidates[0], init_b = candidates[1];
    double best_dist = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            const double d =
                (points.row(candidates[i]) - points.row(candidates[j])).squaredNorm();
            if (d > best_dist) {
                best_dist = d;
                init_a = candidates[i];
                init_b = candidates[j];
            }
        }
    }
    if (best_dist <= 0.0) {
        // Sampled pool collapsed onto one location; widen to the full set.
        for (int i = 0; i < n && best_dist <= 0.0; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double d = (points.row(i) - points.row(j)).squaredNorm();
                if (d > best_dist) {
                    best_dist = d;
                    init_a = i;
                    init_b = j;
                }
            }
        }
    }

    Matrix centers(2, points.cols());
    centers.row(0) = points.row(init_a);
    centers.row(1) = points.row(init_b);

    std::vector<int> assign(n, 0);
    constexpr int kMaxIter = 100;
    constexpr double kMoveTol = 1e-8;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        for (int i = 0; i < n; ++i) {
            const double d0 = (points.row(i) - centers.row(0)).squaredNorm();
            const double d1 = (points.row(i) - centers.row(1)).squaredNorm();
            assign[i] = d1 < d0 ? 1 : 0;
        }

        // Keep both clusters populated: donate the farthest point.
        for (int c = 0; c < 2; ++c) {
            if (std::count(assign.begin(), assign.end(), c) == 0) {
                const int other = 1 - c;
                int farthest = -1;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d = (points.row(i) - centers.row(other)).squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        farthest = i;
                    }
                }
                assign[farthest] = c;
            }
        }

        Matrix next = Matrix::Zero(2, points.cols());
        int counts[2] = {0, 0};
        for (int i = 0; i < n; ++i) {
            next.row(assign[i]) += points.row(i);
            ++counts[assign[i]];
        }
        next.row(0) /= counts[0];
        next.row(1) /= counts[1];

        const double moved = std::max((next.row(0) - centers.row(0)).norm(),
                                      (next.row(1) - centers.row(1)).norm());
        centers = next;
        if (moved <= kMoveTol) break;
    }

    std::vector<int> left, right;
    for (int i = 0; i < n; ++i) {
        (assign[i] == 0 ? left : right).push_back(i);
    }
    if (left.empty() || right.empty()) throw NumericError("unsplittable ball");
    return {left, right};
}

GranularRegressionBall ball_stats(const Dataset& d, const std::vector<int>& members,
                                  const std::vector<int>& labels, RadiusRule rule) {
    if (members.empty()) throw std::invalid_argument("ball_stats: empty member set");

    GranularRegressionBall ball;
    ball.member_indices = members;
    ball.cardinality = static_cast<int>(members.size());

    ball.center = Vector::Zero(d.cols());
    double target_sum = 0.0;
    for (int idx : members) {
        ball.center += d.features.row(idx).transpose();
        target_sum += d.targets[idx];
    }
    ball.center /= static_cast<double>(ball.cardinality);
    ball.y_hat = target_sum / static_cast<double>(ball.cardinality);

    double dist_acc = 0.0;
    for (int idx : members) {
        const double dist = (d.features.row(idx).transpose() - ball.center).norm();
        if (rule == RadiusRule::mean_distance) {
            dist_acc += dist;
        } else {
            dist_acc = std::max(dist_acc, dist);
        }
    }
    ball.radius = rule == RadiusRule::mean_distance
                      ? dist_acc / static_cast<double>(ball.cardinality)
                      : dist_acc;

    int max_label = 0;
    for (int idx : members) max_label = std::max(max_label, labels[idx]);
    std::vector<int> counts(static_cast<std::size_t>(max_label) + 1, 0);
    for (int idx : members) ++counts[labels[idx]];
    int best = 1;
    for (int lab = 1; lab <= max_label; ++lab) {
        if (counts[lab] > counts[best]) best = lab; // ties keep the smaller label
    }
    ball.majority_label = best;
    ball.quality =
        static_cast<double>(counts[best]) / static_cast<double>(ball.cardinality);
    return ball;
}

namespace {

struct PendingBall {
    GranularRegressionBall ball;
    std::uint64_t sequence = 0;
};

struct LargestFirst {
    bool operator()(const PendingBall& a, const PendingBall& b) const {
        if (a.ball.cardinality != b.ball.cardinality) {
            return a.ball.cardinality < b.ball.cardinality;
        }
        return a.sequence > b.sequence;
    }
};

} // namespace

BallSet generate_balls(const Dataset& d, const GranulationConfig& cfg) {
    validate(d);
    validate(cfg);
    const auto m = static_cast<int>(d.rows());

    // Bins cannot outnumber samples; a lone row gets the single label 1.
    std::vector<int> labels;
    const int k_eff = std::min(cfg.label_count, m);
    if (k_eff >= 2) {
        labels = quantile_labels(d.targets, k_eff);
    } else {
        labels.assign(static_cast<std::size_t>(m), 1);
    }

    std::priority_queue<PendingBall, std::vector<PendingBall>, LargestFirst> queue;
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    std::uint64_t sequence = 0;
    queue.push({ball_stats(d, all, labels, cfg.radius_rule), sequence++});

    std::vector<GranularRegressionBall> done;
    while (!queue.empty()) {
        PendingBall current = queue.top();
        queue.pop();
        auto& ball = current.ball;

        const bool needs_split =
            ball.quality < cfg.purity_threshold && ball.cardinality > cfg.min_points;
        if (!needs_split) {
            done.push_back(std::move(ball));
            continue;
        }

        Matrix pts(ball.cardinality, d.cols());
        for (int i = 0; i < ball.cardinality; ++i) {
            pts.row(i) = d.features.row(ball.member_indices[i]);
        }
        if (all_rows_identical(pts)) {
            ball.unsplittable_impure = true;
            done.push_back(std::move(ball));
            continue;
        }

        auto [left, right] = two_means_split(pts, mix_seed(cfg.seed, current.sequence));
        std::vector<int> left_members, right_members;
        for (int i : left) left_members.push_back(ball.member_indices[i]);
        for (int i : right) right_members.push_back(ball.member_indices[i]);
        if (left_members.front() > right_members.front()) {
            std::swap(left_members, right_members);
        }
        queue.push({ball_stats(d, left_members, labels, cfg.radius_rule), sequence++});
        queue.push({ball_stats(d, right_members, labels, cfg.radius_rule), sequence++});
    }

    std::sort(done.begin(), done.end(),
              [](const GranularRegressionBall& a, const GranularRegressionBall& b) {
                  return a.member_indices.front() < b.member_indices.front();
              });

    BallSet bs;
    bs.balls = std::move(done);
    bs.source_m = m;
    bs.config = cfg;
    return bs;
}

double generation_objective(const BallSet& bs) {
    double acc = static_cast<double>(bs.size());
    for (const auto& ball : bs.balls) {
        acc += static_cast<double>(bs.source_m) / static_cast<double>(ball.cardinality);
    }
    return acc;
}

void export_balls_csv(const BallSet& bs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    const Index l = bs.size() > 0 ? bs.balls.front().center.size() : 0;
    for (Index j = 0; j < l; ++j) out << "center_" << (j + 1) << ',';
    out << "radius,y_hat,cardinality,quality\n";
    char buf[64];
    for (const auto& ball : bs.balls) {
        for (Index j = 0; j < l; ++j) {
            std::snprintf(buf, sizeof(buf), "%.12g", ball.center[j]);
            out << buf << ',';
        }
        std::snprintf(buf, sizeof(buf), "%.12g", ball.radius);
        out << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.12g", ball.y_hat);
        out << buf << ',' << ball.cardinality << ',';
        std::snprintf(buf, sizeof(buf), "%.12g", ball.quality);
        out << buf << '\n';
    }
}

} // namespace gbsvr
