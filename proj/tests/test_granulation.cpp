#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gbsvr/granulation.hpp"
#include "gbsvr/rng.hpp"
#include "test_util.hpp"

using namespace gbsvr;

namespace {

Dataset one_dim(std::initializer_list<double> xs, std::initializer_list<double> ys) {
    Dataset d;
    d.features.resize(static_cast<Index>(xs.size()), 1);
    d.targets.resize(static_cast<Index>(ys.size()));
    Index i = 0;
    for (double x : xs) d.features(i++, 0) = x;
    i = 0;
    for (double y : ys) d.targets[i++] = y;
    return d;
}

// Independent oracle: best 2-partition by within-cluster sum of squared
// distances, found by enumerating every assignment.
std::pair<std::set<int>, std::set<int>> brute_force_two_split(const Matrix& pts) {
    const auto n = static_cast<int>(pts.rows());
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::set<int>, std::set<int>> winner;
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
        Vector c0 = Vector::Zero(pts.cols());
        Vector c1 = Vector::Zero(pts.cols());
        int n0 = 0, n1 = 0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1 << i)) {
                c0 += pts.row(i).transpose();
                ++n0;
            } else {
                c1 += pts.row(i).transpose();
                ++n1;
            }
        }
        c0 /= n0;
        c1 /= n1;
        double sse = 0.0;
        for (int i = 0; i < n; ++i) {
            const Vector& c = (mask & (1 << i)) ? c0 : c1;
            sse += (pts.row(i).transpose() - c).squaredNorm();
        }
        if (sse < best) {
            best = sse;
            winner.first.clear();
            winner.second.clear();
            for (int i = 0; i < n; ++i) {
                (mask & (1 << i) ? winner.first : winner.second).insert(i);
            }
        }
    }
    return winner;
}

} // namespace

TEST_CASE("quantile labels split sorted values at the median") {
    Vector t(4);
    t << 1, 2, 3, 4;
    CHECK(quantile_labels(t, 2) == std::vector<int>{1, 1, 2, 2});
}

TEST_CASE("quantile labels follow rank order, not input order") {
    Vector t(4);
    t << 3, 1, 4, 2;
    CHECK(quantile_labels(t, 2) == std::vector<int>{2, 1, 2, 1});
}

TEST_CASE("quantile labels break ties by original index") {
    Vector t(4);
    t << 5, 5, 5, 5;
    CHECK(quantile_labels(t, 2) == std::vector<int>{1, 1, 2, 2});
}

TEST_CASE("quantile labels reject k above the sample count") {
    Vector t(3);
    t << 1, 2, 3;
    CHECK_THROWS_AS(quantile_labels(t, 4), std::invalid_argument);
}

TEST_CASE("two_means_split separates the obvious 1-D clusters") {
    Matrix pts(4, 1);
    pts << 0, 1, 10, 11;
    auto [left, right] = two_means_split(pts, 3);
    std::set<int> a(left.begin(), left.end());
    std::set<int> b(right.begin(), right.end());
    const auto oracle = brute_force_two_split(pts);
    const bool same = (a == oracle.first && b == oracle.second) ||
                      (a == oracle.second && b == oracle.first);
    CHECK(same);
}

TEST_CASE("two_means_split of two points yields singletons") {
    Matrix pts(2, 2);
    pts << 0, 0, 1, 1;
    auto [left, right] = two_means_split(pts, 0);
    CHECK(left.size() == 1);
    CHECK(right.size() == 1);
}

TEST_CASE("two_means_split refuses identical points") {
    Matrix pts(3, 1);
    pts << 0, 0, 0;
    CHECK_THROWS_WITH_AS(two_means_split(pts, 0),
                         doctest::Contains("unsplittable"), NumericError);
}

TEST_CASE("ball_stats on a singleton") {
    const Dataset d = one_dim({2.5}, {7.0});
    const auto ball = ball_stats(d, {0}, {1});
    CHECK(ball.center[0] == doctest::Approx(2.5));
    CHECK(ball.radius == doctest::Approx(0.0));
    CHECK(ball.y_hat == doctest::Approx(7.0));
    CHECK(ball.quality == doctest::Approx(1.0));
    CHECK(ball.cardinality == 1);
}

TEST_CASE("ball_stats of a symmetric pair uses the mean distance") {
    Dataset d;
    d.features.resize(2, 2);
    d.features << 0, 0, 2, 0;
    d.targets.resize(2);
    d.targets << 1, 3;
    const auto ball = ball_stats(d, {0, 1}, {1, 1});
    CHECK(ball.center[0] == doctest::Approx(1.0));
    CHECK(ball.center[1] == doctest::Approx(0.0));
    CHECK(ball.radius == doctest::Approx(1.0));
    CHECK(ball.y_hat == doctest::Approx(2.0));
    CHECK(ball.quality == doctest::Approx(1.0));
}

TEST_CASE("ball_stats counts the majority label") {
    const Dataset d = one_dim({0, 1, 2}, {0, 0, 1});
    const auto ball = ball_stats(d, {0, 1, 2}, {1, 1, 2});
    CHECK(ball.quality == doctest::Approx(2.0 / 3.0));
    CHECK(ball.majority_label == 1);
}

TEST_CASE("ball_stats majority ties break toward the smaller label") {
    const Dataset d = one_dim({0, 1}, {0, 1});
    const auto ball = ball_stats(d, {0, 1}, {2, 1});
    CHECK(ball.majority_label == 1);
    CHECK(ball.quality == doctest::Approx(0.5));
}

TEST_CASE("ball_stats max-distance rule takes the farthest member") {
    const Dataset d = one_dim({0, 1, 5}, {0, 0, 0});
    const auto ball = ball_stats(d, {0, 1, 2}, {1, 1, 1}, RadiusRule::max_distance);
    CHECK(ball.radius == doctest::Approx(3.0));
}

TEST_CASE("ball_stats rejects an empty member set") {
    const Dataset d = one_dim({0}, {0});
    CHECK_THROWS_AS(ball_stats(d, {}, {1}), std::invalid_argument);
}

TEST_CASE("generate_balls separates two tight clusters into pure balls") {
    const Dataset d = one_dim({0.0, 0.1, 10.0, 10.1}, {1.0, 1.1, 5.0, 5.1});
    GranulationConfig cfg;
    cfg.purity_threshold = 1.0;
    cfg.min_points = 1;
    cfg.label_count = 2;
    const BallSet bs = generate_balls(d, cfg);
    REQUIRE(bs.size() == 2);
    for (const auto& ball : bs.balls) {
        CHECK(ball.quality == doctest::Approx(1.0));
        CHECK(ball.cardinality == 2);
    }
    CHECK(bs.balls[0].y_hat == doctest::Approx(1.05));
    CHECK(bs.balls[1].y_hat == doctest::Approx(5.05));
}

TEST_CASE("generate_balls on a single row returns one singleton ball") {
    const Dataset d = one_dim({3.0}, {2.0});
    GranulationConfig cfg;
    const BallSet bs = generate_balls(d, cfg);
    REQUIRE(bs.size() == 1);
    CHECK(bs.balls[0].radius == doctest::Approx(0.0));
    CHECK(bs.balls[0].quality == doctest::Approx(1.0));
}

TEST_CASE("a threshold at or below any quality keeps the root ball whole") {
    // The lowest legal threshold: any ball with a strict majority stops.
    const Dataset d = one_dim({0, 1, 2, 3}, {1, 1, 1, 9});
    GranulationConfig cfg;
    cfg.purity_threshold = 0.5 + 1e-9;
    cfg.min_points = 1;
    cfg.label_count = 2;
    const BallSet bs = generate_balls(d, cfg);
    CHECK(bs.size() == 1); // root quality 3/4 already clears the bar
}

TEST_CASE("granulation config validation rejects out-of-range thresholds") {
    GranulationConfig cfg;
    cfg.purity_threshold = 0.5;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.purity_threshold = 1.1;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.purity_threshold = 0.9;
    cfg.min_points = 0;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("unsplittable impure balls are flagged, not fatal") {
    Dataset d;
    d.features.resize(4, 1);
    d.features << 1, 1, 1, 1; // identical rows
    d.targets.resize(4);
    d.targets << 1, 2, 3, 4; // four different labels
    GranulationConfig cfg;
    cfg.purity_threshold = 0.99;
    cfg.min_points = 1;
    cfg.label_count = 4;
    const BallSet bs = generate_balls(d, cfg);
    REQUIRE(bs.size() == 1);
    CHECK(bs.balls[0].unsplittable_impure);
    CHECK(bs.balls[0].quality < cfg.purity_threshold);
}

TEST_CASE("generated balls partition the rows and honor the stopping rule") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const Dataset d = test_util::random_dataset(120, 2, seed);
        GranulationConfig cfg;
        cfg.purity_threshold = 0.9;
        cfg.min_points = 3;
        cfg.label_count = 5;
        cfg.seed = seed;
        const BallSet bs = generate_balls(d, cfg);

        std::vector<int> seen(120, 0);
        for (const auto& ball : bs.balls) {
            const bool stopped = ball.quality >= cfg.purity_threshold ||
                                 ball.cardinality <= cfg.min_points ||
                                 ball.unsplittable_impure;
            CHECK(stopped);
            for (int idx : ball.member_indices) ++seen[idx];
        }
        for (int count : seen) CHECK(count == 1);
        CHECK(bs.size() >= 1);
        CHECK(bs.size() <= 120);
    }
}

TEST_CASE("generate_balls is deterministic for a fixed seed") {
    const Dataset d = test_util::random_dataset(80, 3, 7);
    GranulationConfig cfg;
    cfg.purity_threshold = 0.95;
    cfg.min_points = 2;
    cfg.seed = 99;
    const BallSet a = generate_balls(d, cfg);
    const BallSet b = generate_balls(d, cfg);
    REQUIRE(a.size() == b.size());
    for (Index i = 0; i < a.size(); ++i) {
        CHECK(a.balls[i].member_indices == b.balls[i].member_indices);
        CHECK(a.balls[i].center == b.balls[i].center);
    }
}

TEST_CASE("stored ball statistics match direct recomputation") {
    const Dataset d = test_util::random_dataset(60, 2, 13);
    GranulationConfig cfg;
    cfg.purity_threshold = 0.9;
    cfg.min_points = 2;
    cfg.label_count = 4;
    const BallSet bs = generate_balls(d, cfg);
    const auto labels = quantile_labels(d.targets, 4);
    for (const auto& ball : bs.balls) {
        Vector center = Vector::Zero(d.cols());
        double y_sum = 0.0;
        for (int idx : ball.member_indices) {
            center += d.features.row(idx).transpose();
            y_sum += d.targets[idx];
        }
        center /= ball.cardinality;
        double dist_sum = 0.0;
        std::map<int, int> counts;
        for (int idx : ball.member_indices) {
            dist_sum += (d.features.row(idx).transpose() - center).norm();
            ++counts[labels[idx]];
        }
        int majority = 0;
        for (const auto& [lab, count] : counts) {
            if (majority == 0 || count > counts[majority]) majority = lab;
        }
        CHECK((ball.center - center).norm() < 1e-9);
        CHECK(ball.radius == doctest::Approx(dist_sum / ball.cardinality).epsilon(1e-9));
        CHECK(ball.y_hat == doctest::Approx(y_sum / ball.cardinality).epsilon(1e-9));
        CHECK(ball.majority_label == majority);
        CHECK(ball.quality ==
              doctest::Approx(static_cast<double>(counts[majority]) / ball.cardinality));
    }
}

TEST_CASE("majority labels survive label flips below the quality margin") {
    // A ball with quality q > 0.5 keeps its majority label under any
    // adversarial flip of strictly fewer than cardinality * (q - 0.5)
    // members, even when every flip feeds the strongest competitor.
    Rng rng(314);
    int tested = 0;
    for (int trial = 0; trial < 400 && tested < 100; ++trial) {
        const int card = 10 + static_cast<int>(rng.next_below(40));
        const int k = 4;
        const int majority = 1 + static_cast<int>(rng.next_below(k));
        const int majority_count =
            static_cast<int>(std::ceil(card * rng.next_uniform(0.55, 0.95)));
        std::vector<int> counts(k + 1, 0);
        counts[majority] = majority_count;
        for (int i = majority_count; i < card; ++i) {
            int other = 1 + static_cast<int>(rng.next_below(k - 1));
            if (other >= majority) ++other;
            ++counts[other];
        }
        int top_other = 0;
        for (int lab = 1; lab <= k; ++lab) {
            if (lab != majority) top_other = std::max(top_other, counts[lab]);
        }
        if (majority_count <= top_other || 2 * majority_count <= card) continue;
        ++tested;

        const double quality = static_cast<double>(majority_count) / card;
        const int flips = std::max(
            0, static_cast<int>(std::ceil(card * (quality - 0.5))) - 1);

        // Worst case: every flip moves a majority member to the runner-up.
        int runner_up = 0;
        for (int lab = 1; lab <= k; ++lab) {
            if (lab != majority && (runner_up == 0 || counts[lab] > counts[runner_up])) {
                runner_up = lab;
            }
        }
        counts[majority] -= flips;
        counts[runner_up] += flips;
        for (int lab = 1; lab <= k; ++lab) {
            if (lab != majority) CHECK(counts[majority] > counts[lab]);
        }
    }
    CHECK(tested >= 100);
}

TEST_CASE("splitting strictly shrinks the larger child") {
    const Dataset d = test_util::random_dataset(50, 2, 17);
    GranulationConfig cfg;
    cfg.purity_threshold = 0.99;
    cfg.min_points = 1;
    cfg.label_count = 10;
    const BallSet bs = generate_balls(d, cfg);
    int max_card = 0;
    for (const auto& ball : bs.balls) max_card = std::max(max_card, ball.cardinality);
    CHECK(max_card < 50); // the root was split at least once and both children shrank
}
