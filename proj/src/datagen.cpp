#include "gbsvr/datagen.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "gbsvr/rng.hpp"

namespace gbsvr {

double clean_value(SyntheticFamily family, double x) {
    if (family == SyntheticFamily::sinc_a) {
        if (x == 0.0) return 1.0;
        const double px = std::numbers::pi * x;
        return std::sin(px) / px;
    }
    return std::cos(std::numbers::pi * x);
}

double noise_envelope(double x) { return -std::abs(x) / 8.0 + 0.5; }

namespace {

double draw_noise_factor(int noise_type, Rng& rng) {
    switch (noise_type) {
        case 1: return 0.15 * rng.next_gaussian();
        case 2: return rng.next_uniform(-0.25, 0.25);
        case 3: return 0.02 * rng.next_gaussian();
        case 4: return rng.next_uniform(-0.02, 0.02);
        case 5: return 0.12 * rng.next_gaussian();
        case 6: return rng.next_uniform(-0.2, 0.2);
        default:
            throw std::invalid_argument("noise_type must be in [1, 6]");
    }
}

std::pair<double, double> family_interval(SyntheticFamily family) {
    return family == SyntheticFamily::sinc_a ? std::pair{-4.0, 4.0}
                                             : std::pair{-1.0, 1.0};
}

} // namespace

Dataset gen_synthetic(const SyntheticSpec& spec) {
    if (spec.m < 1) throw std::invalid_argument("gen_synthetic: m must be >= 1");
    if (spec.noise.noise_type < 1 || spec.noise.noise_type > 6) {
        throw std::invalid_argument("noise_type must be in [1, 6]");
    }
    const auto [lo, hi] = family_interval(spec.family);

    Rng rng(spec.noise.seed);
    Dataset d;
    d.features.resize(spec.m, 1);
    d.targets.resize(spec.m);
    for (int i = 0; i < spec.m; ++i) {
        const double x = rng.next_uniform(lo, hi);
        const double eta =
            noise_envelope(x) * draw_noise_factor(spec.noise.noise_type, rng);
        d.features(i, 0) = x;
        d.targets[i] = clean_value(spec.family, x) + eta;
    }
    d.feature_names = {"x"};
    return d;
}

Dataset gen_clean(SyntheticFamily family, int m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("gen_clean: m must be >= 1");
    const auto [lo, hi] = family_interval(family);
    Rng rng(seed);
    Dataset d;
    d.features.resize(m, 1);
    d.targets.resize(m);
    for (int i = 0; i < m; ++i) {
        const double x = rng.next_uniform(lo, hi);
        d.features(i, 0) = x;
        d.targets[i] = clean_value(family, x);
    }
    d.feature_names = {"x"};
    return d;
}

Dataset inject_target_noise(const Dataset& d, double fraction, double sigma,
                            std::uint64_t seed) {
    validate(d);
    if (fraction < 0.0 || fraction > 1.0) {
        throw std::invalid_argument("noise fraction must lie in [0, 1]");
    }
    const auto m = static_cast<int>(d.rows());
    const auto count = static_cast<int>(std::llround(fraction * m));

    Dataset out = d;
    if (count == 0) return out;

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    for (int i = 0; i < count; ++i) {
        out.targets[order[i]] += sigma * rng.next_gaussian();
    }
    return out;
}

} // namespace gbsvr
