#pragma once

#include <cstdint>

#include "gbsvr/dataset.hpp"
#include "gbsvr/types.hpp"

namespace gbsvr {

/// Synthetic families: A is the cardinal sine on [-4, 4], B the cosine wave
/// on [-1, 1].
enum class SyntheticFamily { sinc_a, cosine_b };

/// Heteroscedastic noise menu, all sharing the envelope -|x|/8 + 0.5:
///   1: N(0, 0.15^2)   2: U[-0.25, 0.25]
///   3: N(0, 0.02^2)   4: U[-0.02, 0.02]
///   5: N(0, 0.12^2)   6: U[-0.2, 0.2]
struct NoiseSpec {
    int noise_type = 1; // 1..6
    std::uint64_t seed = 0;
};

struct SyntheticSpec {
    SyntheticFamily family = SyntheticFamily::sinc_a;
    int m = 1000;
    NoiseSpec noise;
};

/// Noise-free value of the family at x (sinc has the removable singularity
/// patched to 1 at x = 0).
double clean_value(SyntheticFamily family, double x);

/// Input-dependent noise amplitude factor, -|x|/8 + 0.5.
double noise_envelope(double x);

Dataset gen_synthetic(const SyntheticSpec& spec);

/// Noise-free samples of the family; same x-draw scheme as gen_synthetic.
Dataset gen_clean(SyntheticFamily family, int m, std::uint64_t seed);

/// Adds N(0, sigma^2) to the targets of exactly round(fraction * m) distinct
/// rows, chosen by a seeded shuffle; all other rows are untouched.
Dataset inject_target_noise(const Dataset& d, double fraction, double sigma,
                            std::uint64_t seed);

} // namespace gbsvr
