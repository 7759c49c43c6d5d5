#pragma once

#include <array>
#include <cstdint>

#include "osmosis/drift.hpp"
#include "osmosis/field.hpp"

namespace osmosis {

/// Smooth strictly positive test image in [lo, hi]: a low-frequency ramp plus
/// a few seeded Gaussian blobs.
ScalarField smooth_ground_truth(int width, int height, std::uint64_t seed, double lo, double hi);

/// Copy with the pixels selected by `band` set to the band's mean value, so
/// gated faces placed inside the band carry no jump.
ScalarField flatten_band(const ScalarField& field, const std::vector<bool>& band);

/// Uniform random field in [lo, hi].
ScalarField random_field(int width, int height, std::uint64_t seed, double lo, double hi);

/// Uniform random drift with |d| * h <= max_abs_h.
DriftField random_drift(int width, int height, std::uint64_t seed, double max_abs_h = 1.9,
                        double spacing = 1.0);

/// Centered rectangular shadow mask fixture: clean image, the same image
/// multiplied by `multiplier` inside the mask, and the mask.
struct ShadowFixture {
    ScalarField clean;
    ScalarField shadowed;
    LabelMap mask;
};
ShadowFixture make_shadow_fixture(int width, int height, std::uint64_t seed, double multiplier);

/// 2x2 tile mosaic fixture: clean image, per-tile gains applied, tile map.
struct MosaicFixture {
    ScalarField clean;
    ScalarField mosaic;
    LabelMap tiles;
};
MosaicFixture make_mosaic_fixture(int width, int height, std::uint64_t seed,
                                  const std::array<double, 4>& gains);

/// Pixels within Chebyshev distance `band` of a label change.
std::vector<bool> label_boundary_band(const LabelMap& labels, int band);

/// ||a - c*b||_2 / ||c*b||_2 with c the least-squares scale fit of a onto b,
/// restricted to pixels where include[] is true (empty include = all pixels).
double relative_rmse_up_to_scale(const ScalarField& a, const ScalarField& b,
                                 const std::vector<bool>& include = {});

/// Pearson correlation between two fields over the included pixels.
double pearson_correlation(const ScalarField& a, const ScalarField& b,
                           const std::vector<bool>& include = {});

} // namespace osmosis
