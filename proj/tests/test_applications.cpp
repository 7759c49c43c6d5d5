#include <doctest.h>

#include <cmath>

#include "osmosis/applications.hpp"
#include "osmosis/errors.hpp"
#include "osmosis/synthetic.hpp"

using namespace osmosis;

namespace {

PipelineParams fast_params() {
    PipelineParams p;
    p.scheme.tau = 1000.0;
    p.scheme.steady_tol = 1e-10;
    p.scheme.max_steps = 800;
    return p;
}

double sup_rel_diff(const ScalarField& a, const ScalarField& b) {
    double scale = 0.0;
    for (double v : b.values) scale = std::max(scale, std::abs(v));
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    }
    return worst / std::max(scale, 1e-300);
}

MultiChannelImage single(const ScalarField& f) {
    return MultiChannelImage({f}, ChannelKind::Gray);
}

std::vector<bool> invert(std::vector<bool> mask) {
    for (auto&& b : mask) b = !b;
    return mask;
}

} // namespace

TEST_SUITE("applications") {

TEST_CASE("shadow removal with an empty mask is the identity") {
    const ScalarField img = smooth_ground_truth(48, 40, 1, 20.0, 250.0);
    const LabelMap mask(48, 40, 0);
    const auto out = remove_shadow(single(img), mask, fast_params());
    CHECK(sup_rel_diff(out.image.channels[0], img) <= 1e-9);
}

TEST_CASE("shadow removal recovers a multiplicative shadow") {
    const ShadowFixture fx = make_shadow_fixture(128, 128, 7, 0.4);
    const auto out = remove_shadow(single(fx.shadowed), fx.mask, fast_params());
    const std::vector<bool> exclude = label_boundary_band(fx.mask, 2);
    const double err =
        relative_rmse_up_to_scale(out.image.channels[0], fx.clean, invert(exclude));
    CHECK(err <= 0.02);
}

TEST_CASE("degenerate shadow multiplier leaves the image alone") {
    ShadowFixture fx = make_shadow_fixture(64, 64, 9, 1.0);
    // no jump across the gated faces: flatten the boundary band
    fx.clean = flatten_band(fx.clean, label_boundary_band(fx.mask, 1));
    fx.shadowed = fx.clean;
    const auto out = remove_shadow(single(fx.shadowed), fx.mask, fast_params());
    CHECK(sup_rel_diff(out.image.channels[0], fx.shadowed) <= 1e-6);
}

TEST_CASE("mosaic balancing with a single tile is the identity") {
    const ScalarField img = smooth_ground_truth(40, 40, 11, 30.0, 200.0);
    const auto out = balance_mosaic(single(img), LabelMap(40, 40, 5), fast_params());
    CHECK(sup_rel_diff(out.image.channels[0], img) <= 1e-9);
}

TEST_CASE("mosaic balancing equalizes per-tile gains") {
    const MosaicFixture fx = make_mosaic_fixture(128, 128, 13, {0.8, 1.0, 1.2, 1.5});
    const auto out = balance_mosaic(single(fx.mosaic), fx.tiles, fast_params());
    const std::vector<bool> exclude = label_boundary_band(fx.tiles, 2);
    const double err =
        relative_rmse_up_to_scale(out.image.channels[0], fx.clean, invert(exclude));
    CHECK(err <= 0.02);
}

TEST_CASE("equal tile gains leave the image alone") {
    MosaicFixture fx = make_mosaic_fixture(64, 64, 15, {1.0, 1.0, 1.0, 1.0});
    fx.clean = flatten_band(fx.clean, label_boundary_band(fx.tiles, 1));
    fx.mosaic = fx.clean;
    const auto out = balance_mosaic(single(fx.mosaic), fx.tiles, fast_params());
    CHECK(sup_rel_diff(out.image.channels[0], fx.mosaic) <= 1e-6);
}

TEST_CASE("fusing an image with itself returns it") {
    const ScalarField img = smooth_ground_truth(32, 32, 17, 10.0, 90.0);
    const auto out = fuse(single(img), single(img), fast_params());
    CHECK(sup_rel_diff(out.image.channels[0], img) <= 1e-9);
}

TEST_CASE("constant init fuses to the rescaled guide") {
    const ScalarField guide = smooth_ground_truth(64, 64, 19, 5.0, 50.0);
    const ScalarField init(64, 64, 12.0);
    PipelineParams p = fast_params();
    p.scheme.steady_tol = 1e-12;
    const auto out = fuse(single(init), single(guide), p);
    const double c = total_mass(init) / total_mass(guide);
    ScalarField expect = guide;
    for (double& v : expect.values) v *= c;
    CHECK(sup_rel_diff(out.image.channels[0], expect) <= 1e-6);
}

TEST_CASE("constant guide diffuses to the mean") {
    const ScalarField init = smooth_ground_truth(32, 32, 21, 5.0, 60.0);
    const ScalarField guide(32, 32, 3.0);
    PipelineParams p = fast_params();
    p.scheme.steady_tol = 1e-12;
    const auto out = fuse(single(init), single(guide), p);
    const double mean = total_mass(init) / static_cast<double>(init.size());
    for (double v : out.image.channels[0].values) {
        CHECK(std::abs(v - mean) <= 1e-6 * mean);
    }
}

TEST_CASE("guide broadcast and channel mismatch") {
    std::vector<ScalarField> three;
    for (std::uint64_t s = 0; s < 3; ++s) {
        three.push_back(smooth_ground_truth(24, 24, 23 + s, 5.0, 50.0));
    }
    const MultiChannelImage init(std::move(three), ChannelKind::Rgb);
    const ScalarField g = smooth_ground_truth(24, 24, 29, 5.0, 50.0);
    const auto out = fuse(init, single(g), fast_params());
    CHECK(out.image.channel_count() == 3);

    std::vector<ScalarField> two(2, ScalarField(24, 24, 1.0));
    const MultiChannelImage guide2(std::move(two));
    CHECK_THROWS_AS(fuse(init, guide2, fast_params()), DimensionError);
    CHECK_THROWS_AS(fuse(init, single(ScalarField(25, 24, 1.0)), fast_params()),
                    DimensionError);
}

TEST_CASE("fuse requires strictly positive inputs") {
    const ScalarField ok(16, 16, 2.0);
    ScalarField bad(16, 16, 2.0);
    bad.at(3, 3) = 0.0;
    CHECK_THROWS_AS(fuse(single(bad), single(ok), fast_params()), ValueError);
    CHECK_THROWS_AS(fuse(single(ok), single(bad), fast_params()), ValueError);
}

TEST_CASE("pipelines conserve the working mass end to end") {
    const MosaicFixture fx = make_mosaic_fixture(64, 64, 31, {0.7, 1.0, 1.3, 1.1});
    for (RescalePolicy policy : {RescalePolicy::Clamp, RescalePolicy::Renormalize}) {
        PipelineParams p = fast_params();
        p.rescale = policy;
        const auto out = balance_mosaic(single(fx.mosaic), fx.tiles, p);
        // strictly positive input: the working image is the input itself
        const double before = total_mass(fx.mosaic);
        const double after = total_mass(out.image.channels[0]);
        CHECK(std::abs(after - before) <= 1e-8 * before);
    }
}

TEST_CASE("pipelines commute with global scaling") {
    const ShadowFixture fx = make_shadow_fixture(48, 48, 33, 0.5);
    PipelineParams p = fast_params();
    const double c = 3.5;

    const auto base = remove_shadow(single(fx.shadowed), fx.mask, p);
    ScalarField scaled_in = fx.shadowed;
    for (double& v : scaled_in.values) v *= c;
    const auto scaled = remove_shadow(single(scaled_in), fx.mask, p);

    ScalarField expect = base.image.channels[0];
    for (double& v : expect.values) v *= c;
    CHECK(sup_rel_diff(scaled.image.channels[0], expect) <= 1e-8);
}

TEST_CASE("channel count and dimensions are validated") {
    const ScalarField img = smooth_ground_truth(32, 24, 35, 10.0, 100.0);
    CHECK_THROWS_AS(remove_shadow(single(img), LabelMap(32, 25), fast_params()),
                    DimensionError);
    LabelMap nonbinary(32, 24, 0);
    nonbinary.at(0, 0) = 3;
    CHECK_THROWS_AS(remove_shadow(single(img), nonbinary, fast_params()), ValueError);
    CHECK_THROWS_AS(balance_mosaic(single(img), LabelMap(31, 24), fast_params()),
                    DimensionError);
    PipelineParams bad = fast_params();
    bad.offset = 0.0;
    CHECK_THROWS_AS(balance_mosaic(single(img), LabelMap(32, 24), bad), ValueError);
}

TEST_CASE("multi-channel images are processed channel by channel") {
    const ShadowFixture fx = make_shadow_fixture(40, 40, 37, 0.5);
    ScalarField second = fx.shadowed;
    for (double& v : second.values) v *= 0.5;
    const MultiChannelImage img({fx.shadowed, second, fx.shadowed}, ChannelKind::Rgb);
    const auto out = remove_shadow(img, fx.mask, fast_params());
    REQUIRE(out.image.channel_count() == 3);
    REQUIRE(out.reports.size() == 3);
    // identical channels up to scale give identical outputs up to scale
    ScalarField expect = out.image.channels[0];
    for (double& v : expect.values) v *= 0.5;
    CHECK(sup_rel_diff(out.image.channels[1], expect) <= 1e-8);
}

} // TEST_SUITE
