#include "osmosis/applications.hpp"

#include <cmath>

#include "osmosis/errors.hpp"

namespace osmosis {

namespace {
void check_params(const PipelineParams& p) {
    if (!(p.offset > 0.0) || !std::isfinite(p.offset)) {
        throw ValueError("offset must be positive and finite");
    }
    if (p.band < 0) {
        throw ValueError("band must be non-negative");
    }
}

// Shared core of the two self-guided pipelines: the drift comes from the
// channel itself, gated where jumps must be diffused away. A channel that is
// not strictly positive is shifted up for the evolution and shifted back on
// output.
PipelineResult run_self_guided(const MultiChannelImage& image, const LabelMap& map,
                               GateMode mode, const PipelineParams& p) {
    check_params(p);
    if (!map.matches(image.width(), image.height())) {
        throw DimensionError("label map dimensions do not match the image");
    }

    PipelineResult result;
    result.image.kind = image.kind;
    for (const ScalarField& channel : image.channels) {
        channel.require_finite("channel");
        const double shift = working_shift(channel, p.offset);
        const ScalarField work = (shift > 0.0) ? shift_to_positive(channel, shift) : channel;
        const DriftField d = pipeline_drift(channel, &map, mode, p);

        auto [u, report] = evolve(work, d, p.scheme);
        if (p.rescale == RescalePolicy::Renormalize) {
            const double scale = total_mass(work) / total_mass(u);
            for (double& v : u.values) v *= scale;
        }
        if (shift > 0.0) {
            for (double& v : u.values) v -= shift;
        }
        result.image.channels.push_back(std::move(u));
        result.reports.push_back(std::move(report));
    }
    return result;
}
} // namespace

double working_shift(const ScalarField& channel, double offset) {
    const double mn = min_value(channel);
    return (mn > 0.0) ? 0.0 : offset - mn;
}

DriftField pipeline_drift(const ScalarField& channel, const LabelMap* map, GateMode mode,
                          const PipelineParams& params) {
    check_params(params);
    const double shift = working_shift(channel, params.offset);
    const ScalarField work = (shift > 0.0) ? shift_to_positive(channel, shift) : channel;
    DriftField d = canonical_drift(work);
    switch (mode) {
    case GateMode::None: break;
    case GateMode::MaskBoundary:
        if (!map) throw ValueError("mask gating requires a mask");
        d = gate_mask_boundary(d, *map, params.band);
        break;
    case GateMode::LabelSeams:
        if (!map) throw ValueError("seam gating requires a tile map");
        d = gate_label_seams(d, *map);
        break;
    }
    return d;
}

PipelineResult remove_shadow(const MultiChannelImage& image, const LabelMap& shadow_mask,
                             const PipelineParams& params) {
    if (!shadow_mask.is_binary()) {
        throw ValueError("shadow mask must be binary");
    }
    return run_self_guided(image, shadow_mask, GateMode::MaskBoundary, params);
}

PipelineResult balance_mosaic(const MultiChannelImage& image, const LabelMap& tiles,
                              const PipelineParams& params) {
    return run_self_guided(image, tiles, GateMode::LabelSeams, params);
}

PipelineResult fuse(const MultiChannelImage& init, const MultiChannelImage& guide,
                    const PipelineParams& params) {
    check_params(params);
    if (init.width() != guide.width() || init.height() != guide.height()) {
        throw DimensionError("init and guide dimensions do not match");
    }
    const bool broadcast = guide.channel_count() == 1;
    if (!broadcast && guide.channel_count() != init.channel_count()) {
        throw DimensionError("guide must have one channel or match the init channel count");
    }

    PipelineResult result;
    result.image.kind = init.kind;
    for (int c = 0; c < init.channel_count(); ++c) {
        const ScalarField& f = init.channels[c];
        const ScalarField& v = guide.channels[broadcast ? 0 : c];
        f.require_positive("init channel");
        v.require_positive("guide channel");

        const DriftField d = canonical_drift(v);
        auto [u, report] = evolve(f, d, params.scheme);
        if (params.rescale == RescalePolicy::Renormalize) {
            const double scale = total_mass(f) / total_mass(u);
            for (double& val : u.values) val *= scale;
        }
        result.image.channels.push_back(std::move(u));
        result.reports.push_back(std::move(report));
    }
    return result;
}

} // namespace osmosis
