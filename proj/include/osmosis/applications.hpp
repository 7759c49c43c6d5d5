#pragma once

#include "osmosis/drift.hpp"
#include "osmosis/solvers.hpp"

namespace osmosis {

enum class RescalePolicy {
    Clamp,       // leave channel means to mass conservation; clamp on export only
    Renormalize, // rescale each output channel so its mean matches the input mean
};

struct PipelineParams {
    SchemeConfig scheme;
    double offset = 1.0; // working shift applied when a channel is not strictly positive
    int band = 0;        // gating dilation for mask boundaries
    RescalePolicy rescale = RescalePolicy::Renormalize;
};

struct PipelineResult {
    MultiChannelImage image;
    std::vector<EvolveReport> reports; // one per processed channel
};

enum class GateMode { None, MaskBoundary, LabelSeams };

/// The shift a pipeline applies before evolving this channel: zero when the
/// channel is already strictly positive, otherwise offset - min(channel).
double working_shift(const ScalarField& channel, double offset);

/// The drift a pipeline evolves under for one channel: canonical drift of the
/// shifted channel, gated per `mode`. Callers use it to dump drift fields and
/// to resolve explicit time-step bounds ahead of a run.
DriftField pipeline_drift(const ScalarField& channel, const LabelMap* map, GateMode mode,
                          const PipelineParams& params);

/// Flattens the multiplicative jump across the mask boundary while keeping
/// intra-region gradients: per channel, gate the canonical drift on the mask
/// boundary and evolve the channel towards the gated steady state.
PipelineResult remove_shadow(const MultiChannelImage& image, const LabelMap& shadow_mask,
                             const PipelineParams& params);

/// Equalizes per-tile multiplicative exposure differences by gating the
/// canonical drift on tile seams.
PipelineResult balance_mosaic(const MultiChannelImage& image, const LabelMap& tiles,
                              const PipelineParams& params);

/// Evolves each init channel under the canonical drift of the matching guide
/// channel (single-channel guides broadcast). At steadiness each output
/// channel is the guide channel rescaled to the init channel's mass.
/// Both images must be strictly positive; shift on ingestion if they are not.
PipelineResult fuse(const MultiChannelImage& init, const MultiChannelImage& guide,
                    const PipelineParams& params);

} // namespace osmosis
