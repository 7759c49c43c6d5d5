#pragma once

#include "osmosis/field.hpp"

namespace osmosis {

/// Staggered drift vector: d1 lives on x-faces (i+1/2, j), d2 on y-faces
/// (i, j+1/2). Faces on the domain boundary are not stored; the no-flux
/// boundary makes them carry zero total flux.
struct DriftField {
    int width = 0;  // pixel grid width
    int height = 0; // pixel grid height
    double h = 1.0;
    std::vector<double> d1; // (width-1) x height, index j*(width-1)+i -> face (i+1/2, j)
    std::vector<double> d2; // width x (height-1), index j*width+i     -> face (i, j+1/2)

    DriftField() = default;
    DriftField(int width, int height, double spacing = 1.0);

    double& d1_at(int i, int j) { return d1[static_cast<std::size_t>(j) * (width - 1) + i]; }
    double d1_at(int i, int j) const { return d1[static_cast<std::size_t>(j) * (width - 1) + i]; }
    double& d2_at(int i, int j) { return d2[static_cast<std::size_t>(j) * width + i]; }
    double d2_at(int i, int j) const { return d2[static_cast<std::size_t>(j) * width + i]; }

    /// max(|d1|, |d2|) * h; strictly below 2 for canonical drifts.
    double max_abs_times_h() const;
};

/// Discrete d = grad(log v) in the arithmetic-mean ratio form
///   d1 at (i+1/2, j) = (2/h) * (v[i+1,j] - v[i,j]) / (v[i+1,j] + v[i,j])
/// which makes v an exact fixed point of the discrete operator.
/// Requires v strictly positive and at least 2x2.
DriftField canonical_drift(const ScalarField& v);

/// Zeroes every face whose two adjacent pixels have different mask values.
/// With band > 0, faces within `band` faces of a crossing face along the
/// face's own line are zeroed as well. Mask must be binary.
DriftField gate_mask_boundary(const DriftField& d, const LabelMap& mask, int band = 0);

/// Zeroes every face separating pixels with different tile labels; faces
/// interior to a tile are untouched.
DriftField gate_label_seams(const DriftField& d, const LabelMap& tiles);

} // namespace osmosis
