#include "osmosis/drift.hpp"

#include <algorithm>
#include <cmath>

#include "osmosis/errors.hpp"
#include "osmosis/parallel.hpp"

namespace osmosis {

namespace {
void check_match(const DriftField& d, const LabelMap& map, const char* what) {
    if (!map.matches(d.width, d.height)) {
        throw DimensionError(std::string(what) + " dimensions do not match the drift field");
    }
}
} // namespace

DriftField::DriftField(int width_, int height_, double spacing)
    : width(width_), height(height_), h(spacing) {
    if (width_ < 1 || height_ < 1) {
        throw DimensionError("drift field dimensions must be positive");
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw ValueError("grid spacing must be positive and finite");
    }
    d1.assign(static_cast<std::size_t>(width_ - 1) * height_, 0.0);
    d2.assign(static_cast<std::size_t>(width_) * (height_ - 1), 0.0);
}

double DriftField::max_abs_times_h() const {
    double m = 0.0;
    for (double v : d1) m = std::max(m, std::abs(v));
    for (double v : d2) m = std::max(m, std::abs(v));
    return m * h;
}

DriftField canonical_drift(const ScalarField& v) {
    if (v.width < 2 || v.height < 2) {
        throw DimensionError("guide must be at least 2x2");
    }
    v.require_positive("guide");

    DriftField d(v.width, v.height, v.h);
    const int w = v.width;
    const int hgt = v.height;
    const double scale = 2.0 / v.h;

    par::for_chunks(hgt, 64, [&](std::int64_t j0, std::int64_t j1) {
        for (std::int64_t j = j0; j < j1; ++j) {
            const double* row = v.values.data() + j * w;
            double* out = d.d1.data() + j * (w - 1);
            for (int i = 0; i < w - 1; ++i) {
                out[i] = scale * (row[i + 1] - row[i]) / (row[i + 1] + row[i]);
            }
        }
    });
    par::for_chunks(hgt - 1, 64, [&](std::int64_t j0, std::int64_t j1) {
        for (std::int64_t j = j0; j < j1; ++j) {
            const double* row = v.values.data() + j * w;
            const double* next = row + w;
            double* out = d.d2.data() + j * w;
            for (int i = 0; i < w; ++i) {
                out[i] = scale * (next[i] - row[i]) / (next[i] + row[i]);
            }
        }
    });
    return d;
}

DriftField gate_mask_boundary(const DriftField& d, const LabelMap& mask, int band) {
    check_match(d, mask, "mask");
    if (!mask.is_binary()) {
        throw ValueError("mask must be binary (labels 0/1)");
    }
    if (band < 0) {
        throw ValueError("band must be non-negative");
    }

    DriftField out = d;
    const int w = d.width;
    const int hgt = d.height;

    // x-faces: crossing where mask differs horizontally; dilate along the row.
    for (int j = 0; j < hgt; ++j) {
        for (int i = 0; i < w - 1; ++i) {
            if (mask.at(i, j) != mask.at(i + 1, j)) {
                const int lo = std::max(0, i - band);
                const int hi = std::min(w - 2, i + band);
                for (int k = lo; k <= hi; ++k) out.d1_at(k, j) = 0.0;
            }
        }
    }
    // y-faces: crossing where mask differs vertically; dilate along the column.
    for (int j = 0; j < hgt - 1; ++j) {
        for (int i = 0; i < w; ++i) {
            if (mask.at(i, j) != mask.at(i, j + 1)) {
                const int lo = std::max(0, j - band);
                const int hi = std::min(hgt - 2, j + band);
                for (int k = lo; k <= hi; ++k) out.d2_at(i, k) = 0.0;
            }
        }
    }
    return out;
}

DriftField gate_label_seams(const DriftField& d, const LabelMap& tiles) {
    check_match(d, tiles, "tile map");

    DriftField out = d;
    const int w = d.width;
    const int hgt = d.height;
    for (int j = 0; j < hgt; ++j) {
        for (int i = 0; i < w - 1; ++i) {
            if (tiles.at(i, j) != tiles.at(i + 1, j)) out.d1_at(i, j) = 0.0;
        }
    }
    for (int j = 0; j < hgt - 1; ++j) {
        for (int i = 0; i < w; ++i) {
            if (tiles.at(i, j) != tiles.at(i, j + 1)) out.d2_at(i, j) = 0.0;
        }
    }
    return out;
}

} // namespace osmosis
