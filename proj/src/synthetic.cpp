#include "osmosis/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "osmosis/errors.hpp"
#include "osmosis/parallel.hpp"

namespace osmosis {

ScalarField smooth_ground_truth(int width, int height, std::uint64_t seed, double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo)) {
        throw ValueError("need 0 < lo < hi");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);

    struct Blob {
        double cx, cy, inv2s2, amp;
    };
    std::vector<Blob> blobs(6);
    const double extent = std::min(width, height);
    for (auto& b : blobs) {
        b.cx = unit(rng) * width;
        b.cy = unit(rng) * height;
        const double sigma = (0.08 + 0.17 * unit(rng)) * extent;
        b.inv2s2 = 1.0 / (2.0 * sigma * sigma);
        b.amp = sym(rng);
    }
    const double ramp_x = sym(rng);
    const double ramp_y = sym(rng);

    ScalarField f(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double v = ramp_x * (static_cast<double>(x) / width) +
                       ramp_y * (static_cast<double>(y) / height);
            for (const auto& b : blobs) {
                const double dx = x - b.cx;
                const double dy = y - b.cy;
                v += b.amp * std::exp(-(dx * dx + dy * dy) * b.inv2s2);
            }
            f.at(x, y) = v;
        }
    }
    const auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
    const double span = *mx - *mn;
    if (span == 0.0) {
        std::fill(f.values.begin(), f.values.end(), 0.5 * (lo + hi));
        return f;
    }
    for (double& v : f.values) v = lo + (hi - lo) * (v - *mn) / span;
    return f;
}

ScalarField flatten_band(const ScalarField& field, const std::vector<bool>& band) {
    if (band.size() != field.size()) {
        throw DimensionError("band size does not match the field");
    }
    par::KahanSum sum;
    std::size_t count = 0;
    for (std::size_t i = 0; i < band.size(); ++i) {
        if (band[i]) {
            sum.add(field.values[i]);
            ++count;
        }
    }
    ScalarField out = field;
    if (count == 0) return out;
    const double mean = sum.sum / static_cast<double>(count);
    for (std::size_t i = 0; i < band.size(); ++i) {
        if (band[i]) out.values[i] = mean;
    }
    return out;
}

ScalarField random_field(int width, int height, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    ScalarField f(width, height);
    for (double& v : f.values) v = dist(rng);
    return f;
}

DriftField random_drift(int width, int height, std::uint64_t seed, double max_abs_h,
                        double spacing) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-max_abs_h / spacing, max_abs_h / spacing);
    DriftField d(width, height, spacing);
    for (double& v : d.d1) v = dist(rng);
    for (double& v : d.d2) v = dist(rng);
    return d;
}

ShadowFixture make_shadow_fixture(int width, int height, std::uint64_t seed, double multiplier) {
    ShadowFixture fx;
    fx.clean = smooth_ground_truth(width, height, seed, 500.0, 4000.0);
    fx.mask = LabelMap(width, height, 0);
    const int x0 = width / 4;
    const int x1 = (3 * width) / 4;
    const int y0 = height / 3;
    const int y1 = (5 * height) / 6;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) fx.mask.at(x, y) = 1;
    }
    fx.shadowed = fx.clean;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (fx.mask.at(x, y)) fx.shadowed.at(x, y) *= multiplier;
        }
    }
    return fx;
}

MosaicFixture make_mosaic_fixture(int width, int height, std::uint64_t seed,
                                  const std::array<double, 4>& gains) {
    MosaicFixture fx;
    fx.clean = smooth_ground_truth(width, height, seed, 500.0, 4000.0);
    fx.tiles = LabelMap(width, height, 0);
    fx.mosaic = fx.clean;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const int tile = (x >= width / 2 ? 1 : 0) + (y >= height / 2 ? 2 : 0);
            fx.tiles.at(x, y) = static_cast<std::uint16_t>(tile);
            fx.mosaic.at(x, y) *= gains[static_cast<std::size_t>(tile)];
        }
    }
    return fx;
}

std::vector<bool> label_boundary_band(const LabelMap& labels, int band) {
    const int w = labels.width;
    const int h = labels.height;
    std::vector<bool> current(static_cast<std::size_t>(w) * h, false);
    if (band <= 0) return current;

    auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (x + 1 < w && labels.at(x, y) != labels.at(x + 1, y)) {
                current[idx(x, y)] = current[idx(x + 1, y)] = true;
            }
            if (y + 1 < h && labels.at(x, y) != labels.at(x, y + 1)) {
                current[idx(x, y)] = current[idx(x, y + 1)] = true;
            }
        }
    }
    for (int pass = 1; pass < band; ++pass) {
        std::vector<bool> next = current;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (current[idx(x, y)]) continue;
                for (int dy = -1; dy <= 1 && !next[idx(x, y)]; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx;
                        const int ny = y + dy;
                        if (nx >= 0 && nx < w && ny >= 0 && ny < h && current[idx(nx, ny)]) {
                            next[idx(x, y)] = true;
                            break;
                        }
                    }
                }
            }
        }
        current = std::move(next);
    }
    return current;
}

double relative_rmse_up_to_scale(const ScalarField& a, const ScalarField& b,
                                 const std::vector<bool>& include) {
    if (a.size() != b.size()) {
        throw DimensionError("fields differ in size");
    }
    if (!include.empty() && include.size() != a.size()) {
        throw DimensionError("include mask size does not match the fields");
    }
    par::KahanSum ab;
    par::KahanSum bb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!include.empty() && !include[i]) continue;
        ab.add(a.values[i] * b.values[i]);
        bb.add(b.values[i] * b.values[i]);
    }
    if (bb.sum == 0.0) return 0.0;
    const double c = ab.sum / bb.sum;

    par::KahanSum err2;
    par::KahanSum ref2;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!include.empty() && !include[i]) continue;
        const double ref = c * b.values[i];
        const double e = a.values[i] - ref;
        err2.add(e * e);
        ref2.add(ref * ref);
    }
    return (ref2.sum > 0.0) ? std::sqrt(err2.sum / ref2.sum) : 0.0;
}

double pearson_correlation(const ScalarField& a, const ScalarField& b,
                           const std::vector<bool>& include) {
    if (a.size() != b.size()) {
        throw DimensionError("fields differ in size");
    }
    if (!include.empty() && include.size() != a.size()) {
        throw DimensionError("include mask size does not match the fields");
    }
    par::KahanSum sa, sb;
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!include.empty() && !include[i]) continue;
        sa.add(a.values[i]);
        sb.add(b.values[i]);
        ++count;
    }
    if (count < 2) return 0.0;
    const double ma = sa.sum / static_cast<double>(count);
    const double mb = sb.sum / static_cast<double>(count);

    par::KahanSum cov, va, vb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!include.empty() && !include[i]) continue;
        const double da = a.values[i] - ma;
        const double db = b.values[i] - mb;
        cov.add(da * db);
        va.add(da * da);
        vb.add(db * db);
    }
    const double denom = std::sqrt(va.sum * vb.sum);
    return (denom > 0.0) ? cov.sum / denom : 0.0;
}

} // namespace osmosis
