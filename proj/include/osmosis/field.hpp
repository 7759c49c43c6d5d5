#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace osmosis {

/// A 2D scalar image channel on a uniform grid, stored row-major:
/// values[y * width + x]. Pixel data are doubles regardless of the file bit
/// depth; long evolutions need the headroom.
struct ScalarField {
    int width = 0;
    int height = 0;
    double h = 1.0; // grid spacing
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(int width, int height, double fill = 0.0, double spacing = 1.0);
    static ScalarField from_values(int width, int height, std::vector<double> values,
                                   double spacing = 1.0);

    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }

    std::size_t size() const { return values.size(); }
    bool same_shape(const ScalarField& other) const {
        return width == other.width && height == other.height && h == other.h;
    }

    /// Throws ValueError if any pixel is non-finite.
    void require_finite(const char* what = "field") const;
    /// Throws ValueError if any pixel is <= 0.
    void require_positive(const char* what = "field") const;
};

enum class ChannelKind { Gray, Rgb, Falsecolor };

/// An ordered stack of dimension-equal channels, processed independently.
struct MultiChannelImage {
    std::vector<ScalarField> channels;
    ChannelKind kind = ChannelKind::Gray;

    MultiChannelImage() = default;
    explicit MultiChannelImage(std::vector<ScalarField> channels,
                               ChannelKind kind = ChannelKind::Gray);

    int width() const { return channels.empty() ? 0 : channels.front().width; }
    int height() const { return channels.empty() ? 0 : channels.front().height; }
    int channel_count() const { return static_cast<int>(channels.size()); }
};

/// Per-pixel non-negative integer labels: mosaic tile ids or binary masks.
/// 16-bit storage; label maps with values beyond 65535 are rejected upstream.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> labels;

    LabelMap() = default;
    LabelMap(int width, int height, std::uint16_t fill = 0);
    static LabelMap from_labels(int width, int height, std::vector<std::uint16_t> labels);

    std::uint16_t& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }
    std::uint16_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }

    bool is_binary() const;
    bool matches(int w, int h) const { return width == w && height == h; }
};

/// Sum of all pixel values (compensated summation, deterministic for any
/// worker count).
double total_mass(const ScalarField& field);

/// Smallest pixel value.
double min_value(const ScalarField& field);

/// L1 norm of the pixel values.
double l1_norm(const ScalarField& field);

/// field + offset at every pixel. The caller keeps the offset so a pipeline
/// can subtract it from the final output.
ScalarField shift_to_positive(const ScalarField& field, double offset);

} // namespace osmosis
