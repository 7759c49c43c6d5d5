#include "osmosis/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "osmosis/errors.hpp"
#include "osmosis/parallel.hpp"

namespace osmosis {

namespace {
constexpr std::int64_t kReduceGrain = 1 << 15;

void check_dims(int width, int height) {
    if (width < 2 || height < 2) {
        throw DimensionError("field dimensions must be at least 2x2, got " +
                             std::to_string(width) + "x" + std::to_string(height));
    }
}
} // namespace

ScalarField::ScalarField(int width_, int height_, double fill, double spacing)
    : width(width_), height(height_), h(spacing) {
    check_dims(width_, height_);
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw ValueError("grid spacing must be positive and finite");
    }
    values.assign(static_cast<std::size_t>(width_) * height_, fill);
}

ScalarField ScalarField::from_values(int width, int height, std::vector<double> values,
                                     double spacing) {
    ScalarField f(width, height, 0.0, spacing);
    if (values.size() != f.size()) {
        throw DimensionError("value count does not match field dimensions");
    }
    f.values = std::move(values);
    f.require_finite();
    return f;
}

void ScalarField::require_finite(const char* what) const {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ValueError(std::string(what) + " contains a non-finite value");
        }
    }
}

void ScalarField::require_positive(const char* what) const {
    for (double v : values) {
        if (!(v > 0.0)) {
            throw ValueError(std::string(what) + " must be strictly positive");
        }
    }
}

MultiChannelImage::MultiChannelImage(std::vector<ScalarField> channels_, ChannelKind kind_)
    : channels(std::move(channels_)), kind(kind_) {
    if (channels.empty() || channels.size() > 4) {
        throw DimensionError("image must have between 1 and 4 channels");
    }
    for (const auto& c : channels) {
        if (!c.same_shape(channels.front())) {
            throw DimensionError("all channels must have identical dimensions");
        }
    }
}

LabelMap::LabelMap(int width_, int height_, std::uint16_t fill) : width(width_), height(height_) {
    if (width_ < 1 || height_ < 1) {
        throw DimensionError("label map dimensions must be positive");
    }
    labels.assign(static_cast<std::size_t>(width_) * height_, fill);
}

LabelMap LabelMap::from_labels(int width, int height, std::vector<std::uint16_t> labels) {
    LabelMap m(width, height);
    if (labels.size() != m.labels.size()) {
        throw DimensionError("label count does not match map dimensions");
    }
    m.labels = std::move(labels);
    return m;
}

bool LabelMap::is_binary() const {
    return std::all_of(labels.begin(), labels.end(), [](std::uint16_t v) { return v <= 1; });
}

double total_mass(const ScalarField& field) {
    const double* data = field.values.data();
    return par::sum_chunks(static_cast<std::int64_t>(field.size()), kReduceGrain,
                           [data](std::int64_t begin, std::int64_t end) {
                               par::KahanSum s;
                               for (std::int64_t i = begin; i < end; ++i) s.add(data[i]);
                               return s.sum;
                           });
}

double l1_norm(const ScalarField& field) {
    const double* data = field.values.data();
    return par::sum_chunks(static_cast<std::int64_t>(field.size()), kReduceGrain,
                           [data](std::int64_t begin, std::int64_t end) {
                               par::KahanSum s;
                               for (std::int64_t i = begin; i < end; ++i) s.add(std::abs(data[i]));
                               return s.sum;
                           });
}

double min_value(const ScalarField& field) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : field.values) m = std::min(m, v);
    return m;
}

ScalarField shift_to_positive(const ScalarField& field, double offset) {
    if (!(offset > 0.0) || !std::isfinite(offset)) {
        throw ValueError("offset must be positive and finite");
    }
    field.require_finite();
    ScalarField out = field;
    for (double& v : out.values) v += offset;
    return out;
}

} // namespace osmosis
