#include "osmosis/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include <png.h>

#include "osmosis/errors.hpp"

namespace osmosis {

namespace {

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

// ---------------------------------------------------------------------------
// PNM (binary PGM P5 / PPM P6)
// ---------------------------------------------------------------------------

int pnm_next_token(std::istream& in, std::string& token) {
    token.clear();
    int c = in.get();
    while (c != EOF) {
        if (c == '#') { // comment to end of line
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    return token.empty() ? EOF : 0;
}

long pnm_int_token(std::istream& in, const std::string& path, const char* what) {
    std::string token;
    if (pnm_next_token(in, token) == EOF) {
        throw IoError(path + ": truncated PNM header (missing " + what + ")");
    }
    try {
        std::size_t pos = 0;
        const long value = std::stol(token, &pos);
        if (pos != token.size() || value < 0) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw IoError(path + ": bad PNM " + std::string(what) + " '" + token + "'");
    }
}

MultiChannelImage read_pnm(std::istream& in, const std::string& path) {
    std::string magic;
    if (pnm_next_token(in, magic) == EOF || (magic != "P5" && magic != "P6")) {
        throw IoError(path + ": not a binary PGM/PPM file");
    }
    const int channels = (magic == "P6") ? 3 : 1;
    const long width = pnm_int_token(in, path, "width");
    const long height = pnm_int_token(in, path, "height");
    const long maxval = pnm_int_token(in, path, "maxval");
    if (width < 2 || height < 2) {
        throw IoError(path + ": image must be at least 2x2");
    }
    if (maxval < 1 || maxval > 65535) {
        throw IoError(path + ": unsupported PNM maxval " + std::to_string(maxval));
    }
    // exactly one whitespace byte separates the header from the raster
    const int bytes = (maxval > 255) ? 2 : 1;
    const std::size_t count = static_cast<std::size_t>(width) * height * channels;
    std::vector<unsigned char> raw(count * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw IoError(path + ": truncated PNM pixel data");
    }

    std::vector<ScalarField> fields;
    fields.reserve(channels);
    for (int c = 0; c < channels; ++c) {
        fields.emplace_back(static_cast<int>(width), static_cast<int>(height));
    }
    for (std::size_t px = 0; px < static_cast<std::size_t>(width) * height; ++px) {
        for (int c = 0; c < channels; ++c) {
            const std::size_t s = (px * channels + c) * bytes;
            const unsigned value = (bytes == 2)
                                       ? (static_cast<unsigned>(raw[s]) << 8) | raw[s + 1]
                                       : raw[s];
            fields[c].values[px] = static_cast<double>(value);
        }
    }
    return MultiChannelImage(std::move(fields),
                             channels == 3 ? ChannelKind::Rgb : ChannelKind::Gray);
}

void write_pnm(const MultiChannelImage& image, const std::string& path, int bit_depth) {
    const int channels = image.channel_count();
    const long maxval = (bit_depth == 16) ? 65535 : 255;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << (channels == 3 ? "P6" : "P5") << "\n"
        << image.width() << " " << image.height() << "\n"
        << maxval << "\n";

    const std::size_t pixels = static_cast<std::size_t>(image.width()) * image.height();
    const int bytes = (bit_depth == 16) ? 2 : 1;
    std::vector<unsigned char> raw(pixels * channels * bytes);
    for (std::size_t px = 0; px < pixels; ++px) {
        for (int c = 0; c < channels; ++c) {
            const double v = image.channels[c].values[px];
            const long q = std::clamp(std::lround(v), 0L, maxval);
            const std::size_t s = (px * channels + c) * bytes;
            if (bytes == 2) {
                raw[s] = static_cast<unsigned char>(q >> 8);
                raw[s + 1] = static_cast<unsigned char>(q & 0xff);
            } else {
                raw[s] = static_cast<unsigned char>(q);
            }
        }
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError(path + ": write failed");
}

// ---------------------------------------------------------------------------
// PNG via libpng
// ---------------------------------------------------------------------------

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

MultiChannelImage read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError(path + ": cannot open");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path + ": libpng initialisation failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<unsigned char> raw;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path + ": corrupt PNG");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);

    if (color_type & PNG_COLOR_MASK_ALPHA) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path + ": PNG alpha channels are not supported");
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
        color_type = PNG_COLOR_TYPE_RGB;
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
        bit_depth = 8;
    }
    if (bit_depth == 16 && std::endian::native == std::endian::little) {
        png_set_swap(png);
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const int channels = (color_type == PNG_COLOR_TYPE_RGB) ? 3 : 1;
    if (width < 2 || height < 2) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path + ": image must be at least 2x2");
    }

    const std::size_t row_bytes = png_get_rowbytes(png, info);
    raw.resize(row_bytes * height);
    row_ptrs.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) row_ptrs[y] = raw.data() + y * row_bytes;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    std::vector<ScalarField> fields;
    for (int c = 0; c < channels; ++c) {
        fields.emplace_back(static_cast<int>(width), static_cast<int>(height));
    }
    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    if (bit_depth == 16) {
        const std::uint16_t* samples = reinterpret_cast<const std::uint16_t*>(raw.data());
        for (std::size_t px = 0; px < pixels; ++px) {
            for (int c = 0; c < channels; ++c) {
                fields[c].values[px] = static_cast<double>(samples[px * channels + c]);
            }
        }
    } else {
        for (std::size_t px = 0; px < pixels; ++px) {
            for (int c = 0; c < channels; ++c) {
                fields[c].values[px] = static_cast<double>(raw[px * channels + c]);
            }
        }
    }
    return MultiChannelImage(std::move(fields),
                             channels == 3 ? ChannelKind::Rgb : ChannelKind::Gray);
}

void write_png(const MultiChannelImage& image, const std::string& path, int bit_depth) {
    const int channels = image.channel_count();
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError(path + ": cannot open for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError(path + ": libpng initialisation failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<unsigned char> raw;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError(path + ": PNG write failed");
    }
    png_init_io(png, fp.get());

    const int color_type = (channels == 3) ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
    png_set_IHDR(png, info, image.width(), image.height(), bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16 && std::endian::native == std::endian::little) {
        png_set_swap(png);
    }

    const std::size_t pixels = static_cast<std::size_t>(image.width()) * image.height();
    const long maxval = (bit_depth == 16) ? 65535 : 255;
    if (bit_depth == 16) {
        raw.resize(pixels * channels * 2);
        std::uint16_t* samples = reinterpret_cast<std::uint16_t*>(raw.data());
        for (std::size_t px = 0; px < pixels; ++px) {
            for (int c = 0; c < channels; ++c) {
                const long q = std::clamp(std::lround(image.channels[c].values[px]), 0L, maxval);
                samples[px * channels + c] = static_cast<std::uint16_t>(q);
            }
        }
    } else {
        raw.resize(pixels * channels);
        for (std::size_t px = 0; px < pixels; ++px) {
            for (int c = 0; c < channels; ++c) {
                const long q = std::clamp(std::lround(image.channels[c].values[px]), 0L, maxval);
                raw[px * channels + c] = static_cast<unsigned char>(q);
            }
        }
    }
    const std::size_t row_bytes = raw.size() / image.height();
    row_ptrs.resize(image.height());
    for (int y = 0; y < image.height(); ++y) row_ptrs[y] = raw.data() + y * row_bytes;
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

LabelMap to_labels(const MultiChannelImage& image, const std::string& path, bool binarize) {
    if (image.channel_count() != 1) {
        throw IoError(path + ": masks and tile maps must be single-channel");
    }
    const ScalarField& f = image.channels.front();
    std::vector<std::uint16_t> labels(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const long v = std::lround(f.values[i]);
        if (v < 0 || v > 65535) {
            throw IoError(path + ": label value out of the 16-bit range");
        }
        labels[i] = binarize ? (v != 0 ? 1 : 0) : static_cast<std::uint16_t>(v);
    }
    return LabelMap::from_labels(f.width, f.height, std::move(labels));
}

} // namespace

MultiChannelImage read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open");
    unsigned char sig[8] = {};
    in.read(reinterpret_cast<char*>(sig), 8);
    const std::streamsize got = in.gcount();
    if (got < 2) throw IoError(path + ": file too short");
    in.clear();
    in.seekg(0);

    if (sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6')) {
        return read_pnm(in, path);
    }
    if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) {
        in.close();
        return read_png(path);
    }
    throw IoError(path + ": unsupported format (expected PNG, binary PGM, or binary PPM)");
}

void write_image(const MultiChannelImage& image, const std::string& path, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) {
        throw IoError(path + ": bit depth must be 8 or 16");
    }
    if (image.channel_count() != 1 && image.channel_count() != 3) {
        throw IoError(path + ": only 1- or 3-channel images can be written");
    }
    const std::string ext = lower_ext(path);
    if (ext == "png") {
        write_png(image, path, bit_depth);
    } else if (ext == "pgm") {
        if (image.channel_count() != 1) throw IoError(path + ": PGM holds a single channel");
        write_pnm(image, path, bit_depth);
    } else if (ext == "ppm") {
        if (image.channel_count() != 3) throw IoError(path + ": PPM holds three channels");
        write_pnm(image, path, bit_depth);
    } else {
        throw IoError(path + ": unsupported output extension '" + ext + "'");
    }
}

LabelMap read_mask(const std::string& path) { return to_labels(read_image(path), path, true); }

LabelMap read_label_map(const std::string& path) {
    return to_labels(read_image(path), path, false);
}

void write_pfm(const PfmImage& image, const std::string& path) {
    if (image.width < 1 || image.height < 1 ||
        image.values.size() != static_cast<std::size_t>(image.width) * image.height) {
        throw IoError(path + ": malformed PFM payload");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << "Pf\n" << image.width << " " << image.height << "\n-1.0\n";
    std::vector<float> row(image.width);
    for (int y = image.height - 1; y >= 0; --y) { // PFM stores rows bottom-up
        const double* src = image.values.data() + static_cast<std::size_t>(y) * image.width;
        for (int x = 0; x < image.width; ++x) row[x] = static_cast<float>(src[x]);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out) throw IoError(path + ": write failed");
}

PfmImage read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open");
    std::string magic;
    if (pnm_next_token(in, magic) == EOF || magic != "Pf") {
        throw IoError(path + ": not a grayscale PFM file");
    }
    const long width = pnm_int_token(in, path, "width");
    const long height = pnm_int_token(in, path, "height");
    std::string scale_token;
    if (pnm_next_token(in, scale_token) == EOF) {
        throw IoError(path + ": truncated PFM header");
    }
    const double scale = std::stod(scale_token);
    if (scale >= 0.0) {
        throw IoError(path + ": big-endian PFM files are not supported");
    }
    if (width < 1 || height < 1) throw IoError(path + ": bad PFM dimensions");
    PfmImage image;
    image.width = static_cast<int>(width);
    image.height = static_cast<int>(height);
    image.values.resize(static_cast<std::size_t>(width) * height);
    std::vector<float> row(width);
    for (long y = height - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (static_cast<std::size_t>(in.gcount()) != row.size() * sizeof(float)) {
            throw IoError(path + ": truncated PFM pixel data");
        }
        double* dst = image.values.data() + static_cast<std::size_t>(y) * width;
        for (long x = 0; x < width; ++x) dst[x] = row[x];
    }
    return image;
}

} // namespace osmosis
