#include "fakemix/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>

namespace fakemix {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct Raster {
    int height = 0;
    int width = 0;
    int channels = 0;  // 1 (gray) or 3 (rgb)
    std::vector<uint8_t> pixels;
};

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error("png: " + what + ": " + path.string());
}

Raster read_raster(const std::filesystem::path& path, bool force_rgb) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) fail(path, "cannot open");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "read struct alloc failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(path, "info struct alloc failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "decode error");
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    if (force_rgb) png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    Raster r;
    r.height = static_cast<int>(png_get_image_height(png, info));
    r.width = static_cast<int>(png_get_image_width(png, info));
    r.channels = static_cast<int>(png_get_channels(png, info));
    if (r.height < 1 || r.width < 1 || (r.channels != 1 && r.channels != 3)) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "unsupported layout after expansion");
    }

    r.pixels.resize(static_cast<size_t>(r.height) * r.width * r.channels);
    std::vector<png_bytep> rows(r.height);
    const size_t stride = static_cast<size_t>(r.width) * r.channels;
    for (int y = 0; y < r.height; ++y) rows[y] = r.pixels.data() + y * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return r;
}

void write_raster(const std::filesystem::path& path, int height, int width, int channels,
                  const uint8_t* pixels) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    // Stage then rename so readers never see partial files and reruns are atomic.
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        FilePtr fp(std::fopen(tmp.string().c_str(), "wb"));
        if (!fp) fail(tmp, "cannot open for write");

        png_structp png =
            png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (!png) fail(tmp, "write struct alloc failed");
        png_infop info = png_create_info_struct(png);
        if (!info) {
            png_destroy_write_struct(&png, nullptr);
            fail(tmp, "info struct alloc failed");
        }
        if (setjmp(png_jmpbuf(png))) {
            png_destroy_write_struct(&png, &info);
            fail(tmp, "encode error");
        }

        png_init_io(png, fp.get());
        png_set_IHDR(png, info, width, height, 8,
                     channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_set_compression_level(png, 6);
        png_write_info(png, info);

        std::vector<png_bytep> rows(height);
        const size_t stride = static_cast<size_t>(width) * channels;
        for (int y = 0; y < height; ++y)
            rows[y] = const_cast<png_bytep>(pixels + y * stride);
        png_write_image(png, rows.data());
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
    }
    std::filesystem::rename(tmp, path);
}

uint8_t quantize(double v) {
    const double c = std::clamp(v, 0.0, 1.0);
    return static_cast<uint8_t>(std::lround(c * 255.0));
}

}  // namespace

ImageTensor read_image_png(const std::filesystem::path& path) {
    Raster r = read_raster(path, /*force_rgb=*/true);
    ImageTensor img(r.height, r.width, 3);
    auto dst = img.data();
    for (size_t i = 0; i < r.pixels.size(); ++i) dst[i] = r.pixels[i] / 255.0;
    return img;
}

ImageTensor read_gray_png(const std::filesystem::path& path) {
    Raster r = read_raster(path, /*force_rgb=*/false);
    ImageTensor img(r.height, r.width, 1);
    auto dst = img.data();
    if (r.channels == 1) {
        for (size_t i = 0; i < r.pixels.size(); ++i) dst[i] = r.pixels[i] / 255.0;
    } else {
        for (size_t i = 0; i < dst.size(); ++i) {
            const size_t j = i * 3;  // rgb -> mean
            dst[i] = (r.pixels[j] + r.pixels[j + 1] + r.pixels[j + 2]) / (3.0 * 255.0);
        }
    }
    return img;
}

BinaryMask read_mask_png(const std::filesystem::path& path) {
    Raster r = read_raster(path, /*force_rgb=*/false);
    BinaryMask mask(r.height, r.width);
    auto dst = mask.data();
    if (r.channels == 1) {
        for (size_t i = 0; i < r.pixels.size(); ++i) dst[i] = r.pixels[i] != 0 ? 1 : 0;
    } else {
        for (size_t i = 0; i < dst.size(); ++i) {
            const size_t j = i * 3;
            dst[i] = (r.pixels[j] | r.pixels[j + 1] | r.pixels[j + 2]) != 0 ? 1 : 0;
        }
    }
    return mask;
}

LabelMask read_label_png(const std::filesystem::path& path) {
    Raster r = read_raster(path, /*force_rgb=*/false);
    if (r.channels != 1) fail(path, "class-id mask must be single-channel");
    LabelMask labels(r.height, r.width);
    auto dst = labels.data();
    for (size_t i = 0; i < r.pixels.size(); ++i) dst[i] = r.pixels[i];
    return labels;
}

void write_image_png(const std::filesystem::path& path, const ImageTensor& img) {
    if (img.channels() != 1 && img.channels() != 3)
        throw std::invalid_argument("write_image_png: channels must be 1 or 3");
    std::vector<uint8_t> bytes(img.size());
    auto src = img.data();
    for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize(src[i]);
    write_raster(path, img.height(), img.width(), img.channels(), bytes.data());
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    std::vector<uint8_t> bytes(mask.size());
    auto src = mask.data();
    for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = src[i] ? 255 : 0;
    write_raster(path, mask.height(), mask.width(), 1, bytes.data());
}

void write_label_png(const std::filesystem::path& path, const LabelMask& labels) {
    std::vector<uint8_t> bytes(labels.size());
    auto src = labels.data();
    for (size_t i = 0; i < bytes.size(); ++i) {
        if (src[i] < 0 || src[i] > 255)
            throw std::invalid_argument("write_label_png: ids must fit in 8 bits");
        bytes[i] = static_cast<uint8_t>(src[i]);
    }
    write_raster(path, labels.height(), labels.width(), 1, bytes.data());
}

}  // namespace fakemix
