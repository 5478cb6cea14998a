#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace fakemix {

/// Integer-pixel translation offset. Positive dx moves content right,
/// positive dy moves content down.
struct TranslationVector {
    int dx = 0;
    int dy = 0;

    friend bool operator==(const TranslationVector&, const TranslationVector&) = default;
};

/// Dense H x W x C map of doubles, row-major, channel-interleaved.
/// Image-role tensors keep values in [0,1]; feature maps are unrestricted.
class ImageTensor {
public:
    ImageTensor() = default;

    ImageTensor(int height, int width, int channels, double fill = 0.0)
        : height_(height), width_(width), channels_(channels),
          data_(static_cast<size_t>(height) * width * channels, fill) {
        if (height < 1 || width < 1 || channels < 1)
            throw std::invalid_argument("ImageTensor: dimensions must be >= 1");
    }

    ImageTensor(int height, int width, int channels, std::vector<double> data)
        : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
        if (height < 1 || width < 1 || channels < 1)
            throw std::invalid_argument("ImageTensor: dimensions must be >= 1");
        if (data_.size() != static_cast<size_t>(height) * width * channels)
            throw std::invalid_argument("ImageTensor: data length != h*w*c");
    }

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    size_t size() const { return data_.size(); }

    double& at(int y, int x, int c = 0) {
        return data_[(static_cast<size_t>(y) * width_ + x) * channels_ + c];
    }
    double at(int y, int x, int c = 0) const {
        return data_[(static_cast<size_t>(y) * width_ + x) * channels_ + c];
    }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    bool same_shape(const ImageTensor& o) const {
        return height_ == o.height_ && width_ == o.width_ && channels_ == o.channels_;
    }

    friend bool operator==(const ImageTensor&, const ImageTensor&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    int channels_ = 1;
    std::vector<double> data_;
};

/// H x W map with values in {0,1}.
class BinaryMask {
public:
    BinaryMask() = default;

    BinaryMask(int height, int width, uint8_t fill = 0)
        : height_(height), width_(width),
          data_(static_cast<size_t>(height) * width, fill) {
        if (height < 1 || width < 1)
            throw std::invalid_argument("BinaryMask: dimensions must be >= 1");
        if (fill > 1)
            throw std::invalid_argument("BinaryMask: fill must be 0 or 1");
    }

    int height() const { return height_; }
    int width() const { return width_; }
    size_t size() const { return data_.size(); }

    uint8_t& at(int y, int x) { return data_[static_cast<size_t>(y) * width_ + x]; }
    uint8_t at(int y, int x) const { return data_[static_cast<size_t>(y) * width_ + x]; }

    std::span<uint8_t> data() { return data_; }
    std::span<const uint8_t> data() const { return data_; }

    bool same_shape(const BinaryMask& o) const {
        return height_ == o.height_ && width_ == o.width_;
    }

    int64_t count_ones() const {
        int64_t n = 0;
        for (uint8_t v : data_) n += v;
        return n;
    }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<uint8_t> data_;
};

/// H x W map of non-negative class ids; 0 is background.
class LabelMask {
public:
    LabelMask() = default;

    LabelMask(int height, int width, int32_t fill = 0)
        : height_(height), width_(width),
          data_(static_cast<size_t>(height) * width, fill) {
        if (height < 1 || width < 1)
            throw std::invalid_argument("LabelMask: dimensions must be >= 1");
    }

    int height() const { return height_; }
    int width() const { return width_; }
    size_t size() const { return data_.size(); }

    int32_t& at(int y, int x) { return data_[static_cast<size_t>(y) * width_ + x]; }
    int32_t at(int y, int x) const { return data_[static_cast<size_t>(y) * width_ + x]; }

    std::span<int32_t> data() { return data_; }
    std::span<const int32_t> data() const { return data_; }

    bool same_shape(const LabelMask& o) const {
        return height_ == o.height_ && width_ == o.width_;
    }

    friend bool operator==(const LabelMask&, const LabelMask&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<int32_t> data_;
};

/// Per-pixel, per-channel product of two equal-shape tensors.
ImageTensor elementwise_mul(const ImageTensor& a, const ImageTensor& b);

/// Per-pixel product, mask broadcast across channels.
ImageTensor elementwise_mul(const ImageTensor& a, const BinaryMask& m);

/// Shift content by d; pixels whose source index falls outside the input
/// are 0. output[y][x] = src[y-dy][x-dx].
ImageTensor translate_zero_fill(const ImageTensor& src, TranslationVector d);
BinaryMask translate_zero_fill(const BinaryMask& src, TranslationVector d);

}  // namespace fakemix
