#pragma once

#include <filesystem>

#include "fakemix/types.hpp"

namespace fakemix {

/// Read an 8-bit PNG as an RGB tensor with values in [0,1] (v/255).
/// Palette and 16-bit files are expanded; grayscale is replicated to RGB.
ImageTensor read_image_png(const std::filesystem::path& path);

/// Read a single-channel PNG as a [0,1] map (v/255).
ImageTensor read_gray_png(const std::filesystem::path& path);

/// Read a mask PNG; any nonzero value reads as 1.
BinaryMask read_mask_png(const std::filesystem::path& path);

/// Read a class-id PNG; pixel values are the ids.
LabelMask read_label_png(const std::filesystem::path& path);

/// Write a 1- or 3-channel tensor as an 8-bit PNG. Values are clamped to
/// [0,1] and quantized with round-to-nearest. Output bytes are deterministic;
/// writes are staged to a temp file and renamed.
void write_image_png(const std::filesystem::path& path, const ImageTensor& img);

/// Write a mask as a single-channel PNG with values exactly {0,255}.
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

/// Write class ids as a single-channel PNG (ids must fit in 8 bits).
void write_label_png(const std::filesystem::path& path, const LabelMask& labels);

}  // namespace fakemix
