#pragma once

#include "fakemix/types.hpp"

namespace fakemix {

/// Channel-wise bilinear resize with corner-aligned sampling. Returns the
/// input bit-identically when the size is unchanged.
ImageTensor upsample_bilinear(const ImageTensor& src, int new_h, int new_w);

/// Nearest-neighbour resize for masks, corner-aligned rounding.
BinaryMask resize_nearest(const BinaryMask& src, int new_h, int new_w);
LabelMask resize_nearest(const LabelMask& src, int new_h, int new_w);

}  // namespace fakemix
