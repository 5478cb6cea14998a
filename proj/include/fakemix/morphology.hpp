#pragma once

#include "fakemix/types.hpp"

namespace fakemix {

/// Morphological dilation with a square structuring element of side
/// 2*radius+1. Out-of-bounds neighbours count as background.
BinaryMask dilate(const BinaryMask& mask, int radius);

/// Morphological erosion with the same element. Out-of-bounds neighbours
/// count as background, so foreground touching the border erodes away.
BinaryMask erode(const BinaryMask& mask, int radius);

}  // namespace fakemix
