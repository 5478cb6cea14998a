#pragma once

#include "fakemix/types.hpp"

namespace fakemix {

struct BoundaryBandConfig {
    int thickness = 4;  // structuring-element radius, >= 1
};

/// Band of width ~2*thickness straddling each region contour:
/// dilate(gs, t) AND NOT erode(gs, t). An empty mask yields an empty band.
BinaryMask boundary_band(const BinaryMask& gs, const BoundaryBandConfig& cfg);

/// Foreground indicator: 1 wherever the class id is nonzero.
BinaryMask multiclass_to_binary(const LabelMask& gs);

/// Default band radius: 4 at 512x512, scaled by min(h,w)/512, never below 1.
int auto_band_thickness(int height, int width);

}  // namespace fakemix
