#include "fakemix/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fakemix/morphology.hpp"

namespace fakemix {

BinaryMask boundary_band(const BinaryMask& gs, const BoundaryBandConfig& cfg) {
    if (cfg.thickness < 1)
        throw std::invalid_argument("boundary_band: thickness must be >= 1");
    const BinaryMask grown = dilate(gs, cfg.thickness);
    const BinaryMask shrunk = erode(gs, cfg.thickness);
    BinaryMask band(gs.height(), gs.width());
    for (int y = 0; y < gs.height(); ++y)
        for (int x = 0; x < gs.width(); ++x)
            band.at(y, x) = static_cast<uint8_t>(grown.at(y, x) & ~shrunk.at(y, x) & 1);
    return band;
}

BinaryMask multiclass_to_binary(const LabelMask& gs) {
    BinaryMask out(gs.height(), gs.width());
    auto src = gs.data();
    auto dst = out.data();
    for (size_t i = 0; i < src.size(); ++i) {
        if (src[i] < 0)
            throw std::invalid_argument("multiclass_to_binary: negative class id");
        dst[i] = src[i] != 0 ? 1 : 0;
    }
    return out;
}

int auto_band_thickness(int height, int width) {
    const double scaled = 4.0 * std::min(height, width) / 512.0;
    return std::max(1, static_cast<int>(std::lround(scaled)));
}

}  // namespace fakemix
