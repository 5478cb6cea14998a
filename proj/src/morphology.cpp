#include "fakemix/morphology.hpp"

#include <algorithm>
#include <stdexcept>

namespace fakemix {
namespace {

// Square structuring elements separate into a horizontal and a vertical
// 1D window pass. Out-of-bounds contributes `pad` to the extremum.
BinaryMask window_pass(const BinaryMask& in, int radius, bool take_max, uint8_t pad) {
    const int h = in.height(), w = in.width();
    BinaryMask tmp(h, w), out(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            uint8_t v = take_max ? 0 : 1;
            for (int dx = -radius; dx <= radius; ++dx) {
                const int sx = x + dx;
                const uint8_t s = (sx < 0 || sx >= w) ? pad : in.at(y, sx);
                v = take_max ? std::max(v, s) : std::min(v, s);
            }
            tmp.at(y, x) = v;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            uint8_t v = take_max ? 0 : 1;
            for (int dy = -radius; dy <= radius; ++dy) {
                const int sy = y + dy;
                const uint8_t s = (sy < 0 || sy >= h) ? pad : tmp.at(sy, x);
                v = take_max ? std::max(v, s) : std::min(v, s);
            }
            out.at(y, x) = v;
        }
    return out;
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, int radius) {
    if (radius < 0) throw std::invalid_argument("dilate: radius must be >= 0");
    if (radius == 0) return mask;
    return window_pass(mask, radius, /*take_max=*/true, /*pad=*/0);
}

BinaryMask erode(const BinaryMask& mask, int radius) {
    if (radius < 0) throw std::invalid_argument("erode: radius must be >= 0");
    if (radius == 0) return mask;
    return window_pass(mask, radius, /*take_max=*/false, /*pad=*/0);
}

}  // namespace fakemix
