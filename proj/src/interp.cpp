#include "fakemix/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fakemix {
namespace {

void check_target(int new_h, int new_w) {
    if (new_h < 1 || new_w < 1)
        throw std::invalid_argument("resize: target size must be >= 1");
}

// Corner-aligned source coordinate for destination index i.
double source_coord(int i, int src_n, int dst_n) {
    if (dst_n <= 1) return 0.0;
    return static_cast<double>(i) * (src_n - 1) / (dst_n - 1);
}

int nearest_index(int i, int src_n, int dst_n) {
    const int idx = static_cast<int>(std::lround(source_coord(i, src_n, dst_n)));
    return std::clamp(idx, 0, src_n - 1);
}

}  // namespace

ImageTensor upsample_bilinear(const ImageTensor& src, int new_h, int new_w) {
    check_target(new_h, new_w);
    if (new_h == src.height() && new_w == src.width()) return src;

    ImageTensor out(new_h, new_w, src.channels());
    const int c = src.channels();
    for (int y = 0; y < new_h; ++y) {
        const double sy = source_coord(y, src.height(), new_h);
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, src.height() - 1);
        const double fy = sy - y0;
        for (int x = 0; x < new_w; ++x) {
            const double sx = source_coord(x, src.width(), new_w);
            const int x0 = static_cast<int>(sx);
            const int x1 = std::min(x0 + 1, src.width() - 1);
            const double fx = sx - x0;
            for (int ch = 0; ch < c; ++ch) {
                const double top = src.at(y0, x0, ch) * (1.0 - fx) + src.at(y0, x1, ch) * fx;
                const double bot = src.at(y1, x0, ch) * (1.0 - fx) + src.at(y1, x1, ch) * fx;
                out.at(y, x, ch) = top * (1.0 - fy) + bot * fy;
            }
        }
    }
    return out;
}

BinaryMask resize_nearest(const BinaryMask& src, int new_h, int new_w) {
    check_target(new_h, new_w);
    if (new_h == src.height() && new_w == src.width()) return src;
    BinaryMask out(new_h, new_w);
    for (int y = 0; y < new_h; ++y) {
        const int sy = nearest_index(y, src.height(), new_h);
        for (int x = 0; x < new_w; ++x)
            out.at(y, x) = src.at(sy, nearest_index(x, src.width(), new_w));
    }
    return out;
}

LabelMask resize_nearest(const LabelMask& src, int new_h, int new_w) {
    check_target(new_h, new_w);
    if (new_h == src.height() && new_w == src.width()) return src;
    LabelMask out(new_h, new_w);
    for (int y = 0; y < new_h; ++y) {
        const int sy = nearest_index(y, src.height(), new_h);
        for (int x = 0; x < new_w; ++x)
            out.at(y, x) = src.at(sy, nearest_index(x, src.width(), new_w));
    }
    return out;
}

}  // namespace fakemix
