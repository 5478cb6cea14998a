#include "fakemix/types.hpp"

namespace fakemix {

ImageTensor elementwise_mul(const ImageTensor& a, const ImageTensor& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("elementwise_mul: shape mismatch");
    ImageTensor out = a;
    auto dst = out.data();
    auto src = b.data();
    for (size_t i = 0; i < dst.size(); ++i) dst[i] *= src[i];
    return out;
}

ImageTensor elementwise_mul(const ImageTensor& a, const BinaryMask& m) {
    if (a.height() != m.height() || a.width() != m.width())
        throw std::invalid_argument("elementwise_mul: mask shape mismatch");
    ImageTensor out = a;
    const int c = a.channels();
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x) {
            if (m.at(y, x)) continue;
            for (int ch = 0; ch < c; ++ch) out.at(y, x, ch) = 0.0;
        }
    return out;
}

ImageTensor translate_zero_fill(const ImageTensor& src, TranslationVector d) {
    ImageTensor out(src.height(), src.width(), src.channels(), 0.0);
    const int c = src.channels();
    for (int y = 0; y < src.height(); ++y) {
        const int sy = y - d.dy;
        if (sy < 0 || sy >= src.height()) continue;
        for (int x = 0; x < src.width(); ++x) {
            const int sx = x - d.dx;
            if (sx < 0 || sx >= src.width()) continue;
            for (int ch = 0; ch < c; ++ch) out.at(y, x, ch) = src.at(sy, sx, ch);
        }
    }
    return out;
}

BinaryMask translate_zero_fill(const BinaryMask& src, TranslationVector d) {
    BinaryMask out(src.height(), src.width(), 0);
    for (int y = 0; y < src.height(); ++y) {
        const int sy = y - d.dy;
        if (sy < 0 || sy >= src.height()) continue;
        for (int x = 0; x < src.width(); ++x) {
            const int sx = x - d.dx;
            if (sx < 0 || sx >= src.width()) continue;
            out.at(y, x) = src.at(sy, sx);
        }
    }
    return out;
}

}  // namespace fakemix
