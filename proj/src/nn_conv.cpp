#include "fakemix/nn/conv.hpp"

#include <stdexcept>

namespace fakemix::nn {

ConvParams ConvParams::make(int in_c, int out_c, int kernel, int dilation) {
    ConvParams p;
    p.in_channels = in_c;
    p.out_channels = out_c;
    p.kernel = kernel;
    p.dilation = dilation;
    p.padding = dilation * (kernel - 1) / 2;
    p.weights.assign(static_cast<size_t>(out_c) * in_c * kernel * kernel, 0.0);
    p.bias.assign(out_c, 0.0);
    p.validate();
    return p;
}

ConvParams ConvParams::identity(int channels) {
    ConvParams p = make(channels, channels, 1, 1);
    for (int c = 0; c < channels; ++c) p.weight(c, c, 0, 0) = 1.0;
    return p;
}

ConvParams ConvParams::random(int in_c, int out_c, int kernel, int dilation, SeededRng& rng,
                              double scale) {
    ConvParams p = make(in_c, out_c, kernel, dilation);
    for (double& w : p.weights) w = rng.uniform(-scale, scale);
    for (double& b : p.bias) b = rng.uniform(-scale, scale);
    return p;
}

void ConvParams::validate() const {
    if (in_channels < 1 || out_channels < 1)
        throw std::invalid_argument("ConvParams: channel counts must be >= 1");
    if (kernel < 1 || kernel % 2 == 0)
        throw std::invalid_argument("ConvParams: kernel must be odd and >= 1");
    if (dilation < 1) throw std::invalid_argument("ConvParams: dilation must be >= 1");
    if (padding != dilation * (kernel - 1) / 2)
        throw std::invalid_argument("ConvParams: padding must preserve spatial size");
    if (weights.size() != static_cast<size_t>(out_channels) * in_channels * kernel * kernel)
        throw std::invalid_argument("ConvParams: weight count mismatch");
    if (bias.size() != static_cast<size_t>(out_channels))
        throw std::invalid_argument("ConvParams: bias count mismatch");
}

ImageTensor dilated_conv(const ImageTensor& x, const ConvParams& p) {
    p.validate();
    if (x.channels() != p.in_channels)
        throw std::invalid_argument("dilated_conv: input channel mismatch");

    const int h = x.height(), w = x.width();
    const int pad = p.padding;

    // Explicit zero-padded buffer; the inner product then needs no bounds checks.
    const int ph = h + 2 * pad, pw = w + 2 * pad;
    std::vector<double> padded(static_cast<size_t>(ph) * pw * p.in_channels, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x2 = 0; x2 < w; ++x2)
            for (int c = 0; c < p.in_channels; ++c)
                padded[(static_cast<size_t>(y + pad) * pw + (x2 + pad)) * p.in_channels + c] =
                    x.at(y, x2, c);

    ImageTensor out(h, w, p.out_channels);
    for (int oy = 0; oy < h; ++oy)
        for (int ox = 0; ox < w; ++ox)
            for (int oc = 0; oc < p.out_channels; ++oc) {
                double acc = p.bias[oc];
                for (int ic = 0; ic < p.in_channels; ++ic)
                    for (int ky = 0; ky < p.kernel; ++ky) {
                        const size_t row =
                            static_cast<size_t>(oy + ky * p.dilation) * pw;
                        for (int kx = 0; kx < p.kernel; ++kx)
                            acc += padded[(row + ox + kx * p.dilation) * p.in_channels + ic] *
                                   p.weight(oc, ic, ky, kx);
                    }
                out.at(oy, ox, oc) = acc;
            }
    return out;
}

DepthwiseParams DepthwiseParams::make(int channels, int kernel, int dilation) {
    DepthwiseParams p;
    p.channels = channels;
    p.kernel = kernel;
    p.dilation = dilation;
    p.padding = dilation * (kernel - 1) / 2;
    p.weights.assign(static_cast<size_t>(channels) * kernel * kernel, 0.0);
    p.bias.assign(channels, 0.0);
    p.validate();
    return p;
}

DepthwiseParams DepthwiseParams::random(int channels, int kernel, int dilation, SeededRng& rng,
                                        double scale) {
    DepthwiseParams p = make(channels, kernel, dilation);
    for (double& w : p.weights) w = rng.uniform(-scale, scale);
    for (double& b : p.bias) b = rng.uniform(-scale, scale);
    return p;
}

void DepthwiseParams::validate() const {
    if (channels < 1) throw std::invalid_argument("DepthwiseParams: channels must be >= 1");
    if (kernel < 1 || kernel % 2 == 0)
        throw std::invalid_argument("DepthwiseParams: kernel must be odd and >= 1");
    if (dilation < 1) throw std::invalid_argument("DepthwiseParams: dilation must be >= 1");
    if (padding != dilation * (kernel - 1) / 2)
        throw std::invalid_argument("DepthwiseParams: padding must preserve spatial size");
    if (weights.size() != static_cast<size_t>(channels) * kernel * kernel)
        throw std::invalid_argument("DepthwiseParams: weight count mismatch");
    if (bias.size() != static_cast<size_t>(channels))
        throw std::invalid_argument("DepthwiseParams: bias count mismatch");
}

ImageTensor depthwise_conv(const ImageTensor& x, const DepthwiseParams& p) {
    p.validate();
    if (x.channels() != p.channels)
        throw std::invalid_argument("depthwise_conv: channel mismatch");

    const int h = x.height(), w = x.width();
    ImageTensor out(h, w, p.channels);
    const int half = p.kernel / 2;
    for (int oy = 0; oy < h; ++oy)
        for (int ox = 0; ox < w; ++ox)
            for (int c = 0; c < p.channels; ++c) {
                double acc = p.bias[c];
                for (int ky = 0; ky < p.kernel; ++ky) {
                    const int sy = oy + (ky - half) * p.dilation;
                    if (sy < 0 || sy >= h) continue;
                    for (int kx = 0; kx < p.kernel; ++kx) {
                        const int sx = ox + (kx - half) * p.dilation;
                        if (sx < 0 || sx >= w) continue;
                        acc += x.at(sy, sx, c) * p.weight(c, ky, kx);
                    }
                }
                out.at(oy, ox, c) = acc;
            }
    return out;
}

ImageTensor separable_conv(const ImageTensor& x, const DepthwiseParams& dw,
                           const ConvParams& pw) {
    if (pw.kernel != 1)
        throw std::invalid_argument("separable_conv: pointwise kernel must be 1x1");
    if (pw.in_channels != dw.channels)
        throw std::invalid_argument("separable_conv: stage channel mismatch");
    return dilated_conv(depthwise_conv(x, dw), pw);
}

ConvParams separable_equivalent(const DepthwiseParams& dw, const ConvParams& pw) {
    if (pw.kernel != 1)
        throw std::invalid_argument("separable_equivalent: pointwise kernel must be 1x1");
    if (pw.in_channels != dw.channels)
        throw std::invalid_argument("separable_equivalent: stage channel mismatch");

    ConvParams dense = ConvParams::make(dw.channels, pw.out_channels, dw.kernel, dw.dilation);
    for (int o = 0; o < pw.out_channels; ++o) {
        double b = pw.bias[o];
        for (int i = 0; i < dw.channels; ++i) {
            const double mix = pw.weight(o, i, 0, 0);
            b += mix * dw.bias[i];
            for (int ky = 0; ky < dw.kernel; ++ky)
                for (int kx = 0; kx < dw.kernel; ++kx)
                    dense.weight(o, i, ky, kx) = mix * dw.weight(i, ky, kx);
        }
        dense.bias[o] = b;
    }
    return dense;
}

}  // namespace fakemix::nn
