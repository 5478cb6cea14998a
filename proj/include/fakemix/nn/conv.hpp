#pragma once

#include <vector>

#include "fakemix/rng.hpp"
#include "fakemix/types.hpp"

namespace fakemix::nn {

/// Dense 2D convolution parameters (square odd kernel, cross-correlation
/// convention). Padding keeps the output spatial size equal to the input's.
struct ConvParams {
    int in_channels = 1;
    int out_channels = 1;
    int kernel = 1;
    int dilation = 1;
    int padding = 0;                // dilation * (kernel-1) / 2
    std::vector<double> weights;    // [out][in][ky][kx], row-major
    std::vector<double> bias;       // [out]

    static ConvParams make(int in_c, int out_c, int kernel, int dilation = 1);
    static ConvParams identity(int channels);
    static ConvParams random(int in_c, int out_c, int kernel, int dilation, SeededRng& rng,
                             double scale = 0.5);

    double weight(int o, int i, int ky, int kx) const {
        return weights[((static_cast<size_t>(o) * in_channels + i) * kernel + ky) * kernel + kx];
    }
    double& weight(int o, int i, int ky, int kx) {
        return weights[((static_cast<size_t>(o) * in_channels + i) * kernel + ky) * kernel + kx];
    }

    void validate() const;
};

/// Same-size dilated cross-correlation with zero padding.
ImageTensor dilated_conv(const ImageTensor& x, const ConvParams& p);

/// Per-channel spatial filter for the depthwise half of a separable
/// convolution. One k x k kernel per channel, no cross-channel mixing.
struct DepthwiseParams {
    int channels = 1;
    int kernel = 1;
    int dilation = 1;
    int padding = 0;
    std::vector<double> weights;  // [c][ky][kx], row-major
    std::vector<double> bias;     // [c]

    static DepthwiseParams make(int channels, int kernel, int dilation = 1);
    static DepthwiseParams random(int channels, int kernel, int dilation, SeededRng& rng,
                                  double scale = 0.5);

    double weight(int c, int ky, int kx) const {
        return weights[(static_cast<size_t>(c) * kernel + ky) * kernel + kx];
    }
    double& weight(int c, int ky, int kx) {
        return weights[(static_cast<size_t>(c) * kernel + ky) * kernel + kx];
    }

    void validate() const;
};

ImageTensor depthwise_conv(const ImageTensor& x, const DepthwiseParams& p);

/// Depthwise filter followed by a 1x1 pointwise mix; the throughput-oriented
/// form of the dense convolution.
ImageTensor separable_conv(const ImageTensor& x, const DepthwiseParams& dw,
                           const ConvParams& pw);

/// Dense parameters computing exactly what separable_conv computes, for
/// parity experiments: W[o][i] = pw[o][i] * dw[i], bias folded through.
ConvParams separable_equivalent(const DepthwiseParams& dw, const ConvParams& pw);

}  // namespace fakemix::nn
