#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "fakemix/nn/conv.hpp"
#include "fakemix/rng.hpp"
#include "fakemix/types.hpp"

namespace fakemix::nn {

/// Pyramid of parallel dilated convolutions sharing one input.
struct AsppConfig {
    int branch_count = 7;
    std::vector<int> dilation_rates{1, 2, 4, 6, 8, 12, 18};
    int branch_channels = 8;

    void validate() const;  // branch_count == |rates|, rates strictly increasing
};

/// FC-ReLU-FC block mapping the branch descriptor to raw scores.
struct TransformParams {
    int input_dim = 7;
    int hidden_dim = 7;
    std::vector<double> fc1_w;  // [hidden][input]
    std::vector<double> fc1_b;  // [hidden]
    std::vector<double> fc2_w;  // [input][hidden]
    std::vector<double> fc2_b;  // [input]

    static TransformParams zeros(int n, int hidden = 0);  // hidden 0 -> n
    static TransformParams random(int n, int hidden, SeededRng& rng, double scale = 0.5);

    void validate() const;
};

/// Per-branch scores, each in [0,1].
struct ImportanceVector {
    std::vector<double> values;

    size_t size() const { return values.size(); }
    double operator[](size_t i) const { return values[i]; }

    static ImportanceVector constant(size_t n, double v);
};

/// Run every pyramid branch; branch i uses params[i] with its dilation rate.
std::vector<ImageTensor> aspp_branches(const ImageTensor& x, const AsppConfig& cfg,
                                       std::span<const ConvParams> params);

/// Global average of each branch map (over channels and pixels).
std::vector<double> pooled_descriptor(std::span<const ImageTensor> ys);

/// Elementwise max(tanh(v), 0).
std::vector<double> clipped_tanh(std::span<const double> v);

/// Branch importances: clamp01(max(tanh(fc2(relu(fc1(y)))), 0)).
ImportanceVector importance_scores(std::span<const double> y, const TransformParams& t);

/// Analytic gradient of sum(importance_scores(y)) with respect to y.
std::vector<double> importance_scores_sum_grad(std::span<const double> y,
                                               const TransformParams& t);

/// Residual reweighting: branch i scaled by (1 + s_i), channel-concatenated.
ImageTensor enhance(std::span<const ImageTensor> ys, const ImportanceVector& s);

/// Full module parameters: shared pyramid plus per-modality transform and
/// channel-squeeze convolution.
struct AdaptiveAsppParams {
    AsppConfig config;
    std::vector<ConvParams> branches;
    TransformParams transform_seg;
    TransformParams transform_bnd;
    ConvParams squeeze_seg;
    ConvParams squeeze_bnd;

    static AdaptiveAsppParams random(const AsppConfig& cfg, int in_channels, int out_channels,
                                     SeededRng& rng);
    void validate() const;
};

struct AdaptiveAsppOutput {
    ImportanceVector scores_seg;
    ImportanceVector scores_bnd;
    ImageTensor enhanced_seg;  // pre-squeeze, branch_channels * N channels
    ImageTensor enhanced_bnd;
    ImageTensor out_seg;       // post-squeeze
    ImageTensor out_bnd;
};

/// Shared branches -> pooled descriptor -> per-modality scores -> residual
/// enhancement -> per-modality channel squeeze.
AdaptiveAsppOutput adaptive_aspp_forward(const ImageTensor& x, const AdaptiveAsppParams& p);

/// Segmentation-branch decoder fusion: F(z_s + z_s .* z_b [+ UP(m_above)]).
ImageTensor decoder_fuse_seg(const ImageTensor& z_s, const ImageTensor& z_b,
                             const ImageTensor* m_above, const ConvParams& f);

/// Boundary-branch decoder fusion: F(z_b [+ UP(m_above)]).
ImageTensor decoder_fuse_bnd(const ImageTensor& z_b, const ImageTensor* m_above,
                             const ConvParams& f);

/// Fused per-stage maps for both branches, index 0 = finest stage. Each
/// stage's spatial size is twice the next stage's; channel count uniform.
struct DecoderState {
    std::vector<ImageTensor> seg;
    std::vector<ImageTensor> bnd;

    void validate() const;
};

/// Chain the fusion from the deepest stage upward: the deepest stage fuses
/// without an above-map, every finer stage adds the upsampled previous result.
DecoderState run_decoder(const std::vector<ImageTensor>& z_s,
                         const std::vector<ImageTensor>& z_b, const ConvParams& f_seg,
                         const ConvParams& f_bnd);

/// JSON fixture round-trip (shapes plus row-major weights) so external
/// oracles can load identical parameters.
void save_aspp_fixture(const std::filesystem::path& path, const AdaptiveAsppParams& params,
                       const ImageTensor* input = nullptr);
AdaptiveAsppParams load_aspp_fixture(const std::filesystem::path& path,
                                     ImageTensor* input_out = nullptr);

}  // namespace fakemix::nn
