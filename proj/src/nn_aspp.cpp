#include "fakemix/nn/aspp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "fakemix/interp.hpp"

namespace fakemix::nn {

using nlohmann::json;

void AsppConfig::validate() const {
    if (branch_count < 1) throw std::invalid_argument("AsppConfig: branch_count must be >= 1");
    if (static_cast<int>(dilation_rates.size()) != branch_count)
        throw std::invalid_argument("AsppConfig: |dilation_rates| != branch_count");
    for (size_t i = 0; i + 1 < dilation_rates.size(); ++i)
        if (dilation_rates[i] >= dilation_rates[i + 1])
            throw std::invalid_argument("AsppConfig: dilation rates must be strictly increasing");
    if (!dilation_rates.empty() && dilation_rates.front() < 1)
        throw std::invalid_argument("AsppConfig: dilation rates must be >= 1");
    if (branch_channels < 1)
        throw std::invalid_argument("AsppConfig: branch_channels must be >= 1");
}

TransformParams TransformParams::zeros(int n, int hidden) {
    if (hidden <= 0) hidden = n;
    TransformParams t;
    t.input_dim = n;
    t.hidden_dim = hidden;
    t.fc1_w.assign(static_cast<size_t>(hidden) * n, 0.0);
    t.fc1_b.assign(hidden, 0.0);
    t.fc2_w.assign(static_cast<size_t>(n) * hidden, 0.0);
    t.fc2_b.assign(n, 0.0);
    return t;
}

TransformParams TransformParams::random(int n, int hidden, SeededRng& rng, double scale) {
    TransformParams t = zeros(n, hidden);
    for (double& v : t.fc1_w) v = rng.uniform(-scale, scale);
    for (double& v : t.fc1_b) v = rng.uniform(-scale, scale);
    for (double& v : t.fc2_w) v = rng.uniform(-scale, scale);
    for (double& v : t.fc2_b) v = rng.uniform(-scale, scale);
    return t;
}

void TransformParams::validate() const {
    if (input_dim < 1 || hidden_dim < 1)
        throw std::invalid_argument("TransformParams: dims must be >= 1");
    if (fc1_w.size() != static_cast<size_t>(hidden_dim) * input_dim ||
        fc1_b.size() != static_cast<size_t>(hidden_dim) ||
        fc2_w.size() != static_cast<size_t>(input_dim) * hidden_dim ||
        fc2_b.size() != static_cast<size_t>(input_dim))
        throw std::invalid_argument("TransformParams: weight shape mismatch");
}

ImportanceVector ImportanceVector::constant(size_t n, double v) {
    if (v < 0.0 || v > 1.0)
        throw std::invalid_argument("ImportanceVector: values must be in [0,1]");
    return ImportanceVector{std::vector<double>(n, v)};
}

std::vector<ImageTensor> aspp_branches(const ImageTensor& x, const AsppConfig& cfg,
                                       std::span<const ConvParams> params) {
    cfg.validate();
    if (static_cast<int>(params.size()) != cfg.branch_count)
        throw std::invalid_argument("aspp_branches: one ConvParams per branch required");
    std::vector<ImageTensor> ys;
    ys.reserve(params.size());
    for (int i = 0; i < cfg.branch_count; ++i) {
        if (params[i].dilation != cfg.dilation_rates[i])
            throw std::invalid_argument("aspp_branches: branch dilation disagrees with config");
        if (params[i].out_channels != cfg.branch_channels)
            throw std::invalid_argument("aspp_branches: branch channel count disagrees");
        ys.push_back(dilated_conv(x, params[i]));
    }
    return ys;
}

std::vector<double> pooled_descriptor(std::span<const ImageTensor> ys) {
    std::vector<double> out;
    out.reserve(ys.size());
    for (const ImageTensor& y : ys) {
        double sum = 0.0;
        for (double v : y.data()) sum += v;
        out.push_back(sum / static_cast<double>(y.size()));
    }
    return out;
}

std::vector<double> clipped_tanh(std::span<const double> v) {
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = std::max(std::tanh(v[i]), 0.0);
    return out;
}

namespace {

std::vector<double> affine(std::span<const double> w, std::span<const double> b,
                           std::span<const double> x, int rows, int cols) {
    std::vector<double> out(b.begin(), b.end());
    for (int r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (int c = 0; c < cols; ++c) acc += w[static_cast<size_t>(r) * cols + c] * x[c];
        out[r] += acc;
    }
    return out;
}

}  // namespace

ImportanceVector importance_scores(std::span<const double> y, const TransformParams& t) {
    t.validate();
    if (static_cast<int>(y.size()) != t.input_dim)
        throw std::invalid_argument("importance_scores: descriptor length != input_dim");

    std::vector<double> hidden = affine(t.fc1_w, t.fc1_b, y, t.hidden_dim, t.input_dim);
    for (double& v : hidden) v = std::max(v, 0.0);
    std::vector<double> raw = affine(t.fc2_w, t.fc2_b, hidden, t.input_dim, t.hidden_dim);
    std::vector<double> s = clipped_tanh(raw);
    for (double& v : s) v = std::clamp(v, 0.0, 1.0);
    return ImportanceVector{std::move(s)};
}

std::vector<double> importance_scores_sum_grad(std::span<const double> y,
                                               const TransformParams& t) {
    t.validate();
    const int n = t.input_dim, hdim = t.hidden_dim;
    std::vector<double> pre_h = affine(t.fc1_w, t.fc1_b, y, hdim, n);
    std::vector<double> hidden(pre_h);
    for (double& v : hidden) v = std::max(v, 0.0);
    std::vector<double> raw = affine(t.fc2_w, t.fc2_b, hidden, n, hdim);

    // d(sum s)/d(raw_i): tanh' where the clip is inactive, else 0.
    std::vector<double> dz(n);
    for (int i = 0; i < n; ++i) {
        const double th = std::tanh(raw[i]);
        dz[i] = th > 0.0 ? 1.0 - th * th : 0.0;
    }
    std::vector<double> dh(hdim, 0.0);
    for (int j = 0; j < hdim; ++j) {
        for (int i = 0; i < n; ++i) dh[j] += dz[i] * t.fc2_w[static_cast<size_t>(i) * hdim + j];
        if (pre_h[j] <= 0.0) dh[j] = 0.0;  // relu gate
    }
    std::vector<double> dy(n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < hdim; ++j)
            dy[k] += dh[j] * t.fc1_w[static_cast<size_t>(j) * n + k];
    return dy;
}

ImageTensor enhance(std::span<const ImageTensor> ys, const ImportanceVector& s) {
    if (ys.empty()) throw std::invalid_argument("enhance: no branch maps");
    if (s.size() != ys.size())
        throw std::invalid_argument("enhance: one score per branch required");
    const int h = ys[0].height(), w = ys[0].width();
    int total_c = 0;
    for (const ImageTensor& y : ys) {
        if (y.height() != h || y.width() != w)
            throw std::invalid_argument("enhance: branch maps must share spatial size");
        total_c += y.channels();
    }

    ImageTensor out(h, w, total_c);
    int c_off = 0;
    for (size_t i = 0; i < ys.size(); ++i) {
        const double scale = 1.0 + s[i];  // residual: Y*s + Y
        const int c = ys[i].channels();
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                for (int ch = 0; ch < c; ++ch)
                    out.at(y, x, c_off + ch) = ys[i].at(y, x, ch) * scale;
        c_off += c;
    }
    return out;
}

AdaptiveAsppParams AdaptiveAsppParams::random(const AsppConfig& cfg, int in_channels,
                                              int out_channels, SeededRng& rng) {
    cfg.validate();
    AdaptiveAsppParams p;
    p.config = cfg;
    for (int i = 0; i < cfg.branch_count; ++i) {
        const int rate = cfg.dilation_rates[i];
        const int kernel = rate == 1 ? 1 : 3;  // unit-rate branch is pointwise
        p.branches.push_back(
            ConvParams::random(in_channels, cfg.branch_channels, kernel, rate, rng));
    }
    p.transform_seg = TransformParams::random(cfg.branch_count, cfg.branch_count, rng);
    p.transform_bnd = TransformParams::random(cfg.branch_count, cfg.branch_count, rng);
    const int concat_c = cfg.branch_channels * cfg.branch_count;
    p.squeeze_seg = ConvParams::random(concat_c, out_channels, 1, 1, rng);
    p.squeeze_bnd = ConvParams::random(concat_c, out_channels, 1, 1, rng);
    return p;
}

void AdaptiveAsppParams::validate() const {
    config.validate();
    if (static_cast<int>(branches.size()) != config.branch_count)
        throw std::invalid_argument("AdaptiveAsppParams: branch count mismatch");
    for (const ConvParams& b : branches) b.validate();
    transform_seg.validate();
    transform_bnd.validate();
    if (transform_seg.input_dim != config.branch_count ||
        transform_bnd.input_dim != config.branch_count)
        throw std::invalid_argument("AdaptiveAsppParams: transform dim != branch count");
    squeeze_seg.validate();
    squeeze_bnd.validate();
    const int concat_c = config.branch_channels * config.branch_count;
    if (squeeze_seg.in_channels != concat_c || squeeze_bnd.in_channels != concat_c)
        throw std::invalid_argument("AdaptiveAsppParams: squeeze input channel mismatch");
}

AdaptiveAsppOutput adaptive_aspp_forward(const ImageTensor& x, const AdaptiveAsppParams& p) {
    p.validate();
    const std::vector<ImageTensor> ys = aspp_branches(x, p.config, p.branches);
    const std::vector<double> desc = pooled_descriptor(ys);

    AdaptiveAsppOutput out;
    out.scores_seg = importance_scores(desc, p.transform_seg);
    out.scores_bnd = importance_scores(desc, p.transform_bnd);
    out.enhanced_seg = enhance(ys, out.scores_seg);
    out.enhanced_bnd = enhance(ys, out.scores_bnd);
    out.out_seg = dilated_conv(out.enhanced_seg, p.squeeze_seg);
    out.out_bnd = dilated_conv(out.enhanced_bnd, p.squeeze_bnd);
    return out;
}

namespace {

ImageTensor fuse_common(const ImageTensor& main, const ImageTensor* m_above,
                        const ConvParams& f) {
    ImageTensor acc = main;
    if (m_above) {
        if (m_above->channels() != main.channels())
            throw std::invalid_argument("decoder fuse: stage channel mismatch");
        const ImageTensor up = upsample_bilinear(*m_above, main.height(), main.width());
        auto dst = acc.data();
        auto src = up.data();
        for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    return dilated_conv(acc, f);
}

}  // namespace

ImageTensor decoder_fuse_seg(const ImageTensor& z_s, const ImageTensor& z_b,
                             const ImageTensor* m_above, const ConvParams& f) {
    if (!z_s.same_shape(z_b))
        throw std::invalid_argument("decoder_fuse_seg: branch shapes differ");
    // Boundary features gate the segmentation stream: z_s + z_s .* z_b.
    ImageTensor gated = z_s;
    auto dst = gated.data();
    auto zb = z_b.data();
    for (size_t i = 0; i < dst.size(); ++i) dst[i] += dst[i] * zb[i];
    return fuse_common(gated, m_above, f);
}

ImageTensor decoder_fuse_bnd(const ImageTensor& z_b, const ImageTensor* m_above,
                             const ConvParams& f) {
    return fuse_common(z_b, m_above, f);
}

void DecoderState::validate() const {
    if (seg.size() != bnd.size())
        throw std::invalid_argument("DecoderState: branch stage counts differ");
    for (size_t p = 0; p < seg.size(); ++p) {
        if (!seg[p].same_shape(bnd[p]))
            throw std::invalid_argument("DecoderState: branch shapes differ at a stage");
        if (p + 1 < seg.size()) {
            if (seg[p].height() != 2 * seg[p + 1].height() ||
                seg[p].width() != 2 * seg[p + 1].width())
                throw std::invalid_argument("DecoderState: stage sizes must halve");
            if (seg[p].channels() != seg[p + 1].channels())
                throw std::invalid_argument("DecoderState: stage channel counts differ");
        }
    }
}

DecoderState run_decoder(const std::vector<ImageTensor>& z_s,
                         const std::vector<ImageTensor>& z_b, const ConvParams& f_seg,
                         const ConvParams& f_bnd) {
    if (z_s.size() != z_b.size() || z_s.empty())
        throw std::invalid_argument("run_decoder: need matching non-empty stage lists");

    const size_t stages = z_s.size();
    DecoderState st;
    st.seg.resize(stages);
    st.bnd.resize(stages);
    for (size_t p = stages; p-- > 0;) {
        const ImageTensor* above_s = p + 1 < stages ? &st.seg[p + 1] : nullptr;
        const ImageTensor* above_b = p + 1 < stages ? &st.bnd[p + 1] : nullptr;
        st.seg[p] = decoder_fuse_seg(z_s[p], z_b[p], above_s, f_seg);
        st.bnd[p] = decoder_fuse_bnd(z_b[p], above_b, f_bnd);
    }
    st.validate();
    return st;
}

namespace {

json conv_to_json(const ConvParams& c) {
    return json{{"in_channels", c.in_channels}, {"out_channels", c.out_channels},
                {"kernel", c.kernel},           {"dilation", c.dilation},
                {"weights", c.weights},         {"bias", c.bias}};
}

ConvParams conv_from_json(const json& j) {
    ConvParams c = ConvParams::make(j.at("in_channels").get<int>(),
                                    j.at("out_channels").get<int>(),
                                    j.at("kernel").get<int>(), j.at("dilation").get<int>());
    c.weights = j.at("weights").get<std::vector<double>>();
    c.bias = j.at("bias").get<std::vector<double>>();
    c.validate();
    return c;
}

json transform_to_json(const TransformParams& t) {
    return json{{"input_dim", t.input_dim}, {"hidden_dim", t.hidden_dim},
                {"fc1_w", t.fc1_w},         {"fc1_b", t.fc1_b},
                {"fc2_w", t.fc2_w},         {"fc2_b", t.fc2_b}};
}

TransformParams transform_from_json(const json& j) {
    TransformParams t;
    t.input_dim = j.at("input_dim").get<int>();
    t.hidden_dim = j.at("hidden_dim").get<int>();
    t.fc1_w = j.at("fc1_w").get<std::vector<double>>();
    t.fc1_b = j.at("fc1_b").get<std::vector<double>>();
    t.fc2_w = j.at("fc2_w").get<std::vector<double>>();
    t.fc2_b = j.at("fc2_b").get<std::vector<double>>();
    t.validate();
    return t;
}

}  // namespace

void save_aspp_fixture(const std::filesystem::path& path, const AdaptiveAsppParams& params,
                       const ImageTensor* input) {
    params.validate();
    json j;
    j["format_version"] = 1;
    j["config"] = {{"branch_count", params.config.branch_count},
                   {"dilation_rates", params.config.dilation_rates},
                   {"branch_channels", params.config.branch_channels}};
    j["branches"] = json::array();
    for (const ConvParams& b : params.branches) j["branches"].push_back(conv_to_json(b));
    j["transform_seg"] = transform_to_json(params.transform_seg);
    j["transform_bnd"] = transform_to_json(params.transform_bnd);
    j["squeeze_seg"] = conv_to_json(params.squeeze_seg);
    j["squeeze_bnd"] = conv_to_json(params.squeeze_bnd);
    if (input) {
        j["input"] = {{"height", input->height()},
                      {"width", input->width()},
                      {"channels", input->channels()},
                      {"data", std::vector<double>(input->data().begin(), input->data().end())}};
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write fixture: " + path.string());
    out << j.dump(2) << "\n";
}

AdaptiveAsppParams load_aspp_fixture(const std::filesystem::path& path,
                                     ImageTensor* input_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read fixture: " + path.string());
    json j = json::parse(in);
    if (j.at("format_version").get<int>() != 1)
        throw std::runtime_error("unrecognized fixture version");

    AdaptiveAsppParams p;
    const json& cfg = j.at("config");
    p.config.branch_count = cfg.at("branch_count").get<int>();
    p.config.dilation_rates = cfg.at("dilation_rates").get<std::vector<int>>();
    p.config.branch_channels = cfg.at("branch_channels").get<int>();
    for (const json& b : j.at("branches")) p.branches.push_back(conv_from_json(b));
    p.transform_seg = transform_from_json(j.at("transform_seg"));
    p.transform_bnd = transform_from_json(j.at("transform_bnd"));
    p.squeeze_seg = conv_from_json(j.at("squeeze_seg"));
    p.squeeze_bnd = conv_from_json(j.at("squeeze_bnd"));
    p.validate();

    if (input_out && j.contains("input")) {
        const json& ji = j.at("input");
        *input_out = ImageTensor(ji.at("height").get<int>(), ji.at("width").get<int>(),
                                 ji.at("channels").get<int>(),
                                 ji.at("data").get<std::vector<double>>());
    }
    return p;
}

}  // namespace fakemix::nn
