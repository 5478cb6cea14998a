#include "fakemix/nn/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fakemix::nn {

namespace {

constexpr double kDiceEps = 1.0;

void check_pair(const ImageTensor& pred, const BinaryMask& gt) {
    if (pred.channels() != 1)
        throw std::invalid_argument("dice: pred must be single channel");
    if (pred.height() != gt.height() || pred.width() != gt.width())
        throw std::invalid_argument("dice: pred/gt size mismatch");
}

}  // namespace

double dice_loss(const ImageTensor& pred, const BinaryMask& gt) {
    check_pair(pred, gt);
    double inter = 0.0, psum = 0.0, gsum = 0.0;
    auto p = pred.data();
    auto g = gt.data();
    for (size_t i = 0; i < p.size(); ++i) {
        inter += p[i] * g[i];
        psum += p[i];
        gsum += g[i];
    }
    return 1.0 - (2.0 * inter + kDiceEps) / (psum + gsum + kDiceEps);
}

std::vector<double> dice_loss_grad(const ImageTensor& pred, const BinaryMask& gt) {
    check_pair(pred, gt);
    double inter = 0.0, psum = 0.0, gsum = 0.0;
    auto p = pred.data();
    auto g = gt.data();
    for (size_t i = 0; i < p.size(); ++i) {
        inter += p[i] * g[i];
        psum += p[i];
        gsum += g[i];
    }
    const double num = 2.0 * inter + kDiceEps;
    const double den = psum + gsum + kDiceEps;
    std::vector<double> grad(p.size());
    for (size_t i = 0; i < p.size(); ++i)
        grad[i] = -(2.0 * g[i] * den - num) / (den * den);
    return grad;
}

double cross_entropy_loss(const ImageTensor& logits, const LabelMask& gt) {
    if (logits.height() != gt.height() || logits.width() != gt.width())
        throw std::invalid_argument("cross_entropy: logits/gt size mismatch");
    const int classes = logits.channels();
    double total = 0.0;
    for (int y = 0; y < gt.height(); ++y) {
        for (int x = 0; x < gt.width(); ++x) {
            const int32_t id = gt.at(y, x);
            if (id < 0 || id >= classes)
                throw std::invalid_argument("cross_entropy: label id out of range");
            double mx = logits.at(y, x, 0);
            for (int c = 1; c < classes; ++c) mx = std::max(mx, logits.at(y, x, c));
            double lse = 0.0;
            for (int c = 0; c < classes; ++c) lse += std::exp(logits.at(y, x, c) - mx);
            total += mx + std::log(lse) - logits.at(y, x, id);
        }
    }
    return total / static_cast<double>(gt.size());
}

ImageTensor visualize_features(const ImageTensor& m) {
    ImageTensor out(m.height(), m.width(), 1);
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            double v = m.at(y, x, 0);
            for (int c = 1; c < m.channels(); ++c) v = std::max(v, m.at(y, x, c));
            out.at(y, x) = v;
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        }
    }
    const double range = hi - lo;
    for (double& v : out.data()) v = range > 0.0 ? (v - lo) / range : 0.0;
    return out;
}

}  // namespace fakemix::nn
