#pragma once

#include <vector>

#include "fakemix/types.hpp"

namespace fakemix::nn {

/// Soft dice loss, 1 - (2*sum(p*g) + eps) / (sum(p) + sum(g) + eps), eps = 1.
/// pred is a single-channel probability map in [0,1].
double dice_loss(const ImageTensor& pred, const BinaryMask& gt);

/// Analytic gradient of dice_loss with respect to pred (flattened).
std::vector<double> dice_loss_grad(const ImageTensor& pred, const BinaryMask& gt);

/// Mean over pixels of -log softmax(logits)[gt]. logits has one channel per
/// class; gt ids must be < logits.channels().
double cross_entropy_loss(const ImageTensor& logits, const LabelMask& gt);

/// Per-pixel channel max, min-max normalized to [0,1]. A constant map
/// normalizes to all zeros.
ImageTensor visualize_features(const ImageTensor& m);

}  // namespace fakemix::nn
