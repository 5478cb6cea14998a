#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fakemix/types.hpp"

namespace fakemix::metrics {

/// One-vs-rest pixel counts for a single class.
struct ConfusionCounts {
    int64_t tp = 0;
    int64_t tn = 0;
    int64_t fp = 0;
    int64_t fn = 0;

    int64_t positives() const { return tp + fn; }
    int64_t negatives() const { return tn + fp; }
    int64_t total() const { return tp + tn + fp + fn; }

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp; tn += o.tn; fp += o.fp; fn += o.fn;
        return *this;
    }
};

/// Per-class one-vs-rest tallies; each class's counts sum to the pixel count.
std::vector<ConfusionCounts> confusion_counts(const LabelMask& pred, const LabelMask& gt,
                                              int classes);

/// 100 * TP / (TP + FP + FN); a class absent from both pred and gt scores 100.
double iou_percent(const ConfusionCounts& c);
double miou_percent(std::span<const ConfusionCounts> counts);

/// 100 * correct / total.
double pixel_accuracy(const LabelMask& pred, const LabelMask& gt);

/// Mean absolute error between a [0,1] probability map and a binary mask.
double mae(const ImageTensor& pred_prob, const BinaryMask& gt);

/// Balanced error rate, 100 * (1 - (TP/Np + TN/Nn) / 2). Empty when the
/// class has no positives or no negatives in the ground truth+prediction mix.
std::optional<double> ber_percent(const ConfusionCounts& c);

/// Mean BER over classes with defined BER; empty if none qualify.
std::optional<double> mber_percent(std::span<const ConfusionCounts> counts);

struct MetricsReport {
    double acc = 0.0;                      // percent
    std::map<int, double> iou_per_class;   // percent
    double miou = 0.0;                     // percent
    double mae = 0.0;                      // [0,1], averaged per image
    std::map<int, double> ber_per_class;   // percent, defined classes only
    std::optional<double> mber;            // percent
    std::vector<ConfusionCounts> pixel_counts;
    int images = 0;
    int classes = 0;

    std::string to_json() const;  // pretty, with aggregation metadata
};

/// Evaluate a directory of predictions against ground truth, paired by file
/// stem. Confusion counts are summed across images; MAE is averaged per
/// image. Unpaired or misshapen files raise std::runtime_error.
MetricsReport evaluate_dataset(const std::filesystem::path& pred_dir,
                               const std::filesystem::path& gt_dir, int classes);

}  // namespace fakemix::metrics
