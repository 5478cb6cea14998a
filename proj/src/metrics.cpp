#include "fakemix/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "fakemix/png_io.hpp"

namespace fakemix::metrics {

using nlohmann::json;

std::vector<ConfusionCounts> confusion_counts(const LabelMask& pred, const LabelMask& gt,
                                              int classes) {
    if (!pred.same_shape(gt))
        throw std::invalid_argument("confusion_counts: pred/gt size mismatch");
    if (classes < 1) throw std::invalid_argument("confusion_counts: classes must be >= 1");

    std::vector<ConfusionCounts> counts(classes);
    auto p = pred.data();
    auto g = gt.data();
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0 || p[i] >= classes || g[i] < 0 || g[i] >= classes)
            throw std::invalid_argument("confusion_counts: id out of range");
        if (p[i] == g[i]) {
            ++counts[p[i]].tp;
        } else {
            ++counts[p[i]].fp;
            ++counts[g[i]].fn;
        }
    }
    const auto total = static_cast<int64_t>(p.size());
    for (ConfusionCounts& c : counts) c.tn = total - c.tp - c.fp - c.fn;
    return counts;
}

double iou_percent(const ConfusionCounts& c) {
    const int64_t denom = c.tp + c.fp + c.fn;
    if (denom == 0) return 100.0;  // class absent everywhere
    return 100.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double miou_percent(std::span<const ConfusionCounts> counts) {
    if (counts.empty()) throw std::invalid_argument("miou: no classes");
    double sum = 0.0;
    for (const ConfusionCounts& c : counts) sum += iou_percent(c);
    return sum / static_cast<double>(counts.size());
}

double pixel_accuracy(const LabelMask& pred, const LabelMask& gt) {
    if (!pred.same_shape(gt))
        throw std::invalid_argument("pixel_accuracy: pred/gt size mismatch");
    auto p = pred.data();
    auto g = gt.data();
    int64_t correct = 0;
    for (size_t i = 0; i < p.size(); ++i) correct += p[i] == g[i];
    return 100.0 * static_cast<double>(correct) / static_cast<double>(p.size());
}

double mae(const ImageTensor& pred_prob, const BinaryMask& gt) {
    if (pred_prob.channels() != 1)
        throw std::invalid_argument("mae: pred must be single channel");
    if (pred_prob.height() != gt.height() || pred_prob.width() != gt.width())
        throw std::invalid_argument("mae: pred/gt size mismatch");
    auto p = pred_prob.data();
    auto g = gt.data();
    double sum = 0.0;
    for (size_t i = 0; i < p.size(); ++i) sum += std::fabs(p[i] - g[i]);
    return sum / static_cast<double>(p.size());
}

std::optional<double> ber_percent(const ConfusionCounts& c) {
    const int64_t np = c.positives();
    const int64_t nn = c.negatives();
    if (np == 0 || nn == 0) return std::nullopt;
    const double recall_pos = static_cast<double>(c.tp) / static_cast<double>(np);
    const double recall_neg = static_cast<double>(c.tn) / static_cast<double>(nn);
    return 100.0 * (1.0 - 0.5 * (recall_pos + recall_neg));
}

std::optional<double> mber_percent(std::span<const ConfusionCounts> counts) {
    double sum = 0.0;
    int defined = 0;
    for (const ConfusionCounts& c : counts) {
        if (auto b = ber_percent(c)) {
            sum += *b;
            ++defined;
        }
    }
    if (defined == 0) return std::nullopt;
    return sum / defined;
}

std::string MetricsReport::to_json() const {
    json j;
    j["format_version"] = 1;
    j["images"] = images;
    j["classes"] = classes;
    j["acc"] = acc;
    j["miou"] = miou;
    j["mae"] = mae;
    j["mber"] = mber ? json(*mber) : json(nullptr);
    json iou = json::object();
    for (const auto& [cls, v] : iou_per_class) iou[std::to_string(cls)] = v;
    j["iou_per_class"] = iou;
    json ber = json::object();
    for (const auto& [cls, v] : ber_per_class) ber[std::to_string(cls)] = v;
    j["ber_per_class"] = ber;
    json counts = json::array();
    for (size_t c = 0; c < pixel_counts.size(); ++c) {
        counts.push_back({{"class", c},
                          {"tp", pixel_counts[c].tp},
                          {"tn", pixel_counts[c].tn},
                          {"fp", pixel_counts[c].fp},
                          {"fn", pixel_counts[c].fn}});
    }
    j["pixel_counts"] = counts;
    j["aggregation"] = {{"acc", "plain pixel accuracy from summed counts"},
                        {"counts", "confusion counts summed across images"},
                        {"mae", "averaged per image"},
                        {"iou_empty_class", "scores 100 when absent from pred and gt"},
                        {"ber_skip", "classes with no positives or no negatives"}};
    return j.dump(2);
}

MetricsReport evaluate_dataset(const std::filesystem::path& pred_dir,
                               const std::filesystem::path& gt_dir, int classes) {
    namespace fs = std::filesystem;
    auto list_pngs = [](const fs::path& dir) {
        if (!fs::is_directory(dir))
            throw std::runtime_error("not a directory: " + dir.string());
        std::map<std::string, fs::path> by_stem;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
            by_stem[entry.path().stem().string()] = entry.path();
        }
        return by_stem;
    };

    const auto preds = list_pngs(pred_dir);
    const auto gts = list_pngs(gt_dir);
    if (preds.empty() || gts.empty())
        throw std::runtime_error("evaluate_dataset: no prediction/ground-truth pairs");
    for (const auto& [stem, path] : preds)
        if (!gts.count(stem))
            throw std::runtime_error("prediction without ground truth: " + path.string());
    for (const auto& [stem, path] : gts)
        if (!preds.count(stem))
            throw std::runtime_error("ground truth without prediction: " + path.string());

    // Binary runs accept {0,255} mask files; multi-class files must encode
    // literal ids.
    auto read_ids = [classes](const fs::path& path) {
        if (classes > 2) return read_label_png(path);
        const BinaryMask m = read_mask_png(path);
        LabelMask ids(m.height(), m.width());
        for (size_t i = 0; i < m.size(); ++i) ids.data()[i] = m.data()[i];
        return ids;
    };

    std::vector<ConfusionCounts> totals(classes);
    double mae_sum = 0.0;
    int64_t correct = 0, pixels = 0;
    for (const auto& [stem, ppath] : preds) {
        const LabelMask pred = read_ids(ppath);
        const LabelMask gt = read_ids(gts.at(stem));
        if (!pred.same_shape(gt))
            throw std::runtime_error("size mismatch for pair: " + stem);

        const std::vector<ConfusionCounts> counts = confusion_counts(pred, gt, classes);
        for (int c = 0; c < classes; ++c) totals[c] += counts[c];

        auto p = pred.data();
        auto g = gt.data();
        int64_t abs_sum = 0, eq = 0;
        for (size_t i = 0; i < p.size(); ++i) {
            abs_sum += (p[i] != 0) != (g[i] != 0);
            eq += p[i] == g[i];
        }
        mae_sum += static_cast<double>(abs_sum) / static_cast<double>(p.size());
        correct += eq;
        pixels += static_cast<int64_t>(p.size());
    }

    MetricsReport report;
    report.images = static_cast<int>(preds.size());
    report.classes = classes;
    report.acc = 100.0 * static_cast<double>(correct) / static_cast<double>(pixels);
    for (int c = 0; c < classes; ++c) {
        report.iou_per_class[c] = iou_percent(totals[c]);
        if (auto b = ber_percent(totals[c])) report.ber_per_class[c] = *b;
    }
    report.miou = miou_percent(totals);
    report.mber = mber_percent(totals);
    report.mae = mae_sum / static_cast<double>(report.images);
    report.pixel_counts = std::move(totals);
    return report;
}

}  // namespace fakemix::metrics
