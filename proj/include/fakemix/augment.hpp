#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fakemix/rng.hpp"
#include "fakemix/types.hpp"

namespace fakemix::aug {

/// One training triple: image, segmentation label, boundary-band label.
struct Sample {
    ImageTensor image;
    BinaryMask seg;
    BinaryMask boundary;

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// What fills the pasted band region.
enum class ContentMode { boundary, zero, mean, random };

ContentMode content_mode_from_string(const std::string& s);
std::string to_string(ContentMode m);

struct FakeMixConfig {
    double lambda = 0.5;       // translation range as a fraction of image size
    double keep_prob = 0.5;    // probability of returning the base unchanged
    int repetitions = 3;       // number of pasted bands when not kept
    ContentMode content = ContentMode::boundary;
    bool reuse_donor = false;  // true: one donor reused across repetitions
    std::array<double, 3> dataset_mean{0.5, 0.5, 0.5};  // ContentMode::mean fill

    void validate() const;
};

/// Indexable pool of donor samples with its own selection stream.
/// Optionally excludes one index (the base sample) from selection.
class DonorSource {
public:
    DonorSource(std::span<const Sample> pool, SeededRng& rng,
                std::optional<size_t> exclude = std::nullopt)
        : pool_(pool), rng_(&rng), exclude_(exclude) {}

    size_t size() const { return pool_.size(); }
    size_t selectable() const {
        return exclude_ && pool_.size() > 1 ? pool_.size() - 1 : pool_.size();
    }

    /// Draw a donor uniformly; remembers the drawn index.
    const Sample& draw();
    size_t last_index() const { return last_index_; }

private:
    std::span<const Sample> pool_;
    SeededRng* rng_;
    std::optional<size_t> exclude_;
    size_t last_index_ = 0;
};

/// Per-repetition record sufficient to replay a composite exactly.
struct DonorRecord {
    size_t index = 0;
    TranslationVector shift;          // band translation
    TranslationVector content_shift;  // ContentMode::random only (toroidal)
};

struct FakeMixProvenance {
    bool kept = false;
    std::vector<DonorRecord> donors;
};

/// Band content of a donor: image masked by its boundary, zero elsewhere.
ImageTensor extract_t_boundary(const Sample& donor);

/// Deterministic single composite: translate the donor band and its content
/// by `shift` and paste onto base.image; labels pass through unchanged.
/// The donor is resized to the base's size first if needed.
Sample fakemix_composite(const Sample& base, const Sample& donor, const FakeMixConfig& cfg,
                         TranslationVector shift, TranslationVector content_shift = {});

/// One pasted band with a freshly drawn translation.
Sample fakemix_once(const Sample& base, const Sample& donor, const FakeMixConfig& cfg,
                    SeededRng& rng);

/// Full gated augmentation: with probability keep_prob return base unchanged,
/// otherwise chain `repetitions` composites, each with a freshly drawn donor
/// (or the first donor reused when cfg.reuse_donor) and translation.
Sample fakemix(const Sample& base, DonorSource& donors, const FakeMixConfig& cfg,
               SeededRng& rng, FakeMixProvenance* provenance = nullptr);

/// Linear image blend with lam drawn from Beta(alpha, alpha); labels come
/// from the dominant sample (lam >= 0.5 keeps a's labels).
Sample mixup(const Sample& a, const Sample& b, double alpha, SeededRng& rng,
             double* lambda_out = nullptr);
Sample mixup_blend(const Sample& a, const Sample& b, double lam);

/// Zero a square hole of side hole_size at a uniform random center.
Sample cutout(const Sample& a, int hole_size, SeededRng& rng,
              int* cx_out = nullptr, int* cy_out = nullptr);
Sample cutout_at(const Sample& a, int cx, int cy, int hole_size);

/// Clipped rectangle in image coordinates.
struct PatchRect {
    int x0 = 0, y0 = 0, w = 0, h = 0;
};

/// Copy a random patch (area ratio ~ U(0,1), image aspect) from b into a,
/// for image, seg and boundary simultaneously.
Sample cutmix(const Sample& a, const Sample& b, SeededRng& rng,
              PatchRect* rect_out = nullptr);
Sample cutmix_patch(const Sample& a, const Sample& b, PatchRect rect);

}  // namespace fakemix::aug
