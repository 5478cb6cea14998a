#include "fakemix/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fakemix/interp.hpp"

namespace fakemix::aug {
namespace {

// Shift with wrap-around; used to lift band content from a random region.
ImageTensor translate_toroidal(const ImageTensor& src, TranslationVector d) {
    const int h = src.height(), w = src.width(), c = src.channels();
    ImageTensor out(h, w, c);
    for (int y = 0; y < h; ++y) {
        const int sy = ((y - d.dy) % h + h) % h;
        for (int x = 0; x < w; ++x) {
            const int sx = ((x - d.dx) % w + w) % w;
            for (int ch = 0; ch < c; ++ch) out.at(y, x, ch) = src.at(sy, sx, ch);
        }
    }
    return out;
}

Sample resize_to(const Sample& s, int h, int w) {
    Sample out;
    out.image = upsample_bilinear(s.image, h, w);
    out.seg = resize_nearest(s.seg, h, w);
    out.boundary = resize_nearest(s.boundary, h, w);
    return out;
}

void check_sample(const Sample& s, const char* who) {
    if (s.image.height() != s.seg.height() || s.image.width() != s.seg.width() ||
        s.image.height() != s.boundary.height() || s.image.width() != s.boundary.width())
        throw std::invalid_argument(std::string(who) + ": image/seg/boundary sizes differ");
}

}  // namespace

ContentMode content_mode_from_string(const std::string& s) {
    if (s == "boundary") return ContentMode::boundary;
    if (s == "zero") return ContentMode::zero;
    if (s == "mean") return ContentMode::mean;
    if (s == "random") return ContentMode::random;
    throw std::invalid_argument("unknown content mode: " + s);
}

std::string to_string(ContentMode m) {
    switch (m) {
        case ContentMode::boundary: return "boundary";
        case ContentMode::zero: return "zero";
        case ContentMode::mean: return "mean";
        case ContentMode::random: return "random";
    }
    throw std::logic_error("unreachable");
}

void FakeMixConfig::validate() const {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("FakeMixConfig: lambda must be in [0,1]");
    if (keep_prob < 0.0 || keep_prob > 1.0)
        throw std::invalid_argument("FakeMixConfig: keep_prob must be in [0,1]");
    if (repetitions < 0)
        throw std::invalid_argument("FakeMixConfig: repetitions must be >= 0");
}

const Sample& DonorSource::draw() {
    if (pool_.empty()) throw std::runtime_error("DonorSource: empty pool");
    if (exclude_ && pool_.size() > 1) {
        // Uniform over every index but the excluded one.
        size_t i = rng_->uniform_index(pool_.size() - 1);
        if (i >= *exclude_) ++i;
        last_index_ = i;
    } else {
        last_index_ = rng_->uniform_index(pool_.size());
    }
    return pool_[last_index_];
}

ImageTensor extract_t_boundary(const Sample& donor) {
    check_sample(donor, "extract_t_boundary");
    return elementwise_mul(donor.image, donor.boundary);
}

Sample fakemix_composite(const Sample& base, const Sample& donor, const FakeMixConfig& cfg,
                         TranslationVector shift, TranslationVector content_shift) {
    check_sample(base, "fakemix_composite");
    const int h = base.image.height(), w = base.image.width();

    const Sample* d = &donor;
    Sample resized;
    if (donor.image.height() != h || donor.image.width() != w) {
        resized = resize_to(donor, h, w);
        d = &resized;
    }
    if (d->image.channels() != base.image.channels())
        throw std::invalid_argument("fakemix_composite: channel mismatch");

    const BinaryMask band = translate_zero_fill(d->boundary, shift);

    ImageTensor content(h, w, base.image.channels(), 0.0);
    switch (cfg.content) {
        case ContentMode::boundary:
            content = translate_zero_fill(extract_t_boundary(*d), shift);
            break;
        case ContentMode::zero:
            break;  // stays zero
        case ContentMode::mean:
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    if (!band.at(y, x)) continue;
                    for (int c = 0; c < content.channels(); ++c)
                        content.at(y, x, c) = cfg.dataset_mean[std::min(c, 2)];
                }
            break;
        case ContentMode::random:
            content = elementwise_mul(translate_toroidal(d->image, content_shift), band);
            break;
    }

    // Hard-switch compositing: the band mask is {0,1}, so the arithmetic form
    // selects exactly one source per pixel with no blending residue.
    Sample out;
    out.image = ImageTensor(h, w, base.image.channels());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double keep = 1.0 - band.at(y, x);
            for (int c = 0; c < out.image.channels(); ++c)
                out.image.at(y, x, c) = keep * base.image.at(y, x, c) + content.at(y, x, c);
        }
    out.seg = base.seg;
    out.boundary = base.boundary;
    return out;
}

Sample fakemix_once(const Sample& base, const Sample& donor, const FakeMixConfig& cfg,
                    SeededRng& rng) {
    cfg.validate();
    const int h = base.image.height(), w = base.image.width();
    const TranslationVector shift = sample_translation(w, h, cfg.lambda, rng);
    TranslationVector content_shift;
    if (cfg.content == ContentMode::random) {
        content_shift.dx = static_cast<int>(rng.uniform_int(0, w - 1));
        content_shift.dy = static_cast<int>(rng.uniform_int(0, h - 1));
    }
    return fakemix_composite(base, donor, cfg, shift, content_shift);
}

Sample fakemix(const Sample& base, DonorSource& donors, const FakeMixConfig& cfg,
               SeededRng& rng, FakeMixProvenance* provenance) {
    cfg.validate();
    check_sample(base, "fakemix");
    if (cfg.repetitions > 0 && donors.size() == 0)
        throw std::runtime_error("fakemix: empty donor pool with repetitions > 0");

    if (provenance) *provenance = {};
    // The keep/augment trial happens before any donor read.
    if (rng.bernoulli(cfg.keep_prob)) {
        if (provenance) provenance->kept = true;
        return base;
    }

    Sample out = base;
    const Sample* reused = nullptr;
    size_t reused_index = 0;
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        const Sample* donor;
        size_t donor_index;
        if (cfg.reuse_donor && reused) {
            donor = reused;
            donor_index = reused_index;
        } else {
            donor = &donors.draw();
            donor_index = donors.last_index();
            if (cfg.reuse_donor) {
                reused = donor;
                reused_index = donor_index;
            }
        }

        const int h = out.image.height(), w = out.image.width();
        const TranslationVector shift = sample_translation(w, h, cfg.lambda, rng);
        TranslationVector content_shift;
        if (cfg.content == ContentMode::random) {
            content_shift.dx = static_cast<int>(rng.uniform_int(0, w - 1));
            content_shift.dy = static_cast<int>(rng.uniform_int(0, h - 1));
        }
        out = fakemix_composite(out, *donor, cfg, shift, content_shift);
        if (provenance)
            provenance->donors.push_back({donor_index, shift, content_shift});
    }
    return out;
}

Sample mixup_blend(const Sample& a, const Sample& b, double lam) {
    if (!a.image.same_shape(b.image))
        throw std::invalid_argument("mixup: image shape mismatch");
    Sample out;
    out.image = ImageTensor(a.image.height(), a.image.width(), a.image.channels());
    auto dst = out.image.data();
    auto pa = a.image.data();
    auto pb = b.image.data();
    for (size_t i = 0; i < dst.size(); ++i) dst[i] = lam * pa[i] + (1.0 - lam) * pb[i];
    // Hard labels from the dominant sample keep the supervision a valid mask.
    const Sample& labels = lam >= 0.5 ? a : b;
    out.seg = labels.seg;
    out.boundary = labels.boundary;
    return out;
}

Sample mixup(const Sample& a, const Sample& b, double alpha, SeededRng& rng,
             double* lambda_out) {
    if (alpha <= 0.0) throw std::invalid_argument("mixup: alpha must be > 0");
    const double lam = rng.beta(alpha, alpha);
    if (lambda_out) *lambda_out = lam;
    return mixup_blend(a, b, lam);
}

Sample cutout_at(const Sample& a, int cx, int cy, int hole_size) {
    if (hole_size < 0) throw std::invalid_argument("cutout: hole_size must be >= 0");
    Sample out = a;
    const int h = a.image.height(), w = a.image.width();
    const int x0 = std::max(0, cx - hole_size / 2);
    const int y0 = std::max(0, cy - hole_size / 2);
    const int x1 = std::min(w, cx - hole_size / 2 + hole_size);
    const int y1 = std::min(h, cy - hole_size / 2 + hole_size);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            for (int c = 0; c < a.image.channels(); ++c) out.image.at(y, x, c) = 0.0;
    return out;
}

Sample cutout(const Sample& a, int hole_size, SeededRng& rng, int* cx_out, int* cy_out) {
    const int cx = static_cast<int>(rng.uniform_int(0, a.image.width() - 1));
    const int cy = static_cast<int>(rng.uniform_int(0, a.image.height() - 1));
    if (cx_out) *cx_out = cx;
    if (cy_out) *cy_out = cy;
    return cutout_at(a, cx, cy, hole_size);
}

Sample cutmix_patch(const Sample& a, const Sample& b, PatchRect rect) {
    if (!a.image.same_shape(b.image) || !a.seg.same_shape(b.seg) ||
        !a.boundary.same_shape(b.boundary))
        throw std::invalid_argument("cutmix: shape mismatch");
    Sample out = a;
    const int x0 = std::max(0, rect.x0);
    const int y0 = std::max(0, rect.y0);
    const int x1 = std::min(a.image.width(), rect.x0 + rect.w);
    const int y1 = std::min(a.image.height(), rect.y0 + rect.h);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            for (int c = 0; c < a.image.channels(); ++c)
                out.image.at(y, x, c) = b.image.at(y, x, c);
            out.seg.at(y, x) = b.seg.at(y, x);
            out.boundary.at(y, x) = b.boundary.at(y, x);
        }
    return out;
}

Sample cutmix(const Sample& a, const Sample& b, SeededRng& rng, PatchRect* rect_out) {
    const int h = a.image.height(), w = a.image.width();
    // Patch area ratio uniform in (0,1); sides scale with sqrt so the image
    // aspect is preserved.
    const double ratio = rng.uniform();
    const double side = std::sqrt(ratio);
    const int pw = static_cast<int>(std::lround(w * side));
    const int ph = static_cast<int>(std::lround(h * side));
    const int cx = static_cast<int>(rng.uniform_int(0, w - 1));
    const int cy = static_cast<int>(rng.uniform_int(0, h - 1));
    PatchRect rect{cx - pw / 2, cy - ph / 2, pw, ph};
    if (rect_out) *rect_out = rect;
    return cutmix_patch(a, b, rect);
}

}  // namespace fakemix::aug
