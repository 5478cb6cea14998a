#include "fakemix/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fakemix/boundary.hpp"
#include "fakemix/morphology.hpp"
#include "fakemix/nn/aspp.hpp"
#include "fakemix/png_io.hpp"

namespace fakemix::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

Method method_from_string(const std::string& s) {
    if (s == "fakemix") return Method::fakemix;
    if (s == "mixup") return Method::mixup;
    if (s == "cutout") return Method::cutout;
    if (s == "cutmix") return Method::cutmix;
    throw std::invalid_argument("unknown method: " + s);
}

std::string to_string(Method m) {
    switch (m) {
        case Method::fakemix: return "fakemix";
        case Method::mixup: return "mixup";
        case Method::cutout: return "cutout";
        case Method::cutmix: return "cutmix";
    }
    throw std::logic_error("unreachable");
}

void RunConfig::validate() const {
    if (workers < 1) throw std::invalid_argument("RunConfig: workers must be >= 1");
    fakemix.validate();
    if (mixup_alpha <= 0.0)
        throw std::invalid_argument("RunConfig: mixup_alpha must be > 0");
}

namespace {

std::map<std::string, fs::path> pngs_by_stem(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    std::map<std::string, fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
        out[entry.path().stem().string()] = entry.path();
    }
    return out;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write: " + tmp.string());
        out << text;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

aug::Sample load_sample(const Manifest& m, const ManifestEntry& e) {
    aug::Sample s;
    s.image = read_image_png(m.image_path(e));
    s.seg = read_mask_png(m.seg_path(e));
    if (auto bp = m.boundary_path(e)) s.boundary = read_mask_png(*bp);
    return s;
}

/// Run fn(i) for i in [0, n) on `workers` threads. The first exception wins;
/// remaining work is abandoned.
void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::string first_error;

    auto body = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) break;
            try {
                fn(i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error.empty()) first_error = e.what();
                failed.store(true);
            }
        }
    };

    std::vector<std::thread> threads;
    for (int t = 1; t < workers; ++t) threads.emplace_back(body);
    body();
    for (std::thread& t : threads) t.join();
    if (failed.load()) throw std::runtime_error(first_error);
}

}  // namespace

Manifest cmd_ingest(const fs::path& image_dir, const fs::path& mask_dir,
                    const fs::path& out_manifest) {
    const auto images = pngs_by_stem(image_dir);
    const auto masks = pngs_by_stem(mask_dir);
    if (images.empty()) throw std::runtime_error("ingest: no images in " + image_dir.string());
    for (const auto& [stem, path] : images)
        if (!masks.count(stem))
            throw std::runtime_error("ingest: image without mask: " + path.string());
    for (const auto& [stem, path] : masks)
        if (!images.count(stem))
            throw std::runtime_error("ingest: mask without image: " + path.string());

    Manifest m;
    m.root = out_manifest.has_parent_path() ? out_manifest.parent_path() : fs::path(".");
    fs::create_directories(m.root);

    std::array<double, 3> sums{0.0, 0.0, 0.0};
    int64_t pixels = 0;
    for (const auto& [stem, ipath] : images) {
        const ImageTensor img = read_image_png(ipath);
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x)
                for (int c = 0; c < 3; ++c) sums[c] += img.at(y, x, c);
        pixels += static_cast<int64_t>(img.height()) * img.width();

        ManifestEntry e;
        e.id = stem;
        e.image = fs::relative(ipath, m.root);
        e.seg = fs::relative(masks.at(stem), m.root);
        m.entries.push_back(std::move(e));
    }
    for (int c = 0; c < 3; ++c) m.channel_mean[c] = sums[c] / static_cast<double>(pixels);
    m.save(out_manifest);
    return m;
}

Manifest cmd_gen_boundary(const fs::path& manifest_path, int thickness, const fs::path& out_dir) {
    Manifest m = Manifest::load(manifest_path);
    const fs::path band_dir = out_dir.empty() ? m.root / "boundary" : out_dir;
    fs::create_directories(band_dir);

    for (ManifestEntry& e : m.entries) {
        const LabelMask labels = read_label_png(m.seg_path(e));
        const BinaryMask gs = multiclass_to_binary(labels);
        BoundaryBandConfig cfg;
        cfg.thickness = thickness > 0
                            ? thickness
                            : auto_band_thickness(gs.height(), gs.width());
        const BinaryMask band = boundary_band(gs, cfg);
        const fs::path dst = band_dir / (e.id + ".png");
        write_mask_png(dst, band);
        e.boundary = fs::relative(dst, m.root);
    }
    m.save(manifest_path);
    return m;
}

namespace {

struct ProcessResult {
    std::string provenance;  // one JSON line
};

json donor_json(const Manifest& m, const aug::DonorRecord& rec, bool random_content) {
    json j{{"id", m.entries[rec.index].id}, {"dx", rec.shift.dx}, {"dy", rec.shift.dy}};
    if (random_content) {
        j["cdx"] = rec.content_shift.dx;
        j["cdy"] = rec.content_shift.dy;
    }
    return j;
}

ProcessResult process_entry(const Manifest& m, std::span<const aug::Sample> pool,
                            const RunConfig& cfg, size_t index) {
    const ManifestEntry& e = m.entries[index];
    const aug::Sample& base = pool[index];
    if (base.boundary.size() == 0)
        throw std::runtime_error("entry '" + e.id +
                                 "' has no boundary label; run gen-boundary first");

    // Two streams per entry: one for geometry/gating, one for donor choice.
    SeededRng geom(cfg.seed, 2 * index);
    SeededRng donor_rng(cfg.seed, 2 * index + 1);
    aug::DonorSource donors(pool, donor_rng, index);

    aug::Sample out;
    json prov{{"id", e.id}, {"method", to_string(cfg.method)}};
    switch (cfg.method) {
        case Method::fakemix: {
            aug::FakeMixProvenance fp;
            out = aug::fakemix(base, donors, cfg.fakemix, geom, &fp);
            prov["outcome"] = fp.kept ? "kept" : "augmented";
            json ds = json::array();
            const bool random_content = cfg.fakemix.content == aug::ContentMode::random;
            for (const aug::DonorRecord& rec : fp.donors)
                ds.push_back(donor_json(m, rec, random_content));
            prov["donors"] = ds;
            break;
        }
        case Method::mixup: {
            const aug::Sample& partner = donors.draw();
            double lam = 0.0;
            out = aug::mixup(base, partner, cfg.mixup_alpha, geom, &lam);
            prov["outcome"] = "augmented";
            prov["donors"] = json::array({{{"id", m.entries[donors.last_index()].id}}});
            prov["lambda"] = lam;
            break;
        }
        case Method::cutout: {
            const int side = std::min(base.image.height(), base.image.width());
            const int hole = cfg.cutout_hole >= 0 ? cfg.cutout_hole : side / 2;
            int cx = 0, cy = 0;
            out = aug::cutout(base, hole, geom, &cx, &cy);
            prov["outcome"] = "augmented";
            prov["donors"] = json::array();
            prov["hole"] = {{"cx", cx}, {"cy", cy}, {"size", hole}};
            break;
        }
        case Method::cutmix: {
            const aug::Sample& partner = donors.draw();
            aug::PatchRect rect;
            out = aug::cutmix(base, partner, geom, &rect);
            prov["outcome"] = "augmented";
            prov["donors"] = json::array({{{"id", m.entries[donors.last_index()].id}}});
            prov["patch"] = {{"x0", rect.x0}, {"y0", rect.y0}, {"w", rect.w}, {"h", rect.h}};
            break;
        }
    }

    write_image_png(cfg.out_dir / "images" / (e.id + ".png"), out.image);
    write_mask_png(cfg.out_dir / "seg" / (e.id + ".png"), out.seg);
    write_mask_png(cfg.out_dir / "boundary" / (e.id + ".png"), out.boundary);
    return ProcessResult{prov.dump()};
}

}  // namespace

void cmd_augment(const fs::path& manifest_path, const RunConfig& cfg) {
    cfg.validate();
    if (cfg.out_dir.empty()) throw std::invalid_argument("augment: output directory required");
    const Manifest m = Manifest::load(manifest_path);
    if (m.entries.empty()) throw std::runtime_error("augment: manifest has no entries");

    RunConfig run = cfg;
    run.fakemix.dataset_mean = m.channel_mean;

    std::vector<aug::Sample> pool(m.entries.size());
    parallel_for(pool.size(), run.workers,
                 [&](size_t i) { pool[i] = load_sample(m, m.entries[i]); });

    fs::create_directories(run.out_dir / "images");
    fs::create_directories(run.out_dir / "seg");
    fs::create_directories(run.out_dir / "boundary");

    std::vector<ProcessResult> results(m.entries.size());
    parallel_for(results.size(), run.workers,
                 [&](size_t i) { results[i] = process_entry(m, pool, run, i); });

    // Provenance is emitted in manifest order regardless of scheduling.
    std::string prov_text;
    for (const ProcessResult& r : results) {
        prov_text += r.provenance;
        prov_text += '\n';
    }
    write_text_atomic(run.out_dir / "provenance.jsonl", prov_text);

    Manifest out = m;
    out.root = run.out_dir;
    for (ManifestEntry& e : out.entries) {
        e.image = fs::path("images") / (e.id + ".png");
        e.seg = fs::path("seg") / (e.id + ".png");
        e.boundary = fs::path("boundary") / (e.id + ".png");
    }
    out.save(run.out_dir / "manifest.jsonl");
}

metrics::MetricsReport cmd_eval(const fs::path& pred_dir, const fs::path& gt_dir, int classes,
                                const fs::path& report_path) {
    const metrics::MetricsReport report = metrics::evaluate_dataset(pred_dir, gt_dir, classes);
    if (!report_path.empty()) write_text_atomic(report_path, report.to_json() + "\n");
    return report;
}

std::string cmd_aspp_demo(const fs::path& fixture_path) {
    ImageTensor input;
    const nn::AdaptiveAsppParams params = nn::load_aspp_fixture(fixture_path, &input);
    if (input.size() == 0) {
        // Fixture carries no input; use a deterministic stand-in.
        SeededRng rng(0x41535050, 0);
        input = ImageTensor(16, 16, params.branches.at(0).in_channels);
        for (double& v : input.data()) v = rng.uniform();
    }

    const nn::AdaptiveAsppOutput out = nn::adaptive_aspp_forward(input, params);

    auto in_unit = [](const nn::ImportanceVector& s) {
        return std::all_of(s.values.begin(), s.values.end(),
                           [](double v) { return v >= 0.0 && v <= 1.0; });
    };

    // Residual identity: zero scores must reproduce the plain concatenation.
    const std::vector<ImageTensor> ys = nn::aspp_branches(input, params.config, params.branches);
    const ImageTensor concat =
        nn::enhance(ys, nn::ImportanceVector::constant(ys.size(), 0.0));
    ImageTensor manual(concat.height(), concat.width(), concat.channels());
    int c_off = 0;
    for (const ImageTensor& y : ys) {
        for (int yy = 0; yy < y.height(); ++yy)
            for (int xx = 0; xx < y.width(); ++xx)
                for (int ch = 0; ch < y.channels(); ++ch)
                    manual.at(yy, xx, c_off + ch) = y.at(yy, xx, ch);
        c_off += y.channels();
    }

    json j;
    j["input"] = {{"height", input.height()},
                  {"width", input.width()},
                  {"channels", input.channels()}};
    j["branch_count"] = params.config.branch_count;
    j["dilation_rates"] = params.config.dilation_rates;
    j["scores_seg"] = out.scores_seg.values;
    j["scores_bnd"] = out.scores_bnd.values;
    j["checks"] = {{"scores_seg_in_unit_interval", in_unit(out.scores_seg)},
                   {"scores_bnd_in_unit_interval", in_unit(out.scores_bnd)},
                   {"residual_identity_at_zero", concat == manual}};
    return j.dump(2);
}

aug::Sample synth_sample(uint64_t seed, uint64_t index, int size) {
    if (size < 8) throw std::invalid_argument("synth_sample: size must be >= 8");
    // Stream offset keeps synthesis draws disjoint from the per-entry
    // augmentation streams (2i, 2i+1) under a shared seed.
    SeededRng rng(seed, index + (1ull << 32));

    const int h = size, w = size;
    aug::Sample s;
    s.image = ImageTensor(h, w, 3);
    s.seg = BinaryMask(h, w);

    // Textured background: per-channel base, a linear ramp, shared speckle.
    std::array<double, 3> base{};
    for (double& b : base) b = rng.uniform(0.3, 0.7);
    const double gx = rng.uniform(-0.15, 0.15);
    const double gy = rng.uniform(-0.15, 0.15);

    struct Ellipse {
        double cx, cy, rx, ry, cs, sn;
    };
    const int shapes = 1 + static_cast<int>(rng.uniform_int(0, 1));
    std::vector<Ellipse> ellipses;
    std::array<double, 3> tint{};
    for (int k = 0; k < shapes; ++k) {
        Ellipse el{};
        el.cx = rng.uniform(0.25, 0.75) * w;
        el.cy = rng.uniform(0.25, 0.75) * h;
        el.rx = rng.uniform(0.15, 0.35) * w;
        el.ry = rng.uniform(0.15, 0.35) * h;
        const double theta = rng.uniform(0.0, 3.141592653589793);
        el.cs = std::cos(theta);
        el.sn = std::sin(theta);
        ellipses.push_back(el);
    }
    for (double& t : tint) t = rng.uniform(-0.06, 0.06);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double noise = rng.uniform(-0.05, 0.05);
            const double u = w > 1 ? static_cast<double>(x) / (w - 1) - 0.5 : 0.0;
            const double v = h > 1 ? static_cast<double>(y) / (h - 1) - 0.5 : 0.0;

            bool inside = false;
            for (const Ellipse& el : ellipses) {
                const double dx = x + 0.5 - el.cx;
                const double dy = y + 0.5 - el.cy;
                const double ru = (dx * el.cs + dy * el.sn) / el.rx;
                const double rv = (-dx * el.sn + dy * el.cs) / el.ry;
                if (ru * ru + rv * rv <= 1.0) {
                    inside = true;
                    break;
                }
            }
            s.seg.at(y, x) = inside ? 1 : 0;
            for (int c = 0; c < 3; ++c) {
                double val = base[c] + gx * u + gy * v + noise;
                // Region interiors stay low-contrast: slight tint, damped texture.
                if (inside) val = 0.85 * val + 0.15 * base[c] + tint[c];
                s.image.at(y, x, c) = std::clamp(val, 0.0, 1.0);
            }
        }
    }
    return s;
}

Manifest cmd_synth(int count, int size, uint64_t seed, const fs::path& out_dir) {
    if (count < 0) throw std::invalid_argument("synth: count must be >= 0");
    fs::create_directories(out_dir / "images");
    fs::create_directories(out_dir / "seg");

    Manifest m;
    m.root = out_dir;
    std::array<double, 3> sums{0.0, 0.0, 0.0};
    int64_t pixels = 0;
    for (int i = 0; i < count; ++i) {
        const aug::Sample s = synth_sample(seed, static_cast<uint64_t>(i), size);
        char name[32];
        std::snprintf(name, sizeof name, "sample_%04d", i);
        write_image_png(out_dir / "images" / (std::string(name) + ".png"), s.image);
        write_mask_png(out_dir / "seg" / (std::string(name) + ".png"), s.seg);

        for (int y = 0; y < s.image.height(); ++y)
            for (int x = 0; x < s.image.width(); ++x)
                for (int c = 0; c < 3; ++c) sums[c] += s.image.at(y, x, c);
        pixels += static_cast<int64_t>(s.image.height()) * s.image.width();

        ManifestEntry e;
        e.id = name;
        e.image = fs::path("images") / (std::string(name) + ".png");
        e.seg = fs::path("seg") / (std::string(name) + ".png");
        m.entries.push_back(std::move(e));
    }
    if (pixels > 0)
        for (int c = 0; c < 3; ++c) m.channel_mean[c] = sums[c] / static_cast<double>(pixels);
    m.save(out_dir / "manifest.jsonl");
    return m;
}

namespace {

bool check_morphology_oracle() {
    for (int trial = 0; trial < 20; ++trial) {
        SeededRng rng(7, trial);
        BinaryMask mask(12, 12);
        for (uint8_t& v : mask.data()) v = rng.bernoulli(0.4) ? 1 : 0;
        const int radius = 1 + static_cast<int>(rng.uniform_int(0, 2));

        BinaryMask want_d(12, 12), want_e(12, 12);
        for (int y = 0; y < 12; ++y) {
            for (int x = 0; x < 12; ++x) {
                uint8_t mx = 0, mn = 1;
                for (int dy = -radius; dy <= radius; ++dy) {
                    for (int dx = -radius; dx <= radius; ++dx) {
                        const int yy = y + dy, xx = x + dx;
                        const uint8_t v =
                            (yy >= 0 && yy < 12 && xx >= 0 && xx < 12) ? mask.at(yy, xx) : 0;
                        mx = std::max(mx, v);
                        mn = std::min(mn, v);
                    }
                }
                want_d.at(y, x) = mx;
                want_e.at(y, x) = mn;
            }
        }
        if (dilate(mask, radius) != want_d || erode(mask, radius) != want_e) return false;
    }
    return true;
}

bool check_convolution_oracle() {
    for (int trial = 0; trial < 20; ++trial) {
        SeededRng rng(11, trial);
        const int hgt = 5 + static_cast<int>(rng.uniform_int(0, 3));
        const int wid = 5 + static_cast<int>(rng.uniform_int(0, 3));
        const int ic = 1 + static_cast<int>(rng.uniform_int(0, 2));
        const int oc = 1 + static_cast<int>(rng.uniform_int(0, 2));
        const int dil = 1 + static_cast<int>(rng.uniform_int(0, 2));

        ImageTensor x(hgt, wid, ic);
        for (double& v : x.data()) v = rng.uniform(-1.0, 1.0);
        nn::ConvParams p = nn::ConvParams::random(ic, oc, 3, dil, rng);

        const ImageTensor got = nn::dilated_conv(x, p);
        for (int y = 0; y < hgt; ++y) {
            for (int xx = 0; xx < wid; ++xx) {
                for (int o = 0; o < oc; ++o) {
                    double acc = p.bias[o];
                    for (int i = 0; i < ic; ++i) {
                        for (int ky = 0; ky < 3; ++ky) {
                            for (int kx = 0; kx < 3; ++kx) {
                                const int sy = y + (ky - 1) * dil;
                                const int sx = xx + (kx - 1) * dil;
                                if (sy < 0 || sy >= hgt || sx < 0 || sx >= wid) continue;
                                acc += x.at(sy, sx, i) * p.weight(o, i, ky, kx);
                            }
                        }
                    }
                    if (std::fabs(got.at(y, xx, o) - acc) > 1e-9) return false;
                }
            }
        }
    }
    return true;
}

bool check_composite_partition() {
    aug::Sample base = synth_sample(3, 0, 64);
    aug::Sample donor = synth_sample(3, 1, 64);
    BoundaryBandConfig bc;
    bc.thickness = auto_band_thickness(64, 64);
    base.boundary = boundary_band(base.seg, bc);
    donor.boundary = boundary_band(donor.seg, bc);

    const TranslationVector d{5, -3};
    aug::FakeMixConfig cfg;
    const aug::Sample out = aug::fakemix_composite(base, donor, cfg, d);

    const BinaryMask band = translate_zero_fill(donor.boundary, d);
    const ImageTensor content = translate_zero_fill(aug::extract_t_boundary(donor), d);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            for (int c = 0; c < 3; ++c) {
                const double want = band.at(y, x) ? content.at(y, x, c) : base.image.at(y, x, c);
                if (out.image.at(y, x, c) != want) return false;
            }
        }
    }
    return out.seg == base.seg && out.boundary == base.boundary;
}

bool check_translation_sampling() {
    SeededRng rng(17, 0);
    bool neg_dx = false, pos_dx = false, neg_dy = false, pos_dy = false;
    for (int i = 0; i < 10000; ++i) {
        const TranslationVector d = sample_translation(64, 64, 0.5, rng);
        if (d.dx < -32 || d.dx > 32 || d.dy < -32 || d.dy > 32) return false;
        neg_dx |= d.dx < 0;
        pos_dx |= d.dx > 0;
        neg_dy |= d.dy < 0;
        pos_dy |= d.dy > 0;
    }
    return neg_dx && pos_dx && neg_dy && pos_dy;
}

bool check_metric_fixtures() {
    // 4x4 masks: pred says the top-left 2x2 minus one corner plus one extra.
    LabelMask gt(4, 4, 0), pred(4, 4, 0);
    gt.at(0, 0) = gt.at(0, 1) = gt.at(1, 0) = 1;     // 3 positives
    pred.at(0, 0) = pred.at(0, 1) = pred.at(2, 2) = 1;  // TP=2, FP=1, FN=1
    const auto counts = metrics::confusion_counts(pred, gt, 2);
    if (metrics::iou_percent(counts[1]) != 50.0) return false;

    LabelMask gt2(4, 4, 0), pred2(4, 4, 0);
    for (int i = 0; i < 4; ++i) pred2.at(3, i) = 1;  // 4 of 16 wrong
    if (metrics::pixel_accuracy(pred2, gt2) != 75.0) return false;

    const ImageTensor half(4, 4, 1, 0.5);
    if (metrics::mae(half, BinaryMask(4, 4)) != 0.5) return false;

    const metrics::ConfusionCounts ber{3, 2, 2, 1};  // tp tn fp fn
    const auto b = metrics::ber_percent(ber);
    return b && *b == 37.5;
}

}  // namespace

int cmd_selfcheck() {
    struct Check {
        const char* name;
        bool (*fn)();
    };
    const Check checks[] = {
        {"morphology window oracle", check_morphology_oracle},
        {"dilated convolution oracle", check_convolution_oracle},
        {"composite partition identity", check_composite_partition},
        {"translation sampling bounds", check_translation_sampling},
        {"metric fixtures", check_metric_fixtures},
    };

    int failures = 0;
    for (const Check& c : checks) {
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            std::printf("%-32s error: %s\n", c.name, e.what());
            ++failures;
            continue;
        }
        std::printf("%-32s %s\n", c.name, ok ? "pass" : "FAIL");
        failures += ok ? 0 : 1;
    }
    std::printf("%d/%zu checks passed\n",
                static_cast<int>(std::size(checks)) - failures, std::size(checks));
    return failures == 0 ? 0 : 1;
}

}  // namespace fakemix::pipeline
