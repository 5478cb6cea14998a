#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "fakemix/augment.hpp"
#include "fakemix/manifest.hpp"
#include "fakemix/metrics.hpp"

namespace fakemix::pipeline {

enum class Method { fakemix, mixup, cutout, cutmix };

Method method_from_string(const std::string& s);
std::string to_string(Method m);

struct RunConfig {
    uint64_t seed = 0;
    int workers = 1;
    Method method = Method::fakemix;
    aug::FakeMixConfig fakemix;
    double mixup_alpha = 0.2;
    int cutout_hole = -1;  // <0: half the shorter image side
    std::filesystem::path out_dir;

    void validate() const;
};

/// Pair images and masks by file stem, compute dataset channel means, write
/// the manifest. Errors on empty or unpaired inputs.
Manifest cmd_ingest(const std::filesystem::path& image_dir,
                    const std::filesystem::path& mask_dir,
                    const std::filesystem::path& out_manifest);

/// Generate boundary-band PNGs for every entry and record their paths in the
/// manifest (rewritten in place). thickness <= 0 selects the size-scaled
/// default. Re-runs produce byte-identical files.
Manifest cmd_gen_boundary(const std::filesystem::path& manifest_path, int thickness,
                          const std::filesystem::path& out_dir = {});

/// Apply the configured augmentation to every entry, writing image/seg/
/// boundary PNGs, an output manifest and a provenance JSONL sidecar. The
/// per-entry stream is derived from (seed, entry index), so any worker count
/// yields byte-identical output trees.
void cmd_augment(const std::filesystem::path& manifest_path, const RunConfig& cfg);

/// Evaluate predictions against ground truth and write the report as JSON.
metrics::MetricsReport cmd_eval(const std::filesystem::path& pred_dir,
                                const std::filesystem::path& gt_dir, int classes,
                                const std::filesystem::path& report_path);

/// Run a pyramid-attention forward pass from a JSON weight fixture; returns
/// the importance vectors and invariant-check results as a JSON string.
std::string cmd_aspp_demo(const std::filesystem::path& fixture_path);

/// Deterministic synthetic dataset: low-contrast elliptical regions over
/// textured backgrounds, plus a manifest. Fixed seeds rerun byte-identically.
Manifest cmd_synth(int count, int size, uint64_t seed, const std::filesystem::path& out_dir);

/// One synthetic sample without touching the filesystem (same generation
/// rules as cmd_synth). The boundary label is left empty.
aug::Sample synth_sample(uint64_t seed, uint64_t index, int size);

/// Run the built-in oracle suites and print a result table.
/// Returns 0 when everything passes.
int cmd_selfcheck();

}  // namespace fakemix::pipeline
