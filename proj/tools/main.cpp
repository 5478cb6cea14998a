#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fakemix/nn/aspp.hpp"
#include "fakemix/pipeline.hpp"

namespace {

using fakemix::SeededRng;
using nlohmann::json;
namespace fs = std::filesystem;
namespace pipe = fakemix::pipeline;

/// Flat JSON config: keys are long option names without the leading dashes.
/// Values already set on the command line (or via environment) win.
void apply_config(const fs::path& path, CLI::App* cmd) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + path.string());
    json j = json::parse(in);
    if (!j.is_object()) throw CLI::ValidationError("--config", "expected a flat JSON object");
    for (const auto& [key, value] : j.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (!opt) throw CLI::ValidationError("--config", "unknown key '" + key + "'");
        if (opt->count() > 0) continue;
        std::string text = value.is_string() ? value.get<std::string>() : value.dump();
        opt->add_result(text);
        opt->run_callback();
    }
}

void write_default_fixture(const fs::path& path, const std::string& kind) {
    fakemix::nn::AsppConfig cfg;
    fakemix::nn::AdaptiveAsppParams params;
    if (kind == "zero") {
        params.config = cfg;
        for (int i = 0; i < cfg.branch_count; ++i) {
            const int rate = cfg.dilation_rates[i];
            params.branches.push_back(
                fakemix::nn::ConvParams::make(3, cfg.branch_channels, rate == 1 ? 1 : 3, rate));
        }
        params.transform_seg = fakemix::nn::TransformParams::zeros(cfg.branch_count);
        params.transform_bnd = fakemix::nn::TransformParams::zeros(cfg.branch_count);
        const int concat = cfg.branch_channels * cfg.branch_count;
        params.squeeze_seg = fakemix::nn::ConvParams::make(concat, 8, 1, 1);
        params.squeeze_bnd = fakemix::nn::ConvParams::make(concat, 8, 1, 1);
    } else {
        SeededRng rng(2024, 0);
        params = fakemix::nn::AdaptiveAsppParams::random(cfg, 3, 8, rng);
    }
    fakemix::nn::save_aspp_fixture(path, params);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FakeMix dataset pipeline: boundary-band generation, content-aware "
                 "augmentation, pyramid-attention reference numerics and metrics"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Pair images with masks and write a manifest");
    fs::path in_images, in_masks, in_out;
    ingest->add_option("--images", in_images, "Image directory")->required();
    ingest->add_option("--masks", in_masks, "Mask directory")->required();
    ingest->add_option("--out", in_out, "Output manifest path")
        ->required()
        ->envname("FAKEMIX_OUT");

    // gen-boundary
    auto* genb = app.add_subcommand("gen-boundary",
                                    "Generate boundary-band labels for every manifest entry");
    fs::path gb_manifest, gb_out;
    int gb_thickness = 0;
    genb->add_option("--manifest", gb_manifest, "Manifest to update")->required();
    genb->add_option("--thickness", gb_thickness,
                     "Band radius in pixels; 0 scales with image size")
        ->envname("FAKEMIX_THICKNESS");
    genb->add_option("--out", gb_out, "Band output directory (default: <root>/boundary)")
        ->envname("FAKEMIX_OUT");

    // augment
    auto* aug = app.add_subcommand("augment", "Apply an augmentation run to a manifest");
    fs::path ag_manifest, ag_config;
    pipe::RunConfig run;
    std::string ag_method = "fakemix", ag_content = "boundary";
    bool ag_reuse = false;
    aug->add_option("--manifest", ag_manifest, "Input manifest")->required();
    aug->add_option("--out", run.out_dir, "Output dataset directory")
        ->required()
        ->envname("FAKEMIX_OUT");
    aug->add_option("--seed", run.seed, "Run seed")->envname("FAKEMIX_SEED");
    aug->add_option("--workers", run.workers, "Worker threads")
        ->envname("FAKEMIX_WORKERS")
        ->check(CLI::PositiveNumber);
    aug->add_option("--method", ag_method, "fakemix, mixup, cutout or cutmix")
        ->envname("FAKEMIX_METHOD");
    aug->add_option("--lambda", run.fakemix.lambda, "Translation range fraction [0,1]")
        ->envname("FAKEMIX_LAMBDA");
    aug->add_option("--prob", run.fakemix.keep_prob, "Probability of keeping the original")
        ->envname("FAKEMIX_PROB");
    aug->add_option("--reps", run.fakemix.repetitions, "Pasted bands per augmented sample")
        ->envname("FAKEMIX_REPS");
    aug->add_option("--content", ag_content, "Band fill: boundary, zero, mean or random")
        ->envname("FAKEMIX_CONTENT");
    aug->add_flag("--reuse-donor", ag_reuse, "Reuse one donor across repetitions");
    aug->add_option("--alpha", run.mixup_alpha, "Beta(alpha, alpha) for mixup");
    aug->add_option("--hole", run.cutout_hole, "Cutout hole side; <0 is half the short side");
    aug->add_option("--config", ag_config, "Flat JSON config file; flags override");

    // eval
    auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
    fs::path ev_pred, ev_gt, ev_report;
    int ev_classes = 2;
    eval->add_option("--pred", ev_pred, "Prediction mask directory")->required();
    eval->add_option("--gt", ev_gt, "Ground-truth mask directory")->required();
    eval->add_option("--classes", ev_classes, "Number of classes")->check(CLI::PositiveNumber);
    eval->add_option("--report", ev_report, "Report JSON path");

    // aspp-demo
    auto* demo = app.add_subcommand("aspp-demo",
                                    "Run the pyramid-attention forward pass on a fixture");
    fs::path dm_fixture, dm_out;
    std::string dm_init;
    demo->add_option("--fixture", dm_fixture, "Weight fixture JSON")->required();
    demo->add_option("--init", dm_init, "Write the fixture first: zero or random")
        ->check(CLI::IsMember({"zero", "random"}));
    demo->add_option("--out", dm_out, "Also write the result JSON here")
        ->envname("FAKEMIX_OUT");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic dataset");
    int sy_count = 20, sy_size = 64;
    uint64_t sy_seed = 0;
    fs::path sy_out;
    synth->add_option("--count", sy_count, "Number of samples");
    synth->add_option("--size", sy_size, "Square sample size in pixels");
    synth->add_option("--seed", sy_seed, "Generation seed")->envname("FAKEMIX_SEED");
    synth->add_option("--out", sy_out, "Output directory")->required()->envname("FAKEMIX_OUT");

    // selfcheck
    app.add_subcommand("selfcheck", "Run the built-in oracle suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            const pipe::Manifest m = pipe::cmd_ingest(in_images, in_masks, in_out);
            std::printf("wrote %s with %zu entries\n", in_out.string().c_str(),
                        m.entries.size());
        } else if (genb->parsed()) {
            const pipe::Manifest m = pipe::cmd_gen_boundary(gb_manifest, gb_thickness, gb_out);
            std::printf("bands written for %zu entries\n", m.entries.size());
        } else if (aug->parsed()) {
            if (!ag_config.empty()) apply_config(ag_config, aug);
            run.method = pipe::method_from_string(ag_method);
            run.fakemix.content = fakemix::aug::content_mode_from_string(ag_content);
            run.fakemix.reuse_donor = ag_reuse;
            pipe::cmd_augment(ag_manifest, run);
            std::printf("augmented dataset written to %s\n", run.out_dir.string().c_str());
        } else if (eval->parsed()) {
            const auto report = pipe::cmd_eval(ev_pred, ev_gt, ev_classes, ev_report);
            std::cout << report.to_json() << "\n";
        } else if (demo->parsed()) {
            if (!dm_init.empty()) write_default_fixture(dm_fixture, dm_init);
            const std::string result = pipe::cmd_aspp_demo(dm_fixture);
            std::cout << result << "\n";
            if (!dm_out.empty()) {
                std::ofstream out(dm_out);
                out << result << "\n";
            }
        } else if (synth->parsed()) {
            const pipe::Manifest m = pipe::cmd_synth(sy_count, sy_size, sy_seed, sy_out);
            std::printf("synthesized %zu samples in %s\n", m.entries.size(),
                        sy_out.string().c_str());
        } else {
            return pipe::cmd_selfcheck();
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
