#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "enton/csv_io.hpp"
#include "enton/densify.hpp"
#include "enton/features.hpp"
#include "enton/image_io.hpp"
#include "enton/kdtree.hpp"
#include "enton/metrics.hpp"
#include "enton/model.hpp"
#include "enton/ply_io.hpp"
#include "enton/synth.hpp"

namespace {

using namespace enton;

struct FeaturesArgs {
    std::string input;
    std::string output;
    std::string stats;
    std::size_t k = 50;
};

int run_features(const FeaturesArgs& args) {
    const PlyContents contents = read_ply(args.input);
    const GaussianSet& set = contents.set;
    const KnnIndex index = KnnIndex::build(set.centers());
    const auto features = features_for_set(set, index, args.k);

    std::vector<double> entropy;
    entropy.reserve(features.size());
    double sum = 0.0, min_e = features.front().eigenentropy, max_e = min_e;
    for (const auto& f : features) {
        entropy.push_back(f.eigenentropy);
        sum += f.eigenentropy;
        min_e = std::min(min_e, f.eigenentropy);
        max_e = std::max(max_e, f.eigenentropy);
    }
    const double mean = sum / static_cast<double>(features.size());

    if (!args.output.empty()) {
        PlyWriteOptions opts;
        opts.eigenentropy = &entropy;
        write_ply(set, args.output, opts);
    }
    if (!args.stats.empty())
        write_feature_stats_csv(args.stats, set.size(), args.k, mean, min_e, max_e);
    std::cout << "mean_eigenentropy " << format_double(mean) << "\n";
    return 0;
}

struct DensifyArgs {
    std::string input;
    std::string output;
    std::string trace;
    std::string grad_source = "zero";
    std::string surface_path;
    std::string format = "binary";
    int k = 0;
    bool k_adaptive = false;
    int iters = 15000;
    int pretrain = 3000;
    int period = 100;
    double tau_low = kLn2;
    double tau_high = 0.95;
    double tau_pos = 0.0001;
    double opacity_min = 0.005;
    double grad_scale = 1.0;
    std::uint64_t seed = 0;
};

std::unique_ptr<GradientSource> make_source(const DensifyArgs& args) {
    if (args.grad_source == "zero") return std::make_unique<ZeroSource>();
    if (args.grad_source.rfind("file:", 0) == 0)
        return std::make_unique<FileSource>(args.grad_source.substr(5));
    if (args.grad_source == "surface") {
        if (args.surface_path.empty())
            throw std::runtime_error("--grad-source surface requires --surface FILE.json");
        return std::make_unique<SurfaceResidualSource>(
            SurfaceRef::from_json_file(args.surface_path), args.grad_scale);
    }
    throw std::runtime_error("unknown gradient source: " + args.grad_source);
}

int run_densify(const DensifyArgs& args) {
    if (args.k_adaptive == (args.k > 0))
        throw std::runtime_error("pass exactly one of --k N or --k-adaptive");

    const PlyContents contents = read_ply(args.input);

    Schedule sched;
    sched.pretrain_end = args.pretrain;
    sched.period = args.period;
    sched.total_iterations = args.iters;
    sched.knn_steps = args.k_adaptive ? Schedule::adaptive_knn_default()
                                      : Schedule::fixed_knn(args.k);
    Thresholds thr;
    thr.tau_low = args.tau_low;
    thr.tau_high = args.tau_high;
    thr.tau_pos = args.tau_pos;
    thr.opacity_min = args.opacity_min;

    const auto source = make_source(args);
    const DensifyResult result =
        run_densification(contents.set, sched, thr, *source, args.seed);

    PlyWriteOptions opts;
    opts.format = args.format == "ascii" ? PlyFormat::Ascii : PlyFormat::BinaryLittleEndian;
    write_ply(result.set, args.output, opts);
    if (!args.trace.empty()) {
        TraceMeta meta;
        meta.thresholds = thr;
        meta.schedule = sched;
        meta.seed = args.seed;
        meta.grad_source = source->describe();
        write_trace_csv(args.trace, result.trace, meta);
    }
    std::cout << "events " << result.trace.size() << "\n";
    std::cout << "gaussians " << result.set.size() << "\n";
    if (result.exhausted) {
        std::cerr << "set exhausted: fewer than 3 Gaussians remain\n";
        return 1;
    }
    return 0;
}

struct EvalC2cArgs {
    std::string a;
    std::string b;
    std::string report;
    double mask = 0.010;
};

int run_eval_c2c(const EvalC2cArgs& args) {
    const auto cloud_a = read_ply(args.a).set.centers();
    const auto cloud_b = read_ply(args.b).set.centers();
    const ChamferReport report = chamfer_c2c(cloud_a, cloud_b, args.mask);
    if (!args.report.empty()) write_chamfer_csv(args.report, report);
    std::cout << "mean_a_to_b " << format_double(report.mean_a_to_b) << "\n";
    std::cout << "mean_b_to_a " << format_double(report.mean_b_to_a) << "\n";
    std::cout << "symmetric_mean " << format_double(report.symmetric_mean) << "\n";
    return 0;
}

int run_eval_psnr(const std::string& ref_path, const std::string& test_path) {
    const Image ref = read_pnm(ref_path);
    const Image test = read_pnm(test_path);
    const double value = psnr(ref, test);
    if (std::isinf(value)) std::cout << "inf\n";
    else std::cout << format_double(value) << "\n";
    return 0;
}

struct SynthArgs {
    std::string kind = "plane";
    std::string output;
    std::string surface_out;
    std::string format = "binary";
    std::size_t n = 2000;
    double noise = 0.002;
    double clutter = 0.05;
    std::uint64_t seed = 7;
};

int run_synth(const SynthArgs& args) {
    const SynthScene scene =
        synth_scene(scene_kind_from_string(args.kind), args.n, args.noise, args.seed,
                    args.clutter);
    const GaussianSet set = make_initial_set(scene.points);
    PlyWriteOptions opts;
    opts.format = args.format == "ascii" ? PlyFormat::Ascii : PlyFormat::BinaryLittleEndian;
    write_ply(set, args.output, opts);
    if (!args.surface_out.empty()) scene.surface.write_json_file(args.surface_out);
    std::cout << "points " << scene.points.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenentropy-guided densification and pruning for 3D Gaussian point sets"};
    app.require_subcommand(1);

    FeaturesArgs feat;
    auto* features_cmd =
        app.add_subcommand("features", "Per-point eigenentropy export and summary");
    features_cmd->add_option("--input", feat.input, "input PLY")->required();
    features_cmd->add_option("--k", feat.k, "neighborhood size")->required();
    features_cmd->add_option("--output", feat.output, "output PLY with eigenentropy channel");
    features_cmd->add_option("--stats", feat.stats, "summary CSV");

    DensifyArgs dens;
    auto* densify_cmd = app.add_subcommand("densify", "Run the alternating densification loop");
    densify_cmd->add_option("--input", dens.input, "input PLY")->required();
    densify_cmd->add_option("--k", dens.k, "fixed neighborhood size");
    densify_cmd->add_flag("--k-adaptive", dens.k_adaptive,
                          "adaptive neighborhood 25->50->75->100 every 2500 iterations");
    densify_cmd->add_option("--iters", dens.iters, "total iterations");
    densify_cmd->add_option("--pretrain", dens.pretrain, "gradient-only iterations");
    densify_cmd->add_option("--period", dens.period, "densification period");
    densify_cmd->add_option("--tau-low", dens.tau_low, "split threshold (default ln 2)");
    densify_cmd->add_option("--tau-high", dens.tau_high, "prune threshold");
    densify_cmd->add_option("--tau-pos", dens.tau_pos, "gradient threshold");
    densify_cmd->add_option("--opacity-min", dens.opacity_min, "opacity prune threshold");
    densify_cmd->add_option("--grad-source", dens.grad_source, "zero | file:PATH | surface");
    densify_cmd->add_option("--surface", dens.surface_path, "surface JSON for --grad-source surface");
    densify_cmd->add_option("--grad-scale", dens.grad_scale, "surface residual coefficient");
    densify_cmd->add_option("--seed", dens.seed, "rng seed");
    densify_cmd->add_option("--output", dens.output, "output PLY")->required();
    densify_cmd->add_option("--trace", dens.trace, "event trace CSV");
    densify_cmd->add_option("--format", dens.format, "ascii | binary")
        ->check(CLI::IsMember({"ascii", "binary"}));

    EvalC2cArgs c2c;
    auto* c2c_cmd = app.add_subcommand("eval-c2c", "Masked Chamfer cloud-to-cloud distance");
    c2c_cmd->add_option("--a", c2c.a, "first PLY")->required();
    c2c_cmd->add_option("--b", c2c.b, "second PLY")->required();
    c2c_cmd->add_option("--mask", c2c.mask, "mask radius (scene units)")->required();
    c2c_cmd->add_option("--report", c2c.report, "report CSV");

    std::string psnr_ref, psnr_test;
    auto* psnr_cmd = app.add_subcommand("eval-psnr", "PSNR between two PGM/PPM images");
    psnr_cmd->add_option("--ref", psnr_ref, "reference image")->required();
    psnr_cmd->add_option("--test", psnr_test, "test image")->required();

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic scene");
    synth_cmd->add_option("--kind", synth.kind, "plane | line | ball | noisybox | clutter")
        ->check(CLI::IsMember({"plane", "line", "ball", "noisybox", "clutter"}));
    synth_cmd->add_option("--n", synth.n, "point count");
    synth_cmd->add_option("--noise", synth.noise, "noise sigma");
    synth_cmd->add_option("--clutter", synth.clutter, "clutter ratio (clutter kind)");
    synth_cmd->add_option("--seed", synth.seed, "rng seed");
    synth_cmd->add_option("--output", synth.output, "output PLY")->required();
    synth_cmd->add_option("--surface-out", synth.surface_out, "reference surface JSON");
    synth_cmd->add_option("--format", synth.format, "ascii | binary")
        ->check(CLI::IsMember({"ascii", "binary"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (features_cmd->parsed()) return run_features(feat);
        if (densify_cmd->parsed()) return run_densify(dens);
        if (c2c_cmd->parsed()) return run_eval_c2c(c2c);
        if (psnr_cmd->parsed()) return run_eval_psnr(psnr_ref, psnr_test);
        if (synth_cmd->parsed()) return run_synth(synth);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
