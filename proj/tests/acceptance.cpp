// Acceptance suite: one line per criterion, nonzero exit if any fail.
// argv[1] must be the path to the enton CLI binary (used by criterion 11).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "enton/densify.hpp"
#include "enton/features.hpp"
#include "enton/kdtree.hpp"
#include "enton/metrics.hpp"
#include "enton/rng.hpp"
#include "enton/synth.hpp"

using namespace enton;

namespace {

std::string g_cli;

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& info) {
        if (!detail.empty()) detail += "; ";
        detail += info;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- criterion 1: analytic eigenentropy anchors --------------------------

Outcome criterion_anchors() {
    Outcome out;
    out.require(std::abs(eigenentropy({1.0, 0.0, 0.0}) - 0.0) < 1e-9, "linear anchor");
    out.require(std::abs(eigenentropy({0.5, 0.5, 0.0}) - kLn2) < 1e-9, "planar anchor");
    const double third = 1.0 / 3.0;
    out.require(std::abs(eigenentropy({third, third, third}) - kLn3) < 1e-9,
                "isotropic anchor");
    return out;
}

// ---- criterion 2: eigenentropy curve shape --------------------------------

double entropy_on_simplex(double l1, double l3) {
    return eigenentropy({l1, 1.0 - l1 - l3, l3});
}

Outcome criterion_curve() {
    Outcome out;
    // lambda3 = 0: valid region l1 in [0.5, 1]
    double best_l1 = 0.5;
    double best_e = -1.0;
    for (double l1 = 0.5; l1 <= 1.0 + 1e-12; l1 += 1e-6) {
        const double e = entropy_on_simplex(std::min(l1, 1.0), 0.0);
        if (e > best_e) {
            best_e = e;
            best_l1 = std::min(l1, 1.0);
        }
    }
    out.require(std::abs(best_l1 - 0.5) < 1e-6, "max location " + fmt(best_l1));
    out.require(std::abs(best_e - kLn2) < 1e-9, "max value " + fmt(best_e));
    out.require(std::abs(entropy_on_simplex(1.0, 0.0)) < 1e-9, "endpoint not 0");

    // lambda3 = 0.1: valid region l1 in [0.45, 0.8]; max at the balanced point,
    // strictly decreasing toward the endpoint.
    double best_l1_01 = 0.45;
    double best_e_01 = -1.0;
    double prev = 2.0;
    bool decreasing = true;
    for (double l1 = 0.45; l1 <= 0.8 + 1e-12; l1 += 1e-6) {
        const double e = entropy_on_simplex(std::min(l1, 0.8), 0.1);
        if (e > best_e_01) {
            best_e_01 = e;
            best_l1_01 = std::min(l1, 0.8);
        }
        if (e >= prev + 1e-15) decreasing = false;
        prev = e;
    }
    out.require(std::abs(best_l1_01 - 0.45) < 1e-6,
                "lambda3=0.1 max location " + fmt(best_l1_01));
    out.require(decreasing, "lambda3=0.1 curve not decreasing");
    out.require(best_e_01 < kLn3 && best_e_01 > kLn2, "lambda3=0.1 max out of band");
    return out;
}

// ---- criterion 3: kNN oracle equivalence ----------------------------------

Outcome criterion_knn() {
    Outcome out;
    std::size_t checked = 0;
    for (std::uint64_t trial = 0; trial < 100 && out.ok; ++trial) {
        Rng rng(mix_seed(9000, trial));
        const std::size_t n = 3 + rng.next_u64() % 998;
        std::vector<Vec3> pts;
        pts.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            pts.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
        const KnnIndex index = KnnIndex::build(pts);
        for (std::size_t i = 0; i < n && out.ok; ++i) {
            const auto brute = knn_brute_force(pts, i, 50);
            for (std::size_t k : {std::size_t{1}, std::size_t{25}, std::size_t{50}}) {
                const auto fast = index.knn_of_member(i, k);
                const std::size_t expect = std::min(k, n - 1);
                if (fast.size() != expect) {
                    out.require(false, "size mismatch");
                    break;
                }
                for (std::size_t j = 0; j < fast.size(); ++j) {
                    if (fast[j].id != brute[j].id || fast[j].distance != brute[j].distance) {
                        out.require(false, "mismatch cloud " + std::to_string(trial));
                        break;
                    }
                }
                ++checked;
            }
        }
    }
    out.note(std::to_string(checked) + " queries");
    return out;
}

// ---- criterion 4: feature invariances --------------------------------------

Outcome criterion_invariances() {
    Outcome out;
    Rng rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Vec3> pts;
        for (int i = 0; i < 26; ++i)
            pts.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
        const double base = features_of_neighborhood(pts).eigenentropy;

        Quaternion q{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
        const double qn = q.norm();
        q = {q.w / qn, q.x / qn, q.y / qn, q.z / qn};
        const Mat3 rot = q.to_rotation_matrix();
        std::vector<Vec3> rotated;
        for (const auto& p : pts) rotated.push_back(rot.apply(p));
        out.require(std::abs(features_of_neighborhood(rotated).eigenentropy - base) < 1e-9,
                    "rotation trial " + std::to_string(trial));

        const double s = 1e-3 + 1e4 * rng.uniform01();
        std::vector<Vec3> scaled;
        for (const auto& p : pts) scaled.push_back(p * s);
        out.require(std::abs(features_of_neighborhood(scaled).eigenentropy - base) < 1e-9,
                    "scale trial " + std::to_string(trial));

        std::vector<Vec3> shuffled = pts;
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[rng.next_u64() % i]);
        out.require(std::abs(features_of_neighborhood(shuffled).eigenentropy - base) < 1e-9,
                    "permutation trial " + std::to_string(trial));
        if (!out.ok) break;
    }
    return out;
}

// ---- criterion 5: classifier boundary table --------------------------------

Outcome criterion_classifier() {
    Outcome out;
    const Thresholds thr;  // paper defaults
    out.require(entropy_phase_action(0.5, thr) == ActionKind::Split, "E=0.5");
    out.require(entropy_phase_action(kLn2, thr) == ActionKind::Split, "E=ln2");
    out.require(entropy_phase_action(0.80, thr) == ActionKind::Keep, "E=0.80");
    out.require(entropy_phase_action(0.95, thr) == ActionKind::Keep, "E=0.95");
    out.require(entropy_phase_action(0.96, thr) == ActionKind::Prune, "E=0.96");
    return out;
}

// ---- criterion 6: scheduler conformance -------------------------------------

Outcome criterion_scheduler() {
    Outcome out;
    const Schedule sched;  // pretrain 3000, period 100
    for (int t = 0; t <= 4000; ++t) {
        Phase expected;
        if (t % 100 != 0) expected = Phase::NoDensify;
        else if (t < 3000) expected = Phase::Gradient;
        else if ((t / 100) % 2 == 0) expected = Phase::Gradient;
        else expected = Phase::Entropy;
        if (phase_for_iteration(t, sched) != expected) {
            out.require(false, "t=" + std::to_string(t));
            break;
        }
    }
    return out;
}

// ---- criterion 7: entropy-reduction trend -----------------------------------

Outcome criterion_entropy_trend() {
    Outcome out;
    const auto scene = synth_scene(SceneKind::NoisyBox, 6000, 0.03, 11);
    const GaussianSet set = make_initial_set(scene.points);
    Schedule sched;
    sched.pretrain_end = 300;
    sched.period = 100;
    sched.total_iterations = 3200;  // 2 pre-training + 30 alternating events
    sched.knn_steps = Schedule::fixed_knn(25);
    const SurfaceResidualSource src(scene.surface, 0.000222);
    const auto result = run_densification(set, sched, Thresholds{}, src, 4242);

    out.require(!result.exhausted, "set exhausted");
    out.require(result.trace.size() == 32, "expected 32 events");
    if (!out.ok) return out;

    std::size_t alternating = 0;
    for (const auto& e : result.trace)
        if (e.t >= sched.pretrain_end) ++alternating;
    out.require(alternating == 30, "expected 30 alternating events");

    const double initial = result.trace.front().mean_entropy_before;
    const double final_mean = result.trace.back().mean_entropy_after;
    const double drop = (initial - final_mean) / initial;
    out.require(drop >= 0.10, "drop " + fmt(100 * drop) + "% < 10%");

    // every entropy event in the final third of the trace stays strictly
    // below the pre-run mean
    const std::size_t first = result.trace.size() - result.trace.size() / 3;
    for (std::size_t i = first; i < result.trace.size(); ++i) {
        const auto& e = result.trace[i];
        if (e.phase != Phase::Entropy) continue;
        out.require(e.mean_entropy_after < initial,
                    "late entropy event t=" + std::to_string(e.t) + " not below initial");
    }
    out.note("mean " + fmt(initial) + " -> " + fmt(final_mean) + " (drop " +
             fmt(100 * drop) + "%)");
    return out;
}

// ---- criteria 8 and 9: clutter scene ----------------------------------------

struct ClutterFixture {
    SynthScene scene;
    GaussianSet initial;
    double noise_sigma;
    double far_threshold;
    std::vector<Vec3> reference_plane;
};

ClutterFixture make_clutter_fixture() {
    ClutterFixture f;
    f.noise_sigma = 0.0121;
    f.scene = synth_scene(SceneKind::PlanePlusClutter, 10000, f.noise_sigma, 7, 0.05);
    f.initial = make_initial_set(f.scene.points);
    f.far_threshold = 3.0 * f.noise_sigma;
    f.reference_plane = synth_scene(SceneKind::Plane, 20000, 0.0, 123).points;
    return f;
}

Outcome criterion_outlier_pruning() {
    Outcome out;
    const ClutterFixture f = make_clutter_fixture();

    auto count_far = [&](const GaussianSet& set) {
        std::size_t far = 0;
        for (const auto& g : set.gaussians)
            if (f.scene.surface.distance(g.center) > f.far_threshold) ++far;
        return far;
    };
    const std::size_t far_before = count_far(f.initial);
    const std::size_t near_before = f.initial.size() - far_before;

    Schedule sched;
    sched.pretrain_end = 300;
    sched.period = 100;
    sched.total_iterations = 3500;
    sched.knn_steps = Schedule::fixed_knn(100);
    const SurfaceResidualSource src(f.scene.surface, 0.0002);
    const auto result = run_densification(f.initial, sched, Thresholds{}, src, 99);
    out.require(!result.exhausted, "set exhausted");

    const std::size_t far_after = count_far(result.set);
    const std::size_t near_after = result.set.size() - far_after;
    const double removal =
        (double(far_before) - double(far_after)) / double(far_before);
    const double retention = double(near_after) / double(near_before);
    out.require(removal >= 0.80, "clutter removal " + fmt(100 * removal) + "% < 80%");
    out.require(retention >= 0.90, "plane retention " + fmt(100 * retention) + "% < 90%");

    const double mask = 1.0;
    const auto before = chamfer_c2c(f.initial.centers(), f.reference_plane, mask);
    const auto after = chamfer_c2c(result.set.centers(), f.reference_plane, mask);
    out.require(after.symmetric_mean < before.symmetric_mean,
                "chamfer did not decrease (" + fmt(before.symmetric_mean) + " -> " +
                    fmt(after.symmetric_mean) + ")");
    out.note("removal " + fmt(100 * removal) + "%, retention " + fmt(100 * retention) +
             "%, chamfer " + fmt(before.symmetric_mean) + " -> " +
             fmt(after.symmetric_mean));
    return out;
}

Outcome criterion_ablation_direction() {
    Outcome out;
    const ClutterFixture f = make_clutter_fixture();
    const KnnIndex index = KnnIndex::build(f.scene.points);
    const std::size_t k = 100;

    const double outlier_mean =
        outlier_entropy_stat(f.initial, f.reference_plane, f.far_threshold, k, index);
    out.require(std::isfinite(outlier_mean), "no outliers found");

    const KnnIndex ref_index = KnnIndex::build(f.reference_plane);
    const auto features = features_for_set(f.initial, index, k);
    double inlier_sum = 0.0;
    std::size_t inlier_count = 0;
    for (std::size_t i = 0; i < f.scene.points.size(); ++i) {
        if (ref_index.knn_of_point(f.scene.points[i], 1)[0].distance > f.far_threshold)
            continue;
        inlier_sum += features[i].eigenentropy;
        ++inlier_count;
    }
    const double inlier_mean = inlier_sum / double(inlier_count);
    out.require(outlier_mean >= inlier_mean + 0.1,
                "separation " + fmt(outlier_mean - inlier_mean) + " < 0.1");
    out.note("outliers " + fmt(outlier_mean) + " vs inliers " + fmt(inlier_mean));
    return out;
}

// ---- criterion 10: metric anchors --------------------------------------------

Outcome criterion_metric_anchors() {
    Outcome out;
    Rng rng(31);
    std::vector<Vec3> cloud;
    for (int i = 0; i < 100; ++i)
        cloud.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
    const auto self = chamfer_c2c(cloud, cloud, 0.010);
    out.require(self.symmetric_mean == 0.0, "identical clouds not exactly 0");

    const auto single = chamfer_c2c({{0, 0, 0}}, {{0.003, 0, 0}}, 0.010);
    out.require(std::abs(single.mean_a_to_b - 0.003) < 1e-15 &&
                    std::abs(single.mean_b_to_a - 0.003) < 1e-15,
                "single-point case not exact");

    Image zeros;
    zeros.width = zeros.height = 4;
    zeros.channels = 1;
    zeros.pixels.assign(16, 0.0);
    Image ones = zeros;
    ones.pixels.assign(16, 1.0);
    out.require(std::abs(psnr(zeros, ones)) < 1e-9, "all-0 vs all-1 not 0 dB");

    Image base;
    base.width = base.height = 2;
    base.channels = 1;
    base.pixels.assign(4, 0.0);
    Image off = base;
    off.pixels[2] = 1.0;
    out.require(std::abs(psnr(base, off) - 10.0 * std::log10(4.0)) < 1e-9,
                "one-of-four-pixels case");
    return out;
}

// ---- criterion 11: CLI determinism --------------------------------------------

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > acc_cli_stdout.txt 2> acc_cli_stderr.txt";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

Outcome criterion_cli_determinism() {
    Outcome out;
    if (g_cli.empty()) {
        out.require(false, "no CLI path given");
        return out;
    }
    out.require(run_cli("synth --kind clutter --n 2000 --noise 0.012 --seed 7 "
                        "--output acc_scene.ply --surface-out acc_scene.surface.json") == 0,
                "synth failed");
    const std::string flags =
        "densify --input acc_scene.ply --k 25 --iters 1500 --pretrain 300 --period 100 "
        "--grad-source surface --surface acc_scene.surface.json --grad-scale 0.0002 "
        "--seed 31337 ";
    out.require(run_cli(flags + "--output acc_run_a.ply --trace acc_run_a.csv") == 0,
                "first run failed");
    out.require(run_cli(flags + "--output acc_run_b.ply --trace acc_run_b.csv") == 0,
                "second run failed");
    const std::string ply_a = slurp("acc_run_a.ply");
    out.require(!ply_a.empty(), "empty output");
    out.require(ply_a == slurp("acc_run_b.ply"), "output PLY differs");
    out.require(slurp("acc_run_a.csv") == slurp("acc_run_b.csv"), "trace CSV differs");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];

    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "analytic eigenentropy anchors", 1.0, criterion_anchors},
        {2, "eigenentropy curve shape", 1.0, criterion_curve},
        {3, "kNN oracle equivalence", 30.0, criterion_knn},
        {4, "feature invariances", 10.0, criterion_invariances},
        {5, "classifier boundary table", 1.0, criterion_classifier},
        {6, "scheduler conformance", 1.0, criterion_scheduler},
        {7, "entropy-reduction trend", 300.0, criterion_entropy_trend},
        {8, "outlier-pruning efficacy", 120.0, criterion_outlier_pruning},
        {9, "ablation direction", 30.0, criterion_ablation_direction},
        {10, "metric anchors", 1.0, criterion_metric_anchors},
        {11, "CLI determinism", 300.0, criterion_cli_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > c.budget_seconds)
            out.require(false, "runtime " + fmt(elapsed) + "s over budget " +
                                   fmt(c.budget_seconds) + "s");
        if (!out.ok) ++failures;
        std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", out.ok ? "PASS" : "FAIL", c.id,
                    c.name, elapsed, out.detail.empty() ? "" : " -- ",
                    out.detail.c_str());
        std::fflush(stdout);
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failures;
}
