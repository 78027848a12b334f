#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "enton/features.hpp"
#include "enton/model.hpp"
#include "enton/synth.hpp"

namespace enton {

struct Thresholds {
    double tau_low = kLn2;       // eigenentropy at or below this splits
    double tau_high = 0.95;      // eigenentropy above this prunes
    double tau_pos = 0.0001;     // mean gradient magnitude that triggers densification
    double opacity_min = 0.005;  // opacity strictly below this prunes

    void validate() const;  // throws std::invalid_argument
};

struct KnnStep {
    int start_iteration;
    int k;
};

struct Schedule {
    int pretrain_end = 3000;      // gradient-only until here; multiple of period
    int period = 100;             // densification events fire at t % period == 0
    int total_iterations = 15000;
    std::vector<KnnStep> knn_steps = adaptive_knn_default();

    static std::vector<KnnStep> fixed_knn(int k) { return {{0, k}}; }
    /// 25 -> 50 -> 75 -> 100, stepping every 2500 iterations.
    static std::vector<KnnStep> adaptive_knn_default() {
        return {{0, 25}, {2500, 50}, {5000, 75}, {7500, 100}};
    }

    int k_at(int t) const;
    void validate() const;  // throws std::invalid_argument
};

enum class Phase { NoDensify, Gradient, Entropy };

const char* to_string(Phase phase);

/// Phase of iteration t: no event off the period grid; gradient-only during
/// pre-training; afterwards even event ordinals are gradient, odd entropy.
Phase phase_for_iteration(int t, const Schedule& sched);

enum class GradientAction { None, Clone, SplitTwo };
enum class ActionKind { Split, Keep, Prune };

/// Average accumulated gradient magnitude of gaussian i; 0 when nothing has
/// been accumulated.
double mean_gradient(const GaussianSet& set, std::size_t i);

/// Gradient-criterion verdict: no action unless the mean strictly exceeds
/// tau_pos; small Gaussians (max scale <= 1% of the scene extent) clone,
/// large ones split in two.
GradientAction gradient_phase_action(double g_mean, const Gaussian& gauss,
                                     double scene_extent, const Thresholds& thr);

/// Eigenentropy verdict: E <= tau_low splits, E > tau_high prunes, the
/// transitional band keeps.
ActionKind entropy_phase_action(double eigenentropy, const Thresholds& thr);

/// Linear-interpolation percentile of a sample (p in [0, 100]).
double percentile_linear(std::vector<double> values, double p);

/// Fan-out for a split by size against the set-wide max-scale percentiles:
/// >= p90 gives 8, >= p50 gives 4, else 2 (boundaries inclusive).
int split_fan_out(const Gaussian& gauss, double scale_p50, double scale_p90);

/// Replace a parent with n children sampled from its own density
/// N(center, R diag(scale^2) R^T); child scales shrink by 1.6 / 2.0 / 2.5 for
/// n = 2 / 4 / 8, rotation and opacity are inherited. Deterministic for a
/// fixed seed.
std::vector<Gaussian> split_gaussian(const Gaussian& gauss, int n, std::uint64_t rng_seed);

/// Ids of Gaussians with opacity strictly below thr.opacity_min.
std::vector<std::size_t> opacity_prune(const GaussianSet& set, const Thresholds& thr);

/// Rotation-invariant scene extent: max center distance from the centroid.
double scene_extent(const GaussianSet& set);

/// Gaussian set from bare points with the usual splatting initialization:
/// isotropic scale from the mean distance to the 3 nearest neighbors,
/// identity rotation, opacity 1.
GaussianSet make_initial_set(const std::vector<Vec3>& points);

/// Per-iteration gradient-magnitude feed replacing the renderer. Magnitudes
/// must be nonnegative and finite.
class GradientSource {
public:
    virtual ~GradientSource() = default;
    virtual double magnitude(const GaussianSet& set, std::size_t i, int t) const = 0;
    virtual std::string describe() const = 0;
};

class ZeroSource final : public GradientSource {
public:
    double magnitude(const GaussianSet&, std::size_t, int) const override { return 0.0; }
    std::string describe() const override { return "zero"; }
};

/// Constant per-Gaussian magnitudes loaded from a CSV file (one value per
/// line, '#' comments allowed). Gaussians beyond the file length contribute 0.
class FileSource final : public GradientSource {
public:
    explicit FileSource(const std::string& path);
    explicit FileSource(std::vector<double> values) : values_(std::move(values)) {}
    double magnitude(const GaussianSet&, std::size_t i, int) const override {
        return i < values_.size() ? values_[i] : 0.0;
    }
    std::string describe() const override { return "file"; }

private:
    std::vector<double> values_;
};

/// Photometric-error proxy: scale * distance(center, reference surface).
class SurfaceResidualSource final : public GradientSource {
public:
    SurfaceResidualSource(SurfaceRef surface, double scale)
        : surface_(surface), scale_(scale) {}
    double magnitude(const GaussianSet& set, std::size_t i, int) const override {
        return scale_ * surface_.distance(set.gaussians[i].center);
    }
    std::string describe() const override { return "surface"; }

private:
    SurfaceRef surface_;
    double scale_;
};

/// One densification event in the run trace.
struct EventRecord {
    int t = 0;
    Phase phase = Phase::NoDensify;
    int k = 0;
    std::size_t n_before = 0;
    std::size_t n_split = 0;
    std::size_t n_clone = 0;
    std::size_t n_prune_entropy = 0;
    std::size_t n_prune_opacity = 0;
    std::size_t n_after = 0;
    double mean_entropy_before = 0.0;
    double mean_entropy_after = 0.0;
};

struct DensifyResult {
    GaussianSet set;
    std::vector<EventRecord> trace;
    bool exhausted = false;  // set collapsed below 3 Gaussians; run stopped early
};

/// Algorithm loop: accumulate gradient statistics every iteration; at each
/// event classify every Gaussian against a frozen feature/gradient snapshot,
/// apply the actions, rebuild the index and reset the accumulators. Two runs
/// with identical inputs and seed produce bit-identical traces.
DensifyResult run_densification(GaussianSet set, const Schedule& sched,
                                const Thresholds& thr, const GradientSource& src,
                                std::uint64_t seed);

}  // namespace enton
