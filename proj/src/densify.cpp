#include "enton/densify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "enton/kdtree.hpp"
#include "enton/rng.hpp"

namespace enton {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_scale(const Gaussian& g) {
    return std::max({g.scale.x, g.scale.y, g.scale.z});
}

double child_scale_divisor(int n) {
    switch (n) {
        case 2: return 1.6;
        case 4: return 2.0;
        case 8: return 2.5;
    }
    throw std::invalid_argument("split fan-out must be 2, 4 or 8");
}

}  // namespace

void Thresholds::validate() const {
    if (!(tau_low >= 0.0) || !(tau_low < tau_high) || !(tau_high <= kLn3 + 1e-9))
        throw std::invalid_argument("require 0 <= tau_low < tau_high <= ln 3");
    if (!(tau_pos > 0.0)) throw std::invalid_argument("tau_pos must be positive");
    if (!(opacity_min > 0.0) || !(opacity_min < 1.0))
        throw std::invalid_argument("opacity_min must be in (0, 1)");
}

int Schedule::k_at(int t) const {
    int k = knn_steps.front().k;
    for (const auto& step : knn_steps) {
        if (step.start_iteration > t) break;
        k = step.k;
    }
    return k;
}

void Schedule::validate() const {
    if (period < 1) throw std::invalid_argument("period must be positive");
    if (pretrain_end < 0 || pretrain_end % period != 0)
        throw std::invalid_argument("pretrain_end must be a nonnegative multiple of period");
    if (total_iterations < 0)
        throw std::invalid_argument("total_iterations must be nonnegative");
    if (knn_steps.empty()) throw std::invalid_argument("knn schedule is empty");
    if (knn_steps.front().start_iteration != 0)
        throw std::invalid_argument("knn schedule must start at iteration 0");
    int prev_start = -1;
    for (const auto& step : knn_steps) {
        if (step.start_iteration <= prev_start)
            throw std::invalid_argument("knn schedule steps must be strictly increasing");
        if (step.k < 2) throw std::invalid_argument("knn schedule k must be at least 2");
        prev_start = step.start_iteration;
    }
}

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::NoDensify: return "none";
        case Phase::Gradient: return "gradient";
        case Phase::Entropy: return "entropy";
    }
    return "none";
}

Phase phase_for_iteration(int t, const Schedule& sched) {
    if (t < 0) throw std::invalid_argument("iteration must be nonnegative");
    if (t % sched.period != 0) return Phase::NoDensify;
    if (t < sched.pretrain_end) return Phase::Gradient;
    return ((t / sched.period) % 2 == 0) ? Phase::Gradient : Phase::Entropy;
}

double mean_gradient(const GaussianSet& set, std::size_t i) {
    if (set.grad_count[i] == 0) return 0.0;
    return set.grad_accum[i] / static_cast<double>(set.grad_count[i]);
}

GradientAction gradient_phase_action(double g_mean, const Gaussian& gauss,
                                     double scene_extent, const Thresholds& thr) {
    if (!(scene_extent > 0.0)) throw std::invalid_argument("scene extent must be positive");
    if (!(g_mean > thr.tau_pos)) return GradientAction::None;
    return max_scale(gauss) <= 0.01 * scene_extent ? GradientAction::Clone
                                                   : GradientAction::SplitTwo;
}

ActionKind entropy_phase_action(double eigenentropy, const Thresholds& thr) {
    if (eigenentropy <= thr.tau_low) return ActionKind::Split;
    if (eigenentropy > thr.tau_high) return ActionKind::Prune;
    return ActionKind::Keep;
}

double percentile_linear(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("empty sample");
    if (p < 0.0 || p > 100.0) throw std::invalid_argument("percentile out of range");
    std::sort(values.begin(), values.end());
    const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    const double frac = rank - static_cast<double>(lo);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

int split_fan_out(const Gaussian& gauss, double scale_p50, double scale_p90) {
    const double s = max_scale(gauss);
    if (s >= scale_p90) return 8;
    if (s >= scale_p50) return 4;
    return 2;
}

std::vector<Gaussian> split_gaussian(const Gaussian& gauss, int n, std::uint64_t rng_seed) {
    const double divisor = child_scale_divisor(n);
    const Mat3 rotation = gauss.rotation.to_rotation_matrix();

    Rng rng(rng_seed);
    std::vector<Gaussian> children;
    children.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const Vec3 z = rng.normal3();
        const Vec3 offset = rotation.apply(
            {gauss.scale.x * z.x, gauss.scale.y * z.y, gauss.scale.z * z.z});
        Gaussian child = gauss;
        child.center = gauss.center + offset;
        child.scale = gauss.scale / divisor;
        children.push_back(child);
    }
    return children;
}

std::vector<std::size_t> opacity_prune(const GaussianSet& set, const Thresholds& thr) {
    std::vector<std::size_t> pruned;
    for (std::size_t i = 0; i < set.size(); ++i)
        if (set.gaussians[i].opacity < thr.opacity_min) pruned.push_back(i);
    return pruned;
}

double scene_extent(const GaussianSet& set) {
    if (set.size() == 0) return 0.0;
    Vec3 centroid;
    for (const auto& g : set.gaussians) centroid += g.center;
    centroid = centroid / static_cast<double>(set.size());
    double max_d2 = 0.0;
    for (const auto& g : set.gaussians)
        max_d2 = std::max(max_d2, dist2(g.center, centroid));
    return std::sqrt(max_d2);
}

GaussianSet make_initial_set(const std::vector<Vec3>& points) {
    GaussianSet set = GaussianSet::from_points(points);
    if (points.size() < 2) return set;

    const KnnIndex index = KnnIndex::build(points);
    const std::size_t k = std::min<std::size_t>(3, points.size() - 1);
    std::vector<double> mean_dist(points.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(points.size()); ++i) {
        const auto nbs = index.knn_of_member(static_cast<std::size_t>(i), k);
        double sum = 0.0;
        for (const auto& nb : nbs) sum += nb.distance;
        mean_dist[static_cast<std::size_t>(i)] = sum / static_cast<double>(nbs.size());
    }
    // Coincident duplicates would otherwise get a zero scale.
    double fallback = 0.0;
    for (double d : mean_dist) fallback = std::max(fallback, d);
    fallback = fallback > 0.0 ? fallback * 1e-6 : 1e-9;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double s = mean_dist[i] > 0.0 ? mean_dist[i] : fallback;
        set.gaussians[i].scale = {s, s, s};
    }
    return set;
}

FileSource::FileSource(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gradient file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        double v;
        if (!(ss >> v)) throw std::runtime_error("bad gradient value in " + path);
        if (!std::isfinite(v) || v < 0.0)
            throw std::runtime_error("gradient magnitudes must be nonnegative and finite");
        values_.push_back(v);
    }
}

namespace {

struct Action {
    enum class Kind { Keep, Clone, Split, PruneEntropy, PruneOpacity };
    Kind kind = Kind::Keep;
    int fan_out = 0;
};

double mean_entropy_of(const std::vector<EigenFeatures>& features) {
    double sum = 0.0;
    for (const auto& f : features) sum += f.eigenentropy;
    return sum / static_cast<double>(features.size());
}

}  // namespace

DensifyResult run_densification(GaussianSet set, const Schedule& sched,
                                const Thresholds& thr, const GradientSource& src,
                                std::uint64_t seed) {
    sched.validate();
    thr.validate();
    if (set.size() < 3) throw std::invalid_argument("set needs at least 3 Gaussians");
    if (set.grad_accum.size() != set.size() || set.grad_count.size() != set.size())
        throw std::invalid_argument("gradient statistics length mismatch");

    const double extent = scene_extent(set);
    DensifyResult result;
    std::uint64_t event_index = 0;

    for (int t = 1; t <= sched.total_iterations; ++t) {
        for (std::size_t i = 0; i < set.size(); ++i) {
            const double g = src.magnitude(set, i, t);
            if (!std::isfinite(g) || g < 0.0)
                throw std::runtime_error("gradient source produced an invalid magnitude");
            set.grad_accum[i] += g;
            set.grad_count[i] += 1;
        }

        const Phase phase = phase_for_iteration(t, sched);
        if (phase == Phase::NoDensify) continue;

        // Frozen snapshot: all verdicts are decided against the same features
        // and gradient means, so the outcome is independent of processing
        // order.
        const int k = sched.k_at(t);
        const KnnIndex index = KnnIndex::build(set.centers());
        const auto features = features_for_set(set, index, static_cast<std::size_t>(k));

        EventRecord event;
        event.t = t;
        event.phase = phase;
        event.k = k;
        event.n_before = set.size();
        event.mean_entropy_before = mean_entropy_of(features);

        std::vector<double> scales(set.size());
        for (std::size_t i = 0; i < set.size(); ++i) scales[i] = max_scale(set.gaussians[i]);
        const double p50 = percentile_linear(scales, 50.0);
        const double p90 = percentile_linear(scales, 90.0);

        std::vector<Action> actions(set.size());
        for (std::size_t i = 0; i < set.size(); ++i) {
            Action& a = actions[i];
            if (set.gaussians[i].opacity < thr.opacity_min) {
                a.kind = Action::Kind::PruneOpacity;
                continue;
            }
            if (phase == Phase::Gradient) {
                switch (gradient_phase_action(mean_gradient(set, i), set.gaussians[i],
                                              extent, thr)) {
                    case GradientAction::None: a.kind = Action::Kind::Keep; break;
                    case GradientAction::Clone: a.kind = Action::Kind::Clone; break;
                    case GradientAction::SplitTwo:
                        a.kind = Action::Kind::Split;
                        a.fan_out = 2;
                        break;
                }
            } else {
                switch (entropy_phase_action(features[i].eigenentropy, thr)) {
                    case ActionKind::Keep: a.kind = Action::Kind::Keep; break;
                    case ActionKind::Prune: a.kind = Action::Kind::PruneEntropy; break;
                    case ActionKind::Split:
                        a.kind = Action::Kind::Split;
                        a.fan_out = split_fan_out(set.gaussians[i], p50, p90);
                        break;
                }
            }
        }

        // Survivors keep their relative order; children and clones are
        // appended grouped by parent id. Child sampling is seeded per
        // (run seed, event, parent), so results do not depend on the order in
        // which parents are processed.
        GaussianSet next;
        next.units = set.units;
        next.gaussians.reserve(set.size());
        for (std::size_t i = 0; i < set.size(); ++i) {
            const Action& a = actions[i];
            if (a.kind == Action::Kind::Keep || a.kind == Action::Kind::Clone)
                next.gaussians.push_back(set.gaussians[i]);
            switch (a.kind) {
                case Action::Kind::Split: ++event.n_split; break;
                case Action::Kind::Clone: ++event.n_clone; break;
                case Action::Kind::PruneEntropy: ++event.n_prune_entropy; break;
                case Action::Kind::PruneOpacity: ++event.n_prune_opacity; break;
                case Action::Kind::Keep: break;
            }
        }
        for (std::size_t i = 0; i < set.size(); ++i) {
            const Action& a = actions[i];
            if (a.kind == Action::Kind::Clone) {
                next.gaussians.push_back(set.gaussians[i]);
            } else if (a.kind == Action::Kind::Split) {
                const auto children = split_gaussian(
                    set.gaussians[i], a.fan_out,
                    mix_seed(seed, event_index, static_cast<std::uint64_t>(i)));
                next.gaussians.insert(next.gaussians.end(), children.begin(), children.end());
            }
        }
        next.reset_grad_stats();
        set = std::move(next);
        event.n_after = set.size();

        if (set.size() < 3) {
            event.mean_entropy_after = kNaN;
            result.trace.push_back(event);
            result.exhausted = true;
            break;
        }

        const KnnIndex post_index = KnnIndex::build(set.centers());
        event.mean_entropy_after =
            mean_entropy_of(features_for_set(set, post_index, static_cast<std::size_t>(k)));
        result.trace.push_back(event);
        ++event_index;
    }

    result.set = std::move(set);
    return result;
}

}  // namespace enton
