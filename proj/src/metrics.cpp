#include "enton/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace enton {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Parallel map into slots, then a serial reduction: results stay
// bit-identical for any thread count.
std::vector<double> nn_distances(const std::vector<Vec3>& from, const KnnIndex& to) {
    std::vector<double> d(from.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(from.size()); ++i)
        d[static_cast<std::size_t>(i)] =
            to.knn_of_point(from[static_cast<std::size_t>(i)], 1)[0].distance;
    return d;
}

struct DirectionalMean {
    double mean;
    std::size_t inliers;
    std::size_t excluded;
};

DirectionalMean masked_mean(const std::vector<double>& distances, double mask_radius) {
    double sum = 0.0;
    std::size_t inliers = 0;
    for (double d : distances) {
        if (d > mask_radius) continue;
        sum += d;
        ++inliers;
    }
    DirectionalMean out;
    out.inliers = inliers;
    out.excluded = distances.size() - inliers;
    out.mean = inliers > 0 ? sum / static_cast<double>(inliers) : kNaN;
    return out;
}

}  // namespace

ChamferReport chamfer_c2c(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                          double mask_radius) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty point cloud");
    if (!(mask_radius > 0.0)) throw std::invalid_argument("mask radius must be positive");

    const KnnIndex index_a = KnnIndex::build(a);
    const KnnIndex index_b = KnnIndex::build(b);
    const DirectionalMean ab = masked_mean(nn_distances(a, index_b), mask_radius);
    const DirectionalMean ba = masked_mean(nn_distances(b, index_a), mask_radius);

    ChamferReport r;
    r.mean_a_to_b = ab.mean;
    r.mean_b_to_a = ba.mean;
    r.symmetric_mean = (ab.mean + ba.mean) / 2.0;
    r.inlier_count_a = ab.inliers;
    r.inlier_count_b = ba.inliers;
    r.excluded_count_a = ab.excluded;
    r.excluded_count_b = ba.excluded;
    r.mask_radius = mask_radius;
    return r;
}

double psnr(const Image& ref, const Image& test) {
    if (ref.width != test.width || ref.height != test.height ||
        ref.channels != test.channels)
        throw std::invalid_argument("image dimension mismatch");
    if (ref.pixels.size() != ref.expected_size() ||
        test.pixels.size() != test.expected_size())
        throw std::invalid_argument("pixel buffer size mismatch");
    if (ref.pixels.empty()) throw std::invalid_argument("empty image");

    double sq_sum = 0.0;
    for (std::size_t i = 0; i < ref.pixels.size(); ++i) {
        const double d = ref.pixels[i] - test.pixels[i];
        sq_sum += d * d;
    }
    const double mse = sq_sum / static_cast<double>(ref.pixels.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double mean_eigenentropy(const GaussianSet& set, std::size_t k, const KnnIndex& index) {
    const auto features = features_for_set(set, index, k);
    double sum = 0.0;
    for (const auto& f : features) sum += f.eigenentropy;
    return sum / static_cast<double>(features.size());
}

double outlier_entropy_stat(const GaussianSet& set, const std::vector<Vec3>& reference,
                            double dist_threshold, std::size_t k, const KnnIndex& index) {
    if (reference.empty()) throw std::invalid_argument("empty reference cloud");
    const KnnIndex ref_index = KnnIndex::build(reference);
    const auto dists = nn_distances(set.centers(), ref_index);
    const auto features = features_for_set(set, index, k);

    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < dists.size(); ++i) {
        if (dists[i] <= dist_threshold) continue;
        sum += features[i].eigenentropy;
        ++count;
    }
    if (count == 0) return kNaN;
    return sum / static_cast<double>(count);
}

}  // namespace enton
