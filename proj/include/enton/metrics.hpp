#pragma once

#include <cstddef>
#include <vector>

#include "enton/features.hpp"
#include "enton/kdtree.hpp"
#include "enton/model.hpp"

namespace enton {

/// Masked cloud-to-cloud distances. A direction with zero inliers reports its
/// mean as NaN (the degenerate marker), never 0; NaN propagates into
/// symmetric_mean.
struct ChamferReport {
    double mean_a_to_b = 0.0;
    double mean_b_to_a = 0.0;
    double symmetric_mean = 0.0;
    std::size_t inlier_count_a = 0;
    std::size_t inlier_count_b = 0;
    std::size_t excluded_count_a = 0;
    std::size_t excluded_count_b = 0;
    double mask_radius = 0.0;
};

/// Exact nearest-neighbor distances in both directions; distances strictly
/// above mask_radius are excluded from the means. Parallelized per point.
/// Throws if either cloud is empty or the radius is not positive.
ChamferReport chamfer_c2c(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                          double mask_radius);

/// 10 log10(1 / MSE) over [0, 1] pixels. Identical images return +infinity.
/// Throws on a dimension or channel mismatch.
double psnr(const Image& ref, const Image& test);

/// Arithmetic mean eigenentropy over all Gaussians. Throws below 3 points.
double mean_eigenentropy(const GaussianSet& set, std::size_t k, const KnnIndex& index);

/// Mean eigenentropy restricted to Gaussians farther than dist_threshold from
/// the reference cloud. Returns NaN when there are no outliers.
double outlier_entropy_stat(const GaussianSet& set, const std::vector<Vec3>& reference,
                            double dist_threshold, std::size_t k, const KnnIndex& index);

}  // namespace enton
