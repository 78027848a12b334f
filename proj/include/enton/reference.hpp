#pragma once

#include <array>
#include <vector>

#include "enton/features.hpp"
#include "enton/model.hpp"

namespace enton::reference {

/// Serial reference kernels. These deliberately take a different route from
/// the production code (brute-force neighbor scan, elementwise covariance
/// accumulation, characteristic-polynomial eigenvalues instead of kd-tree,
/// fused accumulation and Jacobi rotations) so the two can check each other.
/// They are kept in the library for the test suites and the benchmark.

/// Eigenvalues of a symmetric 3x3 matrix via the trigonometric solution of
/// the characteristic polynomial, sorted descending.
std::array<double, 3> sym3_eigenvalues_cardano(const SymMat3& m);

/// Straight-line features of one neighborhood: centroid, then a double loop
/// over matrix entries, then Cardano eigenvalues.
EigenFeatures features_of_neighborhood(const std::vector<Vec3>& points);

/// Per-point features over the whole cloud using the brute-force neighbor
/// scan. Single-threaded.
std::vector<EigenFeatures> features_for_points(const std::vector<Vec3>& points,
                                               std::size_t k);

/// Serial brute-force nearest-neighbor distance from each point of `from` to
/// the cloud `to`.
std::vector<double> nn_distances_brute(const std::vector<Vec3>& from,
                                       const std::vector<Vec3>& to);

}  // namespace enton::reference
