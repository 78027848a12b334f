#pragma once

#include <array>
#include <optional>
#include <vector>

#include "enton/kdtree.hpp"
#include "enton/model.hpp"

namespace enton {

constexpr double kLn2 = 0.6931471805599453094172321;
constexpr double kLn3 = 1.0986122886681096913952452;

/// Eigenvalue shape features of one local neighborhood.
/// A fully degenerate neighborhood (all points coincident, trace zero) gets
/// eigenentropy ln 3 by convention and NaN for normalized values/planarity.
struct EigenFeatures {
    std::array<double, 3> eigenvalues{};  // descending, >= 0 after round-off clamp
    std::array<double, 3> normalized{};   // descending, sums to 1; NaN when degenerate
    double eigenentropy = 0.0;            // in [0, ln 3]
    double planarity = 0.0;               // (l2 - l3) / l1; NaN when l1 == 0

    bool degenerate() const { return !(eigenvalues[0] > 0.0); }
};

/// Arithmetic mean of the neighborhood (the point itself plus its k
/// neighbors). Throws on an empty list.
Vec3 neighborhood_centroid(const std::vector<Vec3>& points);

/// Biased covariance C = 1/(k+1) * sum (p_i - mean)(p_i - mean)^T over all
/// k+1 points. Symmetric positive semidefinite. Throws on an empty list.
SymMat3 neighborhood_covariance(const std::vector<Vec3>& points);

/// Real eigenvalues of a symmetric 3x3 matrix, sorted descending.
/// Round-off negatives within 1e-9 * ||m||_F of zero are clamped to 0.
/// Throws on non-finite entries.
std::array<double, 3> sym3_eigenvalues(const SymMat3& m);

struct EigenDecomposition {
    std::array<double, 3> values;  // descending
    std::array<Vec3, 3> vectors;   // orthonormal, vectors[i] pairs with values[i]
};
EigenDecomposition sym3_eigendecomposition(const SymMat3& m);

/// lambda_i / sum(lambda), re-sorted descending. Returns nullopt when the sum
/// is zero (the degenerate marker). Throws if any input is below -1e-9.
std::optional<std::array<double, 3>> normalize_eigenvalues(const std::array<double, 3>& lambda);

/// Shannon entropy -sum l'_i ln l'_i with 0 ln 0 = 0. Inputs must lie in
/// [0, 1] and sum to 1 within 1e-9, otherwise throws.
double eigenentropy(const std::array<double, 3>& normalized);

/// (lambda2 - lambda3) / lambda1 for descending eigenvalues; NaN when
/// lambda1 == 0 (the degenerate marker).
double planarity(const std::array<double, 3>& lambda);

/// Features for every Gaussian from the covariance of {center_i} union its k
/// nearest neighbors. The index must be built over the set's current centers.
/// Parallelized per Gaussian (OpenMP); output order matches input order and
/// is bit-identical for any thread count.
/// Throws if the set has fewer than 3 points or k < 2.
std::vector<EigenFeatures> features_for_set(const GaussianSet& set, const KnnIndex& index,
                                            std::size_t k);

/// Single-neighborhood variant used by both pipelines and the tests.
EigenFeatures features_of_neighborhood(const std::vector<Vec3>& points);

}  // namespace enton
