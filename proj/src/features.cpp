#include "enton/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace enton {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void sort_descending(std::array<double, 3>& v) {
    std::sort(v.begin(), v.end(), std::greater<double>());
}

}  // namespace

Vec3 neighborhood_centroid(const std::vector<Vec3>& points) {
    if (points.empty()) throw std::invalid_argument("empty neighborhood");
    Vec3 sum;
    for (const auto& p : points) sum += p;
    return sum / static_cast<double>(points.size());
}

SymMat3 neighborhood_covariance(const std::vector<Vec3>& points) {
    if (points.empty()) throw std::invalid_argument("empty neighborhood");
    const Vec3 mean = neighborhood_centroid(points);
    SymMat3 c;
    for (const auto& p : points) {
        const Vec3 d = p - mean;
        c.xx += d.x * d.x;
        c.xy += d.x * d.y;
        c.xz += d.x * d.z;
        c.yy += d.y * d.y;
        c.yz += d.y * d.z;
        c.zz += d.z * d.z;
    }
    const double inv = 1.0 / static_cast<double>(points.size());
    c.xx *= inv;
    c.xy *= inv;
    c.xz *= inv;
    c.yy *= inv;
    c.yz *= inv;
    c.zz *= inv;
    return c;
}

namespace {

// Cyclic Jacobi rotations on a 3x3 symmetric matrix. Convergence is fast at
// this size; the off-diagonal mass drops below machine precision in a few
// sweeps.
void jacobi_sym3(const SymMat3& m, std::array<double, 3>& values,
                 std::array<Vec3, 3>* vectors) {
    double a[3][3] = {{m.xx, m.xy, m.xz}, {m.xy, m.yy, m.yz}, {m.xz, m.yz, m.zz}};
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    for (int sweep = 0; sweep < 64; ++sweep) {
        const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if (off == 0.0) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const double app = a[p][p];
                const double aqq = a[q][q];
                const double apq = a[p][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for (int r = 0; r < 3; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a[r][p];
                    const double arq = a[r][q];
                    a[r][p] = a[p][r] = c * arp - s * arq;
                    a[r][q] = a[q][r] = s * arp + c * arq;
                }
                for (int r = 0; r < 3; ++r) {
                    const double vrp = v[r][p];
                    const double vrq = v[r][q];
                    v[r][p] = c * vrp - s * vrq;
                    v[r][q] = s * vrp + c * vrq;
                }
            }
        }
    }

    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(),
              [&](int i, int j) { return a[i][i] > a[j][j]; });
    for (int i = 0; i < 3; ++i) values[i] = a[idx[i]][idx[i]];
    if (vectors) {
        for (int i = 0; i < 3; ++i)
            (*vectors)[i] = {v[0][idx[i]], v[1][idx[i]], v[2][idx[i]]};
    }
}

void clamp_roundoff_negatives(std::array<double, 3>& values, double matrix_norm) {
    const double tol = 1e-9 * matrix_norm;
    for (double& lambda : values)
        if (lambda < 0.0 && lambda >= -tol) lambda = 0.0;
}

}  // namespace

std::array<double, 3> sym3_eigenvalues(const SymMat3& m) {
    if (!m.finite()) throw std::invalid_argument("non-finite matrix entries");
    std::array<double, 3> values;
    jacobi_sym3(m, values, nullptr);
    clamp_roundoff_negatives(values, m.frobenius_norm());
    return values;
}

EigenDecomposition sym3_eigendecomposition(const SymMat3& m) {
    if (!m.finite()) throw std::invalid_argument("non-finite matrix entries");
    EigenDecomposition d;
    jacobi_sym3(m, d.values, &d.vectors);
    clamp_roundoff_negatives(d.values, m.frobenius_norm());
    return d;
}

std::optional<std::array<double, 3>> normalize_eigenvalues(const std::array<double, 3>& lambda) {
    std::array<double, 3> v = lambda;
    for (double& x : v) {
        if (x < -1e-9) throw std::invalid_argument("negative eigenvalue");
        if (x < 0.0) x = 0.0;
    }
    const double sum = v[0] + v[1] + v[2];
    if (sum == 0.0) return std::nullopt;
    for (double& x : v) x /= sum;
    sort_descending(v);
    return v;
}

double eigenentropy(const std::array<double, 3>& normalized) {
    double sum = 0.0;
    for (double l : normalized) {
        if (l < -1e-9 || l > 1.0 + 1e-9)
            throw std::invalid_argument("normalized eigenvalue outside [0, 1]");
        sum += l;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("normalized eigenvalues do not sum to 1");

    double entropy = 0.0;
    for (double l : normalized)
        if (l > 0.0) entropy -= l * std::log(l);
    return entropy;
}

double planarity(const std::array<double, 3>& lambda) {
    if (lambda[0] <= 0.0) return kNaN;
    return (lambda[1] - lambda[2]) / lambda[0];
}

EigenFeatures features_of_neighborhood(const std::vector<Vec3>& points) {
    const SymMat3 cov = neighborhood_covariance(points);
    EigenFeatures f;
    f.eigenvalues = sym3_eigenvalues(cov);
    // Residual negatives beyond the clamp band would mean a broken covariance.
    for (double& l : f.eigenvalues)
        if (l < 0.0) l = 0.0;
    const auto normalized = normalize_eigenvalues(f.eigenvalues);
    if (normalized) {
        f.normalized = *normalized;
        f.eigenentropy = eigenentropy(f.normalized);
        f.planarity = planarity(f.eigenvalues);
    } else {
        // Coincident points carry no structure; treat as maximal disorder so
        // redundant Gaussians become pruning candidates.
        f.normalized = {kNaN, kNaN, kNaN};
        f.eigenentropy = kLn3;
        f.planarity = kNaN;
    }
    return f;
}

std::vector<EigenFeatures> features_for_set(const GaussianSet& set, const KnnIndex& index,
                                            std::size_t k) {
    if (set.size() < 3)
        throw std::invalid_argument("insufficient points for covariance");
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (index.size() != set.size())
        throw std::invalid_argument("index size does not match set size");

    const std::size_t n = set.size();
    std::vector<EigenFeatures> out(n);

#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const auto neighbors = index.knn_of_member(static_cast<std::size_t>(i), k);
        std::vector<Vec3> pts;
        pts.reserve(neighbors.size() + 1);
        pts.push_back(set.gaussians[static_cast<std::size_t>(i)].center);
        for (const auto& nb : neighbors) pts.push_back(index.point(nb.id));
        out[static_cast<std::size_t>(i)] = features_of_neighborhood(pts);
    }
    return out;
}

}  // namespace enton
