#include "enton/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "enton/kdtree.hpp"

namespace enton::reference {

std::array<double, 3> sym3_eigenvalues_cardano(const SymMat3& m) {
    if (!m.finite()) throw std::invalid_argument("non-finite matrix entries");

    const double p1 = m.xy * m.xy + m.xz * m.xz + m.yz * m.yz;
    std::array<double, 3> eig;
    if (p1 == 0.0) {
        eig = {m.xx, m.yy, m.zz};
    } else {
        const double q = (m.xx + m.yy + m.zz) / 3.0;
        const double p2 = (m.xx - q) * (m.xx - q) + (m.yy - q) * (m.yy - q) +
                          (m.zz - q) * (m.zz - q) + 2.0 * p1;
        const double p = std::sqrt(p2 / 6.0);
        // B = (A - q I) / p
        const double bxx = (m.xx - q) / p;
        const double byy = (m.yy - q) / p;
        const double bzz = (m.zz - q) / p;
        const double bxy = m.xy / p;
        const double bxz = m.xz / p;
        const double byz = m.yz / p;
        const double det_b = bxx * (byy * bzz - byz * byz) -
                             bxy * (bxy * bzz - byz * bxz) +
                             bxz * (bxy * byz - byy * bxz);
        const double r = std::clamp(det_b / 2.0, -1.0, 1.0);
        const double phi = std::acos(r) / 3.0;
        const double two_pi_third = 2.0943951023931954923084289;
        eig[0] = q + 2.0 * p * std::cos(phi);
        eig[2] = q + 2.0 * p * std::cos(phi + 2.0 * two_pi_third);
        eig[1] = 3.0 * q - eig[0] - eig[2];
    }
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    const double tol = 1e-9 * m.frobenius_norm();
    for (double& l : eig)
        if (l < 0.0 && l >= -tol) l = 0.0;
    return eig;
}

EigenFeatures features_of_neighborhood(const std::vector<Vec3>& points) {
    if (points.empty()) throw std::invalid_argument("empty neighborhood");
    const std::size_t n = points.size();

    double mean[3] = {0.0, 0.0, 0.0};
    for (const auto& p : points) {
        mean[0] += p.x;
        mean[1] += p.y;
        mean[2] += p.z;
    }
    for (double& c : mean) c /= static_cast<double>(n);

    double cov[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (const auto& p : points) {
        const double d[3] = {p.x - mean[0], p.y - mean[1], p.z - mean[2]};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) cov[r][c] += d[r] * d[c];
    }
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) cov[r][c] /= static_cast<double>(n);

    SymMat3 sym;
    sym.xx = cov[0][0];
    sym.xy = cov[0][1];
    sym.xz = cov[0][2];
    sym.yy = cov[1][1];
    sym.yz = cov[1][2];
    sym.zz = cov[2][2];

    EigenFeatures f;
    f.eigenvalues = sym3_eigenvalues_cardano(sym);
    for (double& l : f.eigenvalues)
        if (l < 0.0) l = 0.0;
    const double sum = f.eigenvalues[0] + f.eigenvalues[1] + f.eigenvalues[2];
    if (sum == 0.0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        f.normalized = {nan, nan, nan};
        f.eigenentropy = kLn3;
        f.planarity = nan;
        return f;
    }
    for (int i = 0; i < 3; ++i) f.normalized[i] = f.eigenvalues[i] / sum;
    f.eigenentropy = 0.0;
    for (double l : f.normalized)
        if (l > 0.0) f.eigenentropy -= l * std::log(l);
    f.planarity = f.eigenvalues[0] > 0.0
                      ? (f.eigenvalues[1] - f.eigenvalues[2]) / f.eigenvalues[0]
                      : std::numeric_limits<double>::quiet_NaN();
    return f;
}

std::vector<EigenFeatures> features_for_points(const std::vector<Vec3>& points,
                                               std::size_t k) {
    if (points.size() < 3)
        throw std::invalid_argument("insufficient points for covariance");
    if (k < 2) throw std::invalid_argument("k must be at least 2");

    std::vector<EigenFeatures> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto neighbors = knn_brute_force(points, i, k);
        std::vector<Vec3> pts;
        pts.reserve(neighbors.size() + 1);
        pts.push_back(points[i]);
        for (const auto& nb : neighbors) pts.push_back(points[nb.id]);
        out.push_back(reference::features_of_neighborhood(pts));
    }
    return out;
}

std::vector<double> nn_distances_brute(const std::vector<Vec3>& from,
                                       const std::vector<Vec3>& to) {
    if (to.empty()) throw std::invalid_argument("empty point set");
    std::vector<double> out;
    out.reserve(from.size());
    for (const auto& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : to) best = std::min(best, dist2(p, q));
        out.push_back(std::sqrt(best));
    }
    return out;
}

}  // namespace enton::reference
