#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace enton {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dist2(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

/// Row-major 3x3 matrix; only used for rotations and covariance products.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    static Mat3 identity() {
        Mat3 r;
        r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
        return r;
    }
    Vec3 apply(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }
};

/// Symmetric 3x3 matrix stored as the row-major upper triangle.
struct SymMat3 {
    double xx = 0.0, xy = 0.0, xz = 0.0;
    double yy = 0.0, yz = 0.0;
    double zz = 0.0;

    Mat3 to_mat3() const {
        Mat3 r;
        r.m = {{{xx, xy, xz}, {xy, yy, yz}, {xz, yz, zz}}};
        return r;
    }
    double frobenius_norm() const {
        return std::sqrt(xx * xx + yy * yy + zz * zz +
                         2.0 * (xy * xy + xz * xz + yz * yz));
    }
    bool finite() const {
        return std::isfinite(xx) && std::isfinite(xy) && std::isfinite(xz) &&
               std::isfinite(yy) && std::isfinite(yz) && std::isfinite(zz);
    }
};

/// Unit quaternion, storage order (w, x, y, z). The order is part of the
/// file-format contract and must not change.
struct Quaternion {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Mat3 to_rotation_matrix() const {
        Mat3 r;
        r.m[0] = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)};
        r.m[1] = {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)};
        r.m[2] = {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
        return r;
    }

    /// Hamilton product; (this * o) rotates by o first, then by this.
    Quaternion operator*(const Quaternion& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }
};

struct Gaussian {
    Vec3 center;
    Vec3 scale{1.0, 1.0, 1.0};  // per-axis extent, scene units, strictly positive
    Quaternion rotation;
    double opacity = 1.0;  // post-activation, in [0, 1]
};

/// The mutable scene: Gaussians plus their accumulated gradient statistics.
/// grad_accum[i] is the running sum of gradient magnitudes for gaussian i,
/// grad_count[i] the number of accumulated contributions.
struct GaussianSet {
    std::vector<Gaussian> gaussians;
    std::vector<double> grad_accum;
    std::vector<long long> grad_count;
    std::string units;  // metadata tag only, never converted

    std::size_t size() const { return gaussians.size(); }

    void push_back(const Gaussian& g) {
        gaussians.push_back(g);
        grad_accum.push_back(0.0);
        grad_count.push_back(0);
    }

    void reset_grad_stats() {
        grad_accum.assign(gaussians.size(), 0.0);
        grad_count.assign(gaussians.size(), 0);
    }

    std::vector<Vec3> centers() const {
        std::vector<Vec3> c;
        c.reserve(gaussians.size());
        for (const auto& g : gaussians) c.push_back(g.center);
        return c;
    }

    static GaussianSet from_points(const std::vector<Vec3>& pts) {
        GaussianSet s;
        s.gaussians.reserve(pts.size());
        for (const auto& p : pts) {
            Gaussian g;
            g.center = p;
            s.gaussians.push_back(g);
        }
        s.reset_grad_stats();
        return s;
    }
};

struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;  // 1 or 3
    std::vector<double> pixels;  // row-major, interleaved, values in [0, 1]

    std::size_t expected_size() const {
        return static_cast<std::size_t>(width) * height * channels;
    }
};

struct Violation {
    long long index;  // gaussian index, or -1 for set-level problems
    std::string message;
};

/// Reports every type-invariant violation in the set. Never throws.
std::vector<Violation> validate_set(const GaussianSet& set);

}  // namespace enton
