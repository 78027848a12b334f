#include "enton/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "enton/rng.hpp"

namespace enton {

double SurfaceRef::distance(const Vec3& p) const {
    switch (kind) {
        case Kind::Plane:
            return std::abs((p - origin).dot(direction));
        case Kind::Line: {
            const Vec3 d = p - origin;
            const Vec3 perp = d - direction * d.dot(direction);
            return perp.norm();
        }
        case Kind::Sphere:
            return std::abs((p - origin).norm() - radius);
        case Kind::BoxShell: {
            // Unsigned distance to the shell of the axis-aligned box
            // [origin, direction].
            const Vec3 c = (origin + direction) * 0.5;
            const Vec3 h = (direction - origin) * 0.5;
            const Vec3 q{std::abs(p.x - c.x) - h.x, std::abs(p.y - c.y) - h.y,
                         std::abs(p.z - c.z) - h.z};
            const Vec3 outside{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
            const double inside = std::min(std::max({q.x, q.y, q.z}), 0.0);
            return std::abs(outside.norm() + inside);
        }
    }
    return 0.0;
}

namespace {

std::string kind_name(SurfaceRef::Kind k) {
    switch (k) {
        case SurfaceRef::Kind::Plane: return "plane";
        case SurfaceRef::Kind::Line: return "line";
        case SurfaceRef::Kind::Sphere: return "sphere";
        case SurfaceRef::Kind::BoxShell: return "box_shell";
    }
    return "plane";
}

SurfaceRef::Kind kind_from_name(const std::string& s) {
    if (s == "plane") return SurfaceRef::Kind::Plane;
    if (s == "line") return SurfaceRef::Kind::Line;
    if (s == "sphere") return SurfaceRef::Kind::Sphere;
    if (s == "box_shell") return SurfaceRef::Kind::BoxShell;
    throw std::runtime_error("unknown surface kind: " + s);
}

nlohmann::json vec_to_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

Vec3 vec_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::string SurfaceRef::to_json() const {
    nlohmann::json j;
    j["kind"] = kind_name(kind);
    j["origin"] = vec_to_json(origin);
    j["direction"] = vec_to_json(direction);
    j["radius"] = radius;
    return j.dump(2);
}

SurfaceRef SurfaceRef::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open surface file: " + path);
    nlohmann::json j;
    in >> j;
    SurfaceRef s;
    s.kind = kind_from_name(j.at("kind").get<std::string>());
    s.origin = vec_from_json(j.at("origin"));
    s.direction = vec_from_json(j.at("direction"));
    s.radius = j.value("radius", 0.0);
    return s;
}

void SurfaceRef::write_json_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write surface file: " + path);
    out << to_json() << "\n";
}

SceneKind scene_kind_from_string(const std::string& name) {
    if (name == "plane") return SceneKind::Plane;
    if (name == "line") return SceneKind::Line;
    if (name == "ball") return SceneKind::Ball;
    if (name == "noisybox") return SceneKind::NoisyBox;
    if (name == "clutter") return SceneKind::PlanePlusClutter;
    throw std::runtime_error("unknown scene kind: " + name);
}

std::string to_string(SceneKind kind) {
    switch (kind) {
        case SceneKind::Plane: return "plane";
        case SceneKind::Line: return "line";
        case SceneKind::Ball: return "ball";
        case SceneKind::NoisyBox: return "noisybox";
        case SceneKind::PlanePlusClutter: return "clutter";
    }
    return "plane";
}

namespace {

// Clutter blob parameters, chosen so that the blob is compact enough for its
// members to see mostly other clutter in their k-neighborhoods.
constexpr double kClutterHeight = 0.3;
constexpr double kClutterRadius = 0.03;

void add_plane_points(std::vector<Vec3>& pts, std::size_t n, double sigma, Rng& rng) {
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        const double v = rng.uniform01();
        const double w = sigma > 0.0 ? sigma * rng.normal() : 0.0;
        pts.push_back({u, v, w});
    }
}

}  // namespace

SynthScene synth_scene(SceneKind kind, std::size_t n, double noise_sigma,
                       std::uint64_t seed, double clutter_ratio) {
    if (n < 3) throw std::invalid_argument("scene needs at least 3 points");
    if (noise_sigma < 0.0) throw std::invalid_argument("negative noise sigma");
    if (clutter_ratio < 0.0 || clutter_ratio >= 1.0)
        throw std::invalid_argument("clutter ratio must be in [0, 1)");

    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(kind)));
    SynthScene scene;
    scene.points.reserve(n);

    switch (kind) {
        case SceneKind::Plane: {
            add_plane_points(scene.points, n, noise_sigma, rng);
            scene.surface = {SurfaceRef::Kind::Plane, {0, 0, 0}, {0, 0, 1}, 0.0};
            break;
        }
        case SceneKind::Line: {
            for (std::size_t i = 0; i < n; ++i) {
                const double u = rng.uniform01();
                const double y = noise_sigma > 0.0 ? noise_sigma * rng.normal() : 0.0;
                const double z = noise_sigma > 0.0 ? noise_sigma * rng.normal() : 0.0;
                scene.points.push_back({u, y, z});
            }
            scene.surface = {SurfaceRef::Kind::Line, {0, 0, 0}, {1, 0, 0}, 0.0};
            break;
        }
        case SceneKind::Ball: {
            const Vec3 center{0.5, 0.5, 0.5};
            const double radius = 0.5;
            for (std::size_t i = 0; i < n; ++i)
                scene.points.push_back(rng.uniform_in_ball(center, radius));
            scene.surface = {SurfaceRef::Kind::Sphere, center, {0, 0, 1}, radius};
            break;
        }
        case SceneKind::NoisyBox: {
            const std::size_t n_volume =
                static_cast<std::size_t>(std::llround(0.10 * static_cast<double>(n)));
            const std::size_t n_shell = n - n_volume;
            for (std::size_t i = 0; i < n_shell; ++i) {
                const int face = static_cast<int>(rng.next_u64() % 6);
                const double u = rng.uniform01();
                const double v = rng.uniform01();
                const double w = noise_sigma > 0.0 ? noise_sigma * rng.normal() : 0.0;
                const int axis = face / 2;
                const double base = (face % 2 == 0) ? 0.0 : 1.0;
                Vec3 p;
                if (axis == 0) p = {base + w, u, v};
                else if (axis == 1) p = {u, base + w, v};
                else p = {u, v, base + w};
                scene.points.push_back(p);
            }
            for (std::size_t i = 0; i < n_volume; ++i)
                scene.points.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
            scene.surface = {SurfaceRef::Kind::BoxShell, {0, 0, 0}, {1, 1, 1}, 0.0};
            break;
        }
        case SceneKind::PlanePlusClutter: {
            const std::size_t n_clutter =
                static_cast<std::size_t>(std::llround(clutter_ratio * static_cast<double>(n)));
            add_plane_points(scene.points, n - n_clutter, noise_sigma, rng);
            const Vec3 blob_center{0.5, 0.5, kClutterHeight};
            for (std::size_t i = 0; i < n_clutter; ++i)
                scene.points.push_back(rng.uniform_in_ball(blob_center, kClutterRadius));
            scene.surface = {SurfaceRef::Kind::Plane, {0, 0, 0}, {0, 0, 1}, 0.0};
            break;
        }
    }
    return scene;
}

}  // namespace enton
