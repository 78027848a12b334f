#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enton/model.hpp"

namespace enton {

/// Closed-form reference surface shipped with each synthetic scene. Used by
/// the surface-residual gradient source and as Chamfer ground truth.
struct SurfaceRef {
    enum class Kind { Plane, Line, Sphere, BoxShell };

    Kind kind = Kind::Plane;
    Vec3 origin;      // plane/line origin, sphere center, box min corner
    Vec3 direction;   // plane normal or line direction (unit); box max corner
    double radius = 0.0;  // sphere only

    /// Unsigned distance from p to the surface.
    double distance(const Vec3& p) const;

    std::string to_json() const;
    static SurfaceRef from_json_file(const std::string& path);
    void write_json_file(const std::string& path) const;
};

enum class SceneKind { Plane, Line, Ball, NoisyBox, PlanePlusClutter };

SceneKind scene_kind_from_string(const std::string& name);
std::string to_string(SceneKind kind);

struct SynthScene {
    std::vector<Vec3> points;
    SurfaceRef surface;
};

/// Deterministic synthetic scenes (fixed seed => identical output).
///   Plane            n points on the unit square z = 0, normal noise sigma.
///   Line             n points on the unit segment along x, radial noise sigma.
///   Ball             n points uniform inside the ball r = 0.5 at (.5,.5,.5);
///                    noise does not apply.
///   NoisyBox         90% on the unit-cube shell with normal noise sigma,
///                    10% uniform in the volume.
///   PlanePlusClutter plane as above plus round(clutter_ratio * n) points in
///                    a compact off-surface blob; the clutter count matches
///                    the requested ratio exactly.
SynthScene synth_scene(SceneKind kind, std::size_t n, double noise_sigma,
                       std::uint64_t seed, double clutter_ratio = 0.05);

}  // namespace enton
