#include "enton/model.hpp"

#include <cmath>
#include <string>

namespace enton {

namespace {

std::string at(std::size_t i) { return "gaussian " + std::to_string(i) + ": "; }

}  // namespace

std::vector<Violation> validate_set(const GaussianSet& set) {
    std::vector<Violation> out;
    const std::size_t n = set.size();

    if (set.grad_accum.size() != n)
        out.push_back({-1, "grad_accum length does not match gaussian count"});
    if (set.grad_count.size() != n)
        out.push_back({-1, "grad_count length does not match gaussian count"});

    for (std::size_t i = 0; i < n; ++i) {
        const Gaussian& g = set.gaussians[i];
        const long long idx = static_cast<long long>(i);
        if (!g.center.finite())
            out.push_back({idx, at(i) + "center not finite"});
        if (!g.scale.finite())
            out.push_back({idx, at(i) + "scale not finite"});
        else if (g.scale.x <= 0.0 || g.scale.y <= 0.0 || g.scale.z <= 0.0)
            out.push_back({idx, at(i) + "scale non-positive"});
        const double qn = g.rotation.norm();
        if (!std::isfinite(qn) || std::abs(qn - 1.0) > 1e-6)
            out.push_back({idx, at(i) + "quaternion not unit"});
        if (!std::isfinite(g.opacity) || g.opacity < 0.0 || g.opacity > 1.0)
            out.push_back({idx, at(i) + "opacity outside [0, 1]"});
    }

    const std::size_t stats = std::min({set.grad_accum.size(), set.grad_count.size(), n});
    for (std::size_t i = 0; i < stats; ++i) {
        const long long idx = static_cast<long long>(i);
        const double a = set.grad_accum[i];
        const long long c = set.grad_count[i];
        if (!std::isfinite(a) || a < 0.0)
            out.push_back({idx, at(i) + "grad_accum negative or not finite"});
        if (c < 0)
            out.push_back({idx, at(i) + "grad_count negative"});
        if (c == 0 && a != 0.0)
            out.push_back({idx, at(i) + "grad_accum nonzero with zero count"});
    }
    return out;
}

}  // namespace enton
