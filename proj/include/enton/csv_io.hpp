#pragma once

#include <string>
#include <vector>

#include "enton/densify.hpp"
#include "enton/metrics.hpp"

namespace enton {

/// %.17g double formatting: deterministic bytes, exact value round-trip.
std::string format_double(double v);

struct TraceMeta {
    Thresholds thresholds;
    Schedule schedule;
    std::uint64_t seed = 0;
    std::string grad_source;
};

/// Trace CSV with the run parameters echoed as '#' header comments followed
/// by the fixed column row:
/// t,phase,k,n_before,n_split,n_clone,n_prune_entropy,n_prune_opacity,
/// n_after,mean_entropy_before,mean_entropy_after
void write_trace_csv(const std::string& path, const std::vector<EventRecord>& trace,
                     const TraceMeta& meta);

void write_chamfer_csv(const std::string& path, const ChamferReport& report);

void write_feature_stats_csv(const std::string& path, std::size_t n, std::size_t k,
                             double mean, double min, double max);

}  // namespace enton
