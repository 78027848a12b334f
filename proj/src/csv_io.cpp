#include "enton/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace enton {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    // shortest representation that round-trips the exact value
    char buf[48];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, result.ptr);
}

namespace {

std::string knn_steps_string(const Schedule& sched) {
    std::ostringstream ss;
    if (sched.knn_steps.size() == 1) {
        ss << "fixed:" << sched.knn_steps.front().k;
        return ss.str();
    }
    ss << "adaptive:";
    for (std::size_t i = 0; i < sched.knn_steps.size(); ++i) {
        if (i > 0) ss << ";";
        ss << sched.knn_steps[i].start_iteration << ":" << sched.knn_steps[i].k;
    }
    return ss.str();
}

}  // namespace

void write_trace_csv(const std::string& path, const std::vector<EventRecord>& trace,
                     const TraceMeta& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace: " + path);

    out << "# enton densification trace\n";
    out << "# tau_low=" << format_double(meta.thresholds.tau_low)
        << " tau_high=" << format_double(meta.thresholds.tau_high)
        << " tau_pos=" << format_double(meta.thresholds.tau_pos)
        << " opacity_min=" << format_double(meta.thresholds.opacity_min) << "\n";
    out << "# pretrain=" << meta.schedule.pretrain_end
        << " period=" << meta.schedule.period
        << " iters=" << meta.schedule.total_iterations
        << " knn=" << knn_steps_string(meta.schedule)
        << " seed=" << meta.seed
        << " grad_source=" << meta.grad_source << "\n";
    out << "t,phase,k,n_before,n_split,n_clone,n_prune_entropy,n_prune_opacity,"
           "n_after,mean_entropy_before,mean_entropy_after\n";
    for (const auto& e : trace) {
        out << e.t << ',' << to_string(e.phase) << ',' << e.k << ',' << e.n_before << ','
            << e.n_split << ',' << e.n_clone << ',' << e.n_prune_entropy << ','
            << e.n_prune_opacity << ',' << e.n_after << ','
            << format_double(e.mean_entropy_before) << ','
            << format_double(e.mean_entropy_after) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_chamfer_csv(const std::string& path, const ChamferReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << "mean_a_to_b,mean_b_to_a,symmetric_mean,inlier_count_a,inlier_count_b,"
           "excluded_count_a,excluded_count_b,mask_radius\n";
    out << format_double(report.mean_a_to_b) << ',' << format_double(report.mean_b_to_a)
        << ',' << format_double(report.symmetric_mean) << ',' << report.inlier_count_a
        << ',' << report.inlier_count_b << ',' << report.excluded_count_a << ','
        << report.excluded_count_b << ',' << format_double(report.mask_radius) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_feature_stats_csv(const std::string& path, std::size_t n, std::size_t k,
                             double mean, double min, double max) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write stats: " + path);
    out << "n,k,mean_eigenentropy,min_eigenentropy,max_eigenentropy\n";
    out << n << ',' << k << ',' << format_double(mean) << ',' << format_double(min) << ','
        << format_double(max) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace enton
