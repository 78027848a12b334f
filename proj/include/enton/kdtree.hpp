#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "enton/model.hpp"

namespace enton {

struct Neighbor {
    std::size_t id;
    double distance;  // exact Euclidean
};

namespace detail {
// Search candidates carry squared distance; (d2, id) ordering implements the
// lower-id tiebreak.
struct Candidate {
    double d2;
    std::size_t id;
    bool operator<(const Candidate& o) const {
        return d2 < o.d2 || (d2 == o.d2 && id < o.id);
    }
};
}  // namespace detail

/// Balanced kd-tree over a frozen snapshot of point centers. Queries are
/// exact; ties in distance are broken by lower point id so results are
/// deterministic on gridded scenes. After any mutation of the source set the
/// caller must rebuild the index.
///
/// Construction is single-threaded; queries are read-only and safe to issue
/// from many threads concurrently.
class KnnIndex {
public:
    /// Throws std::invalid_argument on an empty or non-finite input.
    static KnnIndex build(const std::vector<Vec3>& centers);

    std::size_t size() const { return points_.size(); }

    /// k nearest neighbors of member point `member_id`, excluding the member
    /// itself. Returns min(k, size()-1) neighbors sorted by (distance, id).
    std::vector<Neighbor> knn_of_member(std::size_t member_id, std::size_t k) const;

    /// k nearest neighbors of an arbitrary query point (no exclusion).
    /// Returns min(k, size()) neighbors sorted by (distance, id).
    std::vector<Neighbor> knn_of_point(const Vec3& query, std::size_t k) const;

    const Vec3& point(std::size_t id) const { return points_[id]; }

private:
    struct Node {
        int axis = -1;            // -1 marks a leaf
        double split = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t begin = 0;  // leaf range into order_
        std::uint32_t end = 0;
    };

    KnnIndex() = default;
    std::int32_t build_node(std::uint32_t begin, std::uint32_t end);
    void search(std::int32_t node, const Vec3& query, std::size_t k,
                std::size_t exclude, std::vector<detail::Candidate>& heap) const;

    std::vector<Vec3> points_;        // by original id
    std::vector<std::uint32_t> order_;  // permutation referenced by leaves
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

/// Exact brute-force oracle with the same contract as knn_of_member.
std::vector<Neighbor> knn_brute_force(const std::vector<Vec3>& centers,
                                      std::size_t member_id, std::size_t k);

/// Brute-force nearest neighbors of an external query point.
std::vector<Neighbor> knn_brute_force_point(const std::vector<Vec3>& centers,
                                            const Vec3& query, std::size_t k);

}  // namespace enton
