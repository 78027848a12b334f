#include "enton/kdtree.hpp"

#include <algorithm>
#include <stdexcept>

namespace enton {

namespace {

constexpr std::uint32_t kLeafSize = 16;

using detail::Candidate;

void heap_offer(std::vector<Candidate>& heap, std::size_t k, Candidate c) {
    if (heap.size() < k) {
        heap.push_back(c);
        std::push_heap(heap.begin(), heap.end());
    } else if (c < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = c;
        std::push_heap(heap.begin(), heap.end());
    }
}

std::vector<Neighbor> heap_to_sorted(std::vector<Candidate> heap) {
    std::sort(heap.begin(), heap.end());
    std::vector<Neighbor> out;
    out.reserve(heap.size());
    for (const auto& c : heap) out.push_back({c.id, std::sqrt(c.d2)});
    return out;
}

}  // namespace

KnnIndex KnnIndex::build(const std::vector<Vec3>& centers) {
    if (centers.empty()) throw std::invalid_argument("empty point set");
    for (const auto& p : centers)
        if (!p.finite()) throw std::invalid_argument("non-finite point in index input");

    KnnIndex index;
    index.points_ = centers;
    index.order_.resize(centers.size());
    for (std::uint32_t i = 0; i < centers.size(); ++i) index.order_[i] = i;
    index.nodes_.reserve(2 * centers.size() / kLeafSize + 2);
    index.root_ = index.build_node(0, static_cast<std::uint32_t>(centers.size()));
    return index;
}

std::int32_t KnnIndex::build_node(std::uint32_t begin, std::uint32_t end) {
    Node node;
    if (end - begin <= kLeafSize) {
        node.begin = begin;
        node.end = end;
        nodes_.push_back(node);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }

    // Split on the axis of largest extent; median by nth_element with the id
    // as tiebreaker keeps construction deterministic for a fixed input order.
    Vec3 lo = points_[order_[begin]];
    Vec3 hi = lo;
    for (std::uint32_t i = begin; i < end; ++i) {
        const Vec3& p = points_[order_[i]];
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const Vec3 extent = hi - lo;
    int axis = 0;
    if (extent.y > extent[axis]) axis = 1;
    if (extent.z > extent[axis]) axis = 2;

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         const double ca = points_[a][axis];
                         const double cb = points_[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });

    node.axis = axis;
    node.split = points_[order_[mid]][axis];
    nodes_.push_back(node);
    const std::int32_t self = static_cast<std::int32_t>(nodes_.size() - 1);
    const std::int32_t left = build_node(begin, mid);
    const std::int32_t right = build_node(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

void KnnIndex::search(std::int32_t node_id, const Vec3& query, std::size_t k,
                      std::size_t exclude, std::vector<Candidate>& heap) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            const std::size_t id = order_[i];
            if (id == exclude) continue;
            heap_offer(heap, k, {dist2(points_[id], query), id});
        }
        return;
    }

    const double delta = query[node.axis] - node.split;
    const std::int32_t near = delta < 0.0 ? node.left : node.right;
    const std::int32_t far = delta < 0.0 ? node.right : node.left;
    search(near, query, k, exclude, heap);
    // Visit the far side on exact equality too: an equidistant point with a
    // lower id must still displace the current worst candidate.
    if (heap.size() < k || delta * delta <= heap.front().d2)
        search(far, query, k, exclude, heap);
}

std::vector<Neighbor> KnnIndex::knn_of_member(std::size_t member_id, std::size_t k) const {
    if (member_id >= points_.size())
        throw std::invalid_argument("member_id out of range");
    if (k == 0) throw std::invalid_argument("k must be positive");
    const std::size_t effective = std::min(k, points_.size() - 1);
    std::vector<Candidate> heap;
    heap.reserve(effective + 1);
    if (effective > 0) search(root_, points_[member_id], effective, member_id, heap);
    return heap_to_sorted(std::move(heap));
}

std::vector<Neighbor> KnnIndex::knn_of_point(const Vec3& query, std::size_t k) const {
    if (k == 0) throw std::invalid_argument("k must be positive");
    const std::size_t effective = std::min(k, points_.size());
    std::vector<Candidate> heap;
    heap.reserve(effective + 1);
    search(root_, query, effective, static_cast<std::size_t>(-1), heap);
    return heap_to_sorted(std::move(heap));
}

std::vector<Neighbor> knn_brute_force(const std::vector<Vec3>& centers,
                                      std::size_t member_id, std::size_t k) {
    if (centers.empty()) throw std::invalid_argument("empty point set");
    if (member_id >= centers.size())
        throw std::invalid_argument("member_id out of range");
    if (k == 0) throw std::invalid_argument("k must be positive");

    std::vector<Candidate> all;
    all.reserve(centers.size() - 1);
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (i == member_id) continue;
        all.push_back({dist2(centers[i], centers[member_id]), i});
    }
    const std::size_t effective = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + effective, all.end());
    all.resize(effective);

    std::vector<Neighbor> out;
    out.reserve(all.size());
    for (const auto& c : all) out.push_back({c.id, std::sqrt(c.d2)});
    return out;
}

std::vector<Neighbor> knn_brute_force_point(const std::vector<Vec3>& centers,
                                            const Vec3& query, std::size_t k) {
    if (centers.empty()) throw std::invalid_argument("empty point set");
    if (k == 0) throw std::invalid_argument("k must be positive");

    std::vector<Candidate> all;
    all.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i)
        all.push_back({dist2(centers[i], query), i});
    const std::size_t effective = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + effective, all.end());
    all.resize(effective);

    std::vector<Neighbor> out;
    out.reserve(all.size());
    for (const auto& c : all) out.push_back({c.id, std::sqrt(c.d2)});
    return out;
}

}  // namespace enton
