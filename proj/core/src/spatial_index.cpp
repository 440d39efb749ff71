#include "geosat/spatial_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace geosat {

namespace {

constexpr std::uint32_t kLeafSize = 8;

void check_k(std::size_t k, std::size_t size)
{
    if (k == 0 || k > size) {
        throw std::domain_error(fmt::format("k = {} but the index holds {} points", k, size));
    }
}

void offer(std::vector<Neighbor>& heap, std::size_t k, Neighbor candidate)
{
    if (heap.size() < k) {
        heap.push_back(candidate);
        std::push_heap(heap.begin(), heap.end());
    } else if (candidate < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = candidate;
        std::push_heap(heap.begin(), heap.end());
    }
}

} // namespace

Backend resolve_backend(BackendPolicy policy, std::uint32_t dimension) noexcept
{
    switch (policy) {
    case BackendPolicy::kd_tree:
        return Backend::kd_tree;
    case BackendPolicy::linear_scan:
        return Backend::linear_scan;
    case BackendPolicy::automatic:
        break;
    }
    return dimension < kLinearScanMinDimension ? Backend::kd_tree : Backend::linear_scan;
}

SpatialIndex::SpatialIndex(std::uint32_t dimension, Backend backend, std::vector<double> coords,
                           std::vector<std::uint32_t> labels)
    : dimension_{dimension}, backend_{backend}, coords_{std::move(coords)},
      labels_{std::move(labels)}
{
    if (backend_ == Backend::kd_tree) {
        build_tree();
    }
}

SpatialIndex SpatialIndex::build(std::span<const LabeledPoint> points, std::uint32_t dimension,
                                 BackendPolicy policy)
{
    if (points.empty()) {
        throw std::invalid_argument("cannot index an empty point set");
    }
    if (dimension == 0) {
        throw std::invalid_argument("dimension must be at least 1");
    }
    std::vector<double> coords;
    coords.reserve(points.size() * dimension);
    std::vector<std::uint32_t> labels;
    labels.reserve(points.size());
    for (const auto& p : points) {
        if (p.point.dimension() != dimension) {
            throw std::invalid_argument(fmt::format("point {} has dimension {}, index has {}",
                                                    p.label.index(), p.point.dimension(),
                                                    dimension));
        }
        coords.insert(coords.end(), p.point.coords().begin(), p.point.coords().end());
        labels.push_back(p.label.index());
    }
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (const auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
        throw std::invalid_argument(fmt::format("duplicate label {}", *dup));
    }
    return SpatialIndex{dimension, resolve_backend(policy, dimension), std::move(coords),
                        std::move(labels)};
}

SpatialIndex SpatialIndex::build(const PointSet& points, BackendPolicy policy)
{
    if (points.empty()) {
        throw std::invalid_argument("cannot index an empty point set");
    }
    std::vector<std::uint32_t> labels(points.size());
    std::iota(labels.begin(), labels.end(), 1u);
    const auto raw = points.raw();
    return SpatialIndex{points.dimension(), resolve_backend(policy, points.dimension()),
                        std::vector<double>(raw.begin(), raw.end()), std::move(labels)};
}

void SpatialIndex::build_tree()
{
    const auto n = static_cast<std::uint32_t>(labels_.size());
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    nodes_.reserve(2 * (n / kLeafSize + 1));
    boxes_.reserve(nodes_.capacity() * 2 * dimension_);
    build_node(0, n, order);

    // Store points in leaf order so each leaf scans a contiguous block.
    std::vector<double> coords(coords_.size());
    std::vector<std::uint32_t> labels(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::copy_n(coords_.begin() + static_cast<std::ptrdiff_t>(order[i]) * dimension_,
                    dimension_, coords.begin() + static_cast<std::ptrdiff_t>(i) * dimension_);
        labels[i] = labels_[order[i]];
    }
    coords_ = std::move(coords);
    labels_ = std::move(labels);
}

std::int32_t SpatialIndex::build_node(std::uint32_t begin, std::uint32_t end,
                                      std::vector<std::uint32_t>& order)
{
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end});

    const std::size_t box_offset = boxes_.size();
    boxes_.resize(box_offset + 2 * dimension_);
    double* lo = boxes_.data() + box_offset;
    double* hi = lo + dimension_;
    std::fill_n(lo, dimension_, 1.0);
    std::fill_n(hi, dimension_, 0.0);
    for (std::uint32_t i = begin; i < end; ++i) {
        const double* p = coords_.data() + static_cast<std::size_t>(order[i]) * dimension_;
        for (std::uint32_t a = 0; a < dimension_; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }

    if (end - begin <= kLeafSize) {
        return id;
    }
    std::uint32_t axis = 0;
    double widest = -1.0;
    for (std::uint32_t a = 0; a < dimension_; ++a) {
        if (hi[a] - lo[a] > widest) {
            widest = hi[a] - lo[a];
            axis = a;
        }
    }
    if (widest <= 0.0) {
        return id; // all points coincide
    }

    const std::uint32_t mid = begin + (end - begin) / 2;
    const double* coords = coords_.data();
    const std::uint32_t d = dimension_;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [coords, d, axis](std::uint32_t a, std::uint32_t b) {
                         const double ca = coords[static_cast<std::size_t>(a) * d + axis];
                         const double cb = coords[static_cast<std::size_t>(b) * d + axis];
                         return ca < cb || (ca == cb && a < b);
                     });

    const auto left = build_node(begin, mid, order);
    const auto right = build_node(mid, end, order);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
}

double SpatialIndex::box_lower_bound(std::int32_t node, const double* query) const noexcept
{
    // Per axis, the closest point of the arc [lo, hi] to a query outside it
    // is one of the endpoints; the circular differences are monotone in
    // floating point, so this never exceeds a true member distance.
    const double* lo = boxes_.data() + static_cast<std::size_t>(node) * 2 * dimension_;
    const double* hi = lo + dimension_;
    double sum = 0.0;
    for (std::uint32_t a = 0; a < dimension_; ++a) {
        const double q = query[a];
        if (q >= lo[a] && q <= hi[a]) {
            continue;
        }
        const double off = std::min(detail::circular_diff_unchecked(q, lo[a]),
                                    detail::circular_diff_unchecked(q, hi[a]));
        sum += off * off;
    }
    return sum;
}

void SpatialIndex::scan_range(std::uint32_t begin, std::uint32_t end, const double* query,
                              std::size_t k, std::vector<Neighbor>& heap) const
{
    for (std::uint32_t i = begin; i < end; ++i) {
        const double d2 = detail::squared_distance_unchecked(
            coords_.data() + static_cast<std::size_t>(i) * dimension_, query, dimension_);
        if (heap.size() == k && d2 > heap.front().distance_squared) {
            continue;
        }
        offer(heap, k, Neighbor{d2, labels_[i]});
    }
}

void SpatialIndex::search_tree(std::int32_t node_id, const double* query, std::size_t k,
                               std::vector<Neighbor>& heap) const
{
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.left < 0) {
        scan_range(node.begin, node.end, query, k, heap);
        return;
    }
    double bound_left = box_lower_bound(node.left, query);
    double bound_right = box_lower_bound(node.right, query);
    std::int32_t first = node.left;
    std::int32_t second = node.right;
    if (bound_right < bound_left) {
        std::swap(first, second);
        std::swap(bound_left, bound_right);
    }
    // Equal bounds must still be visited: a tie may carry a smaller label.
    if (heap.size() < k || bound_left <= heap.front().distance_squared) {
        search_tree(first, query, k, heap);
    }
    if (heap.size() < k || bound_right <= heap.front().distance_squared) {
        search_tree(second, query, k, heap);
    }
}

void SpatialIndex::k_nearest(std::span<const double> query, std::size_t k,
                             std::vector<Neighbor>& out) const
{
    out.clear();
    out.reserve(k + 1);
    if (backend_ == Backend::kd_tree) {
        search_tree(0, query.data(), k, out);
    } else {
        scan_range(0, static_cast<std::uint32_t>(labels_.size()), query.data(), k, out);
    }
    std::sort_heap(out.begin(), out.end());
}

std::vector<Variable> SpatialIndex::k_nearest(const TorusPoint& query, std::size_t k) const
{
    check_k(k, size());
    if (query.dimension() != dimension_) {
        throw std::domain_error(fmt::format("query has dimension {}, index has {}",
                                            query.dimension(), dimension_));
    }
    std::vector<Neighbor> found;
    k_nearest(query.coords(), k, found);
    std::vector<Variable> result;
    result.reserve(found.size());
    for (const auto& nb : found) {
        result.emplace_back(nb.label);
    }
    return result;
}

std::vector<Variable> brute_force_k_nearest(std::span<const LabeledPoint> points,
                                            const TorusPoint& query, std::size_t k)
{
    check_k(k, points.size());
    std::vector<Neighbor> all;
    all.reserve(points.size());
    for (const auto& p : points) {
        all.push_back(Neighbor{torus_distance_squared(p.point, query), p.label.index()});
    }
    std::sort(all.begin(), all.end());
    std::vector<Variable> result;
    result.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        result.emplace_back(all[i].label);
    }
    return result;
}

} // namespace geosat
