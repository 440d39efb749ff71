#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geosat/formula.hpp"
#include "geosat/torus.hpp"

namespace geosat {

struct LabeledPoint {
    Variable label;
    TorusPoint point;
};

enum class Backend { kd_tree, linear_scan };
enum class BackendPolicy { automatic, kd_tree, linear_scan };

/// Under BackendPolicy::automatic, dimensions at or above this use a linear
/// scan; k-d tree pruning stops paying off well before d = 16.
inline constexpr std::uint32_t kLinearScanMinDimension = 16;

[[nodiscard]] Backend resolve_backend(BackendPolicy policy, std::uint32_t dimension) noexcept;

/// A neighbour candidate, ordered by (squared distance, label).
struct Neighbor {
    double distance_squared;
    std::uint32_t label;

    friend constexpr auto operator<=>(const Neighbor&, const Neighbor&) = default;
};

/// Static index answering exact k-nearest-neighbour queries under the
/// toroidal Euclidean metric.
///
/// Results are ordered by (distance ascending, label ascending), so ties at
/// the k-th rank go to the smallest label. Both backends return identical
/// sequences. A built index is immutable and safe to query concurrently.
class SpatialIndex {
public:
    /// Throws std::invalid_argument on an empty set, a dimension mismatch,
    /// or duplicate labels.
    static SpatialIndex build(std::span<const LabeledPoint> points, std::uint32_t dimension,
                              BackendPolicy policy = BackendPolicy::automatic);

    /// Indexes `points` with labels 1..size(), in order.
    static SpatialIndex build(const PointSet& points,
                              BackendPolicy policy = BackendPolicy::automatic);

    [[nodiscard]] Backend backend() const noexcept { return backend_; }
    [[nodiscard]] std::uint32_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }

    /// Throws std::domain_error if k is 0 or exceeds size(), or the query
    /// dimension differs.
    [[nodiscard]] std::vector<Variable> k_nearest(const TorusPoint& query, std::size_t k) const;

    /// Allocation-free variant for generation loops. `query` must hold
    /// dimension() validated coordinates; `out` is overwritten with the k
    /// nearest neighbours in result order.
    void k_nearest(std::span<const double> query, std::size_t k, std::vector<Neighbor>& out) const;

private:
    struct Node {
        std::uint32_t begin;
        std::uint32_t end;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    SpatialIndex(std::uint32_t dimension, Backend backend, std::vector<double> coords,
                 std::vector<std::uint32_t> labels);

    void build_tree();
    std::int32_t build_node(std::uint32_t begin, std::uint32_t end, std::vector<std::uint32_t>& order);
    void search_tree(std::int32_t node, const double* query, std::size_t k,
                     std::vector<Neighbor>& heap) const;
    void scan_range(std::uint32_t begin, std::uint32_t end, const double* query, std::size_t k,
                    std::vector<Neighbor>& heap) const;
    [[nodiscard]] double box_lower_bound(std::int32_t node, const double* query) const noexcept;

    std::uint32_t dimension_;
    Backend backend_;
    std::vector<double> coords_;          // reordered into tree order for the kd backend
    std::vector<std::uint32_t> labels_;   // parallel to coords_
    std::vector<Node> nodes_;
    std::vector<double> boxes_;           // per node: d lower bounds then d upper bounds
};

/// Reference semantics for k_nearest: compute every distance, sort by
/// (distance, label), keep the first k.
[[nodiscard]] std::vector<Variable> brute_force_k_nearest(std::span<const LabeledPoint> points,
                                                          const TorusPoint& query, std::size_t k);

} // namespace geosat
