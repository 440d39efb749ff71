#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace geosat {

/// A point on the d-dimensional unit torus, every coordinate in [0, 1).
class TorusPoint {
public:
    /// Throws std::domain_error if a coordinate lies outside [0, 1) or if
    /// `coords` is empty.
    explicit TorusPoint(std::vector<double> coords);

    [[nodiscard]] std::uint32_t dimension() const noexcept
    {
        return static_cast<std::uint32_t>(coords_.size());
    }
    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
    [[nodiscard]] double operator[](std::size_t axis) const { return coords_.at(axis); }

    friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

private:
    std::vector<double> coords_;
};

/// min(|a-b|, 1-|a-b|). Throws std::domain_error unless a, b are in [0, 1).
[[nodiscard]] double circular_diff(double a, double b);

/// Euclidean distance on the torus. Throws std::domain_error on a
/// dimension mismatch.
[[nodiscard]] double torus_distance(const TorusPoint& p, const TorusPoint& q);

/// Squared torus distance; orders pairs exactly like torus_distance and
/// avoids the square root for comparison-only callers.
[[nodiscard]] double torus_distance_squared(const TorusPoint& p, const TorusPoint& q);

namespace detail {

// Hot-path variants for callers that already hold validated coordinates.
[[nodiscard]] inline double circular_diff_unchecked(double a, double b) noexcept
{
    const double diff = a < b ? b - a : a - b;
    const double wrapped = 1.0 - diff;
    return wrapped < diff ? wrapped : diff;
}

[[nodiscard]] inline double squared_distance_unchecked(const double* p, const double* q,
                                                       std::size_t dimension) noexcept
{
    double sum = 0.0;
    for (std::size_t i = 0; i < dimension; ++i) {
        const double c = circular_diff_unchecked(p[i], q[i]);
        sum += c * c;
    }
    return sum;
}

} // namespace detail

/// Flat storage for many points of one dimension; point i occupies
/// coordinates [i*d, (i+1)*d).
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::uint32_t dimension) : dimension_{dimension} {}

    /// Throws std::domain_error on a coordinate outside [0, 1) or a
    /// size that is not a multiple of `dimension`.
    PointSet(std::uint32_t dimension, std::vector<double> coords);

    [[nodiscard]] std::uint32_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] std::size_t size() const noexcept
    {
        return dimension_ == 0 ? 0 : coords_.size() / dimension_;
    }
    [[nodiscard]] bool empty() const noexcept { return size() == 0; }

    [[nodiscard]] std::span<const double> operator[](std::size_t i) const noexcept
    {
        return {coords_.data() + i * dimension_, dimension_};
    }
    [[nodiscard]] TorusPoint point(std::size_t i) const;
    [[nodiscard]] std::span<const double> raw() const noexcept { return coords_; }

    void reserve(std::size_t points) { coords_.reserve(points * dimension_); }
    /// Appends a coordinate without validation; callers sample from [0, 1).
    void push_coordinate(double value) { coords_.push_back(value); }

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    std::uint32_t dimension_ = 0;
    std::vector<double> coords_;
};

} // namespace geosat
