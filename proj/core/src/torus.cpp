#include "geosat/torus.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace geosat {

namespace {

void check_coordinate(double value)
{
    // The negated comparison also rejects NaN.
    if (!(value >= 0.0 && value < 1.0)) {
        throw std::domain_error(fmt::format("torus coordinate {} outside [0, 1)", value));
    }
}

} // namespace

TorusPoint::TorusPoint(std::vector<double> coords) : coords_{std::move(coords)}
{
    if (coords_.empty()) {
        throw std::domain_error("torus point needs at least one coordinate");
    }
    for (const double c : coords_) {
        check_coordinate(c);
    }
}

double circular_diff(double a, double b)
{
    check_coordinate(a);
    check_coordinate(b);
    return detail::circular_diff_unchecked(a, b);
}

double torus_distance_squared(const TorusPoint& p, const TorusPoint& q)
{
    if (p.dimension() != q.dimension()) {
        throw std::domain_error(
            fmt::format("dimension mismatch: {} vs {}", p.dimension(), q.dimension()));
    }
    return detail::squared_distance_unchecked(p.coords().data(), q.coords().data(), p.dimension());
}

double torus_distance(const TorusPoint& p, const TorusPoint& q)
{
    return std::sqrt(torus_distance_squared(p, q));
}

PointSet::PointSet(std::uint32_t dimension, std::vector<double> coords)
    : dimension_{dimension}, coords_{std::move(coords)}
{
    if (dimension_ == 0 || coords_.size() % dimension_ != 0) {
        throw std::domain_error("point set size is not a multiple of its dimension");
    }
    for (const double c : coords_) {
        check_coordinate(c);
    }
}

TorusPoint PointSet::point(std::size_t i) const
{
    const auto span = (*this)[i];
    return TorusPoint{std::vector<double>(span.begin(), span.end())};
}

} // namespace geosat
