#include "risemf/geometry.hpp"

#include "risemf/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace risemf {

RisArray build_array(int n_per_side, double spacing, double h_ris) {
  detail::require(n_per_side >= 1, "n_per_side must be >= 1, got " + std::to_string(n_per_side));
  detail::require(std::isfinite(spacing) && spacing > 0.0, "spacing must be positive");
  detail::require(std::isfinite(h_ris) && h_ris > 0.0, "h_ris must be positive");

  RisArray array;
  array.n_ = n_per_side;
  array.spacing_ = spacing;
  array.center_ = {0.0, 0.0, h_ris};
  array.elements_.reserve(static_cast<std::size_t>(n_per_side) * n_per_side);
  for (int row = 0; row < n_per_side; ++row) {
    const double h = h_ris + array.axis_offset(row);
    for (int col = 0; col < n_per_side; ++col) {
      array.elements_.push_back({array.axis_offset(col), 0.0, h});
    }
  }
  return array;
}

GeometryToPoint geometry_to_point(const RisArray& array, const Point3& p) {
  detail::require(std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.h),
                  "evaluation point must be finite");
  const auto elements = array.elements();
  GeometryToPoint out;
  out.distances.reserve(elements.size());
  out.elevations.reserve(elements.size());
  out.azimuths.reserve(elements.size());

  for (const Point3& e : elements) {
    const double dx = e.x - p.x;
    const double dy = e.y - p.y;
    const double dh = e.h - p.h;
    const double ground = std::hypot(dx, dy);
    const double r = std::hypot(ground, dh);
    if (r <= kCoincidenceTolerance) {
      detail::fail(ErrorCode::CoincidentPoint, "evaluation point coincides with a RIS element");
    }
    double psi = 0.0;
    if (dy != 0.0) {
      psi = std::atan(dx / dy);
    } else if (dx != 0.0) {
      psi = std::copysign(std::numbers::pi / 2.0, dx);
    }
    out.distances.push_back(r);
    out.elevations.push_back(std::atan2(dh, ground));
    out.azimuths.push_back(psi);
  }
  return out;
}

} // namespace risemf
