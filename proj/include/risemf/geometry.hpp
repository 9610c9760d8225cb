#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace risemf {

// x lateral, y depth (normal to the RIS plane), h height. Meters.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double h = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

inline constexpr double kCoincidenceTolerance = 1e-9;

/// Uniform rectangular array of N x N elements in the vertical plane y = 0,
/// centered on (0, 0, h_ris). Elements are stored row-major with the height
/// index outer and the lateral index inner.
class RisArray {
public:
  int n_per_side() const noexcept { return n_; }
  double spacing() const noexcept { return spacing_; }
  const Point3& center() const noexcept { return center_; }
  std::span<const Point3> elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }

  /// Offset of index i along one axis, in units of spacing: i - (N-1)/2.
  double axis_offset(int i) const noexcept { return (i - 0.5 * (n_ - 1)) * spacing_; }

private:
  friend RisArray build_array(int n_per_side, double spacing, double h_ris);

  int n_ = 0;
  double spacing_ = 0.0;
  Point3 center_;
  std::vector<Point3> elements_;
};

RisArray build_array(int n_per_side, double spacing, double h_ris);

struct GeometryToPoint {
  std::vector<double> distances;
  std::vector<double> elevations;
  std::vector<double> azimuths;
};

/// Per-element distance, elevation and azimuth to p, in element order.
/// Throws CoincidentPoint if p lies within kCoincidenceTolerance of an element.
GeometryToPoint geometry_to_point(const RisArray& array, const Point3& p);

} // namespace risemf
