#include "risemf/compliance.hpp"

#include "risemf/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace risemf {

namespace {

constexpr int kCoarseHeightSamples = 11;

double distance(const Point3& a, const Point3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.h - b.h) * (a.h - b.h));
}

void sort_by_distance(std::vector<FieldPeak>& peaks, const Point3& center) {
  std::stable_sort(peaks.begin(), peaks.end(), [&](const FieldPeak& a, const FieldPeak& b) {
    const double da = distance(a.location, center);
    const double db = distance(b.location, center);
    if (da != db) return da < db;
    if (a.location.y != b.location.y) return a.location.y < b.location.y;
    return a.location.x < b.location.x;
  });
}

double grid_peak(const Scenario& scenario, double area_side_m, double resolution_m) {
  return peak_efield(scenario, area_side_m, resolution_m).global_max.e_vpm;
}

} // namespace

PeakReport find_grid_peaks(const FieldMap& map) {
  PeakReport report;
  report.scan_kind = ScanKind::Grid;
  bool have_max = false;
  for (std::size_t iy = 0; iy < map.ny; ++iy) {
    for (std::size_t ix = 0; ix < map.nx; ++ix) {
      const double e = map.at(ix, iy);
      if (!have_max || e > report.global_max.e_vpm) {
        report.global_max = {map.location(ix, iy), e};
        have_max = true;
      }
      const bool local = (ix == 0 || e > map.at(ix - 1, iy)) &&
                         (ix + 1 == map.nx || e > map.at(ix + 1, iy)) &&
                         (iy == 0 || e > map.at(ix, iy - 1)) &&
                         (iy + 1 == map.ny || e > map.at(ix, iy + 1));
      if (local) report.peaks.push_back({map.location(ix, iy), e});
    }
  }
  const Point3 center = map.scenario ? map.scenario->array().center() : Point3{};
  sort_by_distance(report.peaks, center);
  return report;
}

PeakReport peak_efield(const Scenario& scenario, double area_side_m, double resolution_m) {
  return find_grid_peaks(field_map(scenario, area_side_m, resolution_m));
}

PeakReport find_scan_peaks(std::span<const ScanSample> scan, double h_m) {
  PeakReport report;
  report.scan_kind = ScanKind::Boresight;
  if (scan.empty()) return report;

  std::vector<std::size_t> maxima;
  std::size_t best = 0;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (scan[i].e_vpm > scan[best].e_vpm) best = i;
  }
  for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
    if (!(scan[i].e_vpm > scan[i - 1].e_vpm)) continue;
    std::size_t j = i;
    while (j + 1 < scan.size() && scan[j + 1].e_vpm == scan[i].e_vpm) ++j;
    if (j + 1 < scan.size() && scan[j + 1].e_vpm < scan[i].e_vpm) maxima.push_back(i);
    i = j;
  }

  std::vector<std::size_t> merged;
  for (std::size_t idx : maxima) {
    if (!merged.empty() && idx - merged.back() <= 1) {
      if (scan[idx].e_vpm > scan[merged.back()].e_vpm) merged.back() = idx;
      continue;
    }
    merged.push_back(idx);
  }

  for (std::size_t idx : merged) report.peaks.push_back({{0.0, scan[idx].y_m, h_m}, scan[idx].e_vpm});
  report.global_max = {{0.0, scan[best].y_m, h_m}, scan[best].e_vpm};
  return report;
}

PeakReport boresight_peaks(const Scenario& scenario, double y_max, int samples_per_decade) {
  detail::require(scenario.mode() == Mode::Reflective, "boresight peaks require reflective mode");
  detail::require(samples_per_decade >= kDefaultSamplesPerDecade,
                  "boresight peaks need at least 200 samples per decade");
  const auto scan = boresight_scan(scenario, kBoresightScanStart, y_max, samples_per_decade);
  return find_scan_peaks(scan, scenario.array().center().h);
}

SolverResult min_dbr(const Scenario& scenario, double limit_vpm, double area_side_m,
                     double resolution_m) {
  detail::require(std::isfinite(limit_vpm) && limit_vpm > 0.0, "limit must be positive");
  SolverResult result;
  result.parameter = PlacementParameter::DBr;
  result.limit_used_vpm = limit_vpm;

  const double d_ref = scenario.link().d_br_m;
  const double peak_ref = grid_peak(scenario, area_side_m, resolution_m);
  if (peak_ref == 0.0) {
    // No radiated power: any distance complies.
    result.value_m = 0.0;
    result.converged = true;
    return result;
  }
  result.value_m = d_ref * peak_ref / limit_vpm;
  result.peak_at_value_vpm = grid_peak(scenario.with_d_br(result.value_m), area_side_m, resolution_m);
  result.converged = result.peak_at_value_vpm <= limit_vpm * (1.0 + 1e-9);
  return result;
}

SolverResult min_height(const Scenario& scenario, double limit_vpm, HeightRange range,
                        double area_side_m, double resolution_m) {
  detail::require(std::isfinite(limit_vpm) && limit_vpm > 0.0, "limit must be positive");
  detail::require(std::isfinite(range.low_m) && std::isfinite(range.high_m) && range.low_m < range.high_m,
                  "height range must be ascending");
  detail::require(range.low_m >= scenario.user_height(), "height range must start at or above the user height");

  SolverResult result;
  result.parameter = PlacementParameter::HRis;
  result.limit_used_vpm = limit_vpm;
  auto peak_at = [&](double h) { return grid_peak(scenario.with_ris_height(h), area_side_m, resolution_m); };
  auto accept = [&](double h, double peak) {
    result.value_m = h;
    result.peak_at_value_vpm = peak;
    result.converged = true;
    return result;
  };

  std::vector<double> heights(kCoarseHeightSamples);
  std::vector<double> peaks(kCoarseHeightSamples);
  for (int i = 0; i < kCoarseHeightSamples; ++i) {
    heights[i] = range.low_m + (range.high_m - range.low_m) * i / (kCoarseHeightSamples - 1);
    peaks[i] = peak_at(heights[i]);
  }
  if (peaks.front() <= limit_vpm) return accept(heights.front(), peaks.front());

  const bool monotone = std::is_sorted(peaks.rbegin(), peaks.rend());
  if (monotone) {
    const auto first = std::find_if(peaks.begin(), peaks.end(), [&](double p) { return p <= limit_vpm; });
    if (first == peaks.end()) {
      result.value_m = heights.back();
      result.peak_at_value_vpm = peaks.back();
      result.converged = false;
      return result;
    }
    const auto i = static_cast<std::size_t>(first - peaks.begin());
    double lo = heights[i - 1];
    double hi = heights[i];
    double hi_peak = peaks[i];
    while (hi - lo > kHeightTolerance) {
      const double mid = 0.5 * (lo + hi);
      const double p = peak_at(mid);
      if (p <= limit_vpm) {
        hi = mid;
        hi_peak = p;
      } else {
        lo = mid;
      }
    }
    return accept(hi, hi_peak);
  }

  // Non-monotone peak profile: walk up in tolerance-sized steps.
  const auto steps = static_cast<int>(std::ceil((range.high_m - range.low_m) / kHeightTolerance));
  for (int s = 1; s <= steps; ++s) {
    const double h = std::min(range.high_m, range.low_m + s * kHeightTolerance);
    const double p = peak_at(h);
    if (p <= limit_vpm) return accept(h, p);
  }
  result.value_m = range.high_m;
  result.peak_at_value_vpm = peaks.back();
  result.converged = false;
  return result;
}

double adb_height(double area_side_m, double downtilt_rad) {
  detail::require(std::isfinite(area_side_m) && area_side_m > 0.0, "area side must be positive");
  detail::require(downtilt_rad >= 0.0 && downtilt_rad < std::numbers::pi / 2.0,
                  "downtilt must be in [0, pi/2)");
  return std::max(area_side_m * std::tan(downtilt_rad), 3.5);
}

} // namespace risemf
