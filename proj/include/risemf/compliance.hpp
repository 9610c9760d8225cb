#pragma once

#include "risemf/efield.hpp"

#include <span>
#include <vector>

namespace risemf {

inline constexpr double kDefaultAreaSide = 10.0;
inline constexpr double kDefaultResolution = 0.05;
inline constexpr int kDefaultSamplesPerDecade = 200;
inline constexpr double kBoresightScanStart = 1e-3;
inline constexpr double kHeightTolerance = 0.01;

enum class ScanKind { Grid, Boresight };

struct FieldPeak {
  Point3 location;
  double e_vpm = 0.0;
};

struct PeakReport {
  std::vector<FieldPeak> peaks; // sorted by distance from the array center
  FieldPeak global_max;
  ScanKind scan_kind = ScanKind::Grid;
};

/// Global maximum and strict 4-neighbour local maxima of a field map.
/// Ties for the global maximum go to the smallest y, then the smallest x.
PeakReport find_grid_peaks(const FieldMap& map);

PeakReport peak_efield(const Scenario& scenario, double area_side_m = kDefaultAreaSide,
                       double resolution_m = kDefaultResolution);

/// Local maxima of a boresight scan (plateaus count once). Maxima closer than
/// one sample step are merged, keeping the larger.
PeakReport find_scan_peaks(std::span<const ScanSample> scan, double h_m);

/// Reflective-mode boresight peaks on a log scan from 1 mm to y_max.
PeakReport boresight_peaks(const Scenario& scenario, double y_max,
                           int samples_per_decade = kDefaultSamplesPerDecade);

enum class PlacementParameter { DBr, HRis };

struct SolverResult {
  PlacementParameter parameter = PlacementParameter::DBr;
  double value_m = 0.0;
  double limit_used_vpm = 0.0;
  double peak_at_value_vpm = 0.0;
  bool converged = false;
};

/// Smallest BS-RIS distance keeping the grid peak at or below limit. Uses the
/// exact 1/d_BR scaling of the field from the scenario's own d_BR.
SolverResult min_dbr(const Scenario& scenario, double limit_vpm,
                     double area_side_m = kDefaultAreaSide,
                     double resolution_m = kDefaultResolution);

struct HeightRange {
  double low_m = 0.0;
  double high_m = 0.0;
};

/// Smallest RIS height in range whose grid peak is at or below limit, to
/// within kHeightTolerance. converged is false when no height in range complies.
SolverResult min_height(const Scenario& scenario, double limit_vpm, HeightRange range,
                        double area_side_m = kDefaultAreaSide,
                        double resolution_m = kDefaultResolution);

/// Assessment-domain evaluation height max(D tan(downtilt), 3.5 m).
double adb_height(double area_side_m, double downtilt_rad);

} // namespace risemf
