#pragma once

#include "risemf/geometry.hpp"
#include "risemf/propagation.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace risemf {

/// cos^q element power pattern. exponent 0 is an isotropic element.
struct GainPattern {
  double exponent = 3.0;
  bool include_azimuth = false;
};

double element_gain(const GainPattern& pattern, double theta, double psi);

/// Half-power beamwidth in degrees of a cos^q power pattern.
double pattern_hpbw(double exponent);

enum class Mode { Reflective, Beamforming };

inline constexpr double kDefaultEirpW = 31'622.776601683792; // 75 dBm

struct ScenarioParams {
  double frequency_hz = 3.5e9;
  int n_per_side = 8;
  // Element pitch in wavelengths; ignored when spacing_m is set.
  double spacing_fraction = 0.5;
  std::optional<double> spacing_m;
  double h_ris_m = 3.0;
  double user_height_m = 1.5;
  double d_br_m = 20.0;
  double p_max_w = kDefaultEirpW;
  Mode mode = Mode::Reflective;
  std::optional<Point3> target;
  GainPattern pattern;
};

/// Validated deployment: link budget, array and beam configuration.
class Scenario {
public:
  static Scenario make(const ScenarioParams& params);

  const ScenarioParams& params() const noexcept { return params_; }
  const LinkBudget& link() const noexcept { return link_; }
  const RisArray& array() const noexcept { return array_; }
  const GainPattern& pattern() const noexcept { return params_.pattern; }
  Mode mode() const noexcept { return params_.mode; }
  const std::optional<Point3>& target() const noexcept { return params_.target; }
  double user_height() const noexcept { return params_.user_height_m; }

  Scenario with_ris_height(double h_ris_m) const;
  Scenario with_d_br(double d_br_m) const;
  Scenario with_p_max(double p_max_w) const;

private:
  ScenarioParams params_;
  LinkBudget link_;
  RisArray array_;
};

/// Precomputed per-scenario state for repeated field evaluation. The element
/// sum always runs sequentially in element order.
class FieldEngine {
public:
  explicit FieldEngine(const Scenario& scenario);

  /// |E| in V/m at p. Requires p.y > 0.
  double at(const Point3& p) const;

  /// Sum over elements of sqrt(G_n) exp(-j dphi_n) / r_n, without the power prefactor.
  std::complex<double> array_factor(const Point3& p) const;

  double amplitude() const noexcept { return amplitude_; }

private:
  std::vector<Point3> elements_;
  std::vector<double> target_phase_;
  double wavenumber_;
  double amplitude_;
  double quarter_exponent_;
  bool include_azimuth_;
};

double efield_at(const Scenario& scenario, const Point3& p);

/// Beamforming field at the scenario's own target through the phase-free closed form
/// sqrt(60 P_max) lambda/(4 pi d_BR) sum (1 + q_n^2)^(-exponent/4) / r_n.
double bo_closed_form(const Scenario& scenario);

struct FieldMap {
  double area_side_m = 0.0;
  double resolution_m = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  Point3 origin; // location of sample (0, 0): (-(nx-1)/2 * res, res, h_u)
  std::vector<double> samples; // row-major, y index outer
  std::optional<Scenario> scenario;

  double x_at(std::size_t ix) const noexcept {
    return (static_cast<double>(ix) - 0.5 * static_cast<double>(nx - 1)) * resolution_m;
  }
  double y_at(std::size_t iy) const noexcept { return static_cast<double>(iy + 1) * resolution_m; }
  Point3 location(std::size_t ix, std::size_t iy) const noexcept { return {x_at(ix), y_at(iy), origin.h}; }
  double at(std::size_t ix, std::size_t iy) const noexcept { return samples[iy * nx + ix]; }
};

/// Number of lattice points per axis for an evaluation square of side area_side.
std::size_t grid_points(double area_side_m, double resolution_m);

FieldMap field_map(const Scenario& scenario, double area_side_m, double resolution_m);

struct ScanSample {
  double y_m = 0.0;
  double e_vpm = 0.0;
};

/// Log-spaced samples along the boresight ray (0, y, h_ris), y in [y_min, y_max].
std::vector<ScanSample> boresight_scan(const Scenario& scenario, double y_min, double y_max,
                                       int samples_per_decade);

/// Worker count for point-parallel evaluation; RIS_EMF_THREADS caps it (0 = auto).
std::size_t evaluation_threads();

} // namespace risemf
