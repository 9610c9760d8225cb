#include "risemf/efield.hpp"

#include "parallel.hpp"
#include "risemf/error.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

namespace risemf {

namespace {

constexpr double kPi = std::numbers::pi;

void validate(const ScenarioParams& p) {
  using detail::require;
  require(std::isfinite(p.frequency_hz) && p.frequency_hz > 0.0, "frequency must be positive");
  require(p.n_per_side >= 1, "n_per_side must be >= 1");
  require(std::isfinite(p.h_ris_m) && p.h_ris_m > 0.0, "h_ris must be positive");
  require(std::isfinite(p.user_height_m) && p.user_height_m >= 0.0, "user_height must be >= 0");
  require(std::isfinite(p.d_br_m) && p.d_br_m > 0.0, "d_br must be positive");
  require(std::isfinite(p.p_max_w) && p.p_max_w >= 0.0, "p_max must be >= 0");
  require(std::isfinite(p.pattern.exponent) && p.pattern.exponent >= 0.0,
          "pattern exponent must be >= 0");
  if (p.spacing_m) {
    require(std::isfinite(*p.spacing_m) && *p.spacing_m > 0.0, "spacing must be positive");
  } else {
    require(std::isfinite(p.spacing_fraction) && p.spacing_fraction > 0.0,
            "spacing fraction must be positive");
  }
  if (p.mode == Mode::Beamforming) {
    require(p.target.has_value(), "beamforming mode requires a target");
    const Point3& t = *p.target;
    require(std::isfinite(t.x) && std::isfinite(t.y) && std::isfinite(t.h), "target must be finite");
    require(t.y > 0.0, "target must lie in front of the RIS (y > 0)");
  } else {
    require(!p.target.has_value(), "reflective mode takes no target");
  }
}

void require_front(const Point3& p) {
  if (!(p.y > 0.0)) {
    detail::fail(ErrorCode::BehindPlane, "evaluation point must lie in front of the RIS (y > 0)");
  }
}

} // namespace

double element_gain(const GainPattern& pattern, double theta, double psi) {
  auto lobe = [&](double angle) {
    // Grazing and rear angles get no gain.
    if (!(std::abs(angle) < kPi / 2.0)) return 0.0;
    const double c = std::cos(angle);
    return pattern.exponent == 0.0 ? 1.0 : std::pow(c, pattern.exponent);
  };
  double gain = lobe(theta);
  if (pattern.include_azimuth) gain *= lobe(psi);
  return gain;
}

double pattern_hpbw(double exponent) {
  detail::require(std::isfinite(exponent) && exponent > 0.0, "pattern exponent must be positive");
  return 2.0 * std::acos(std::pow(2.0, -1.0 / exponent)) * 180.0 / kPi;
}

Scenario Scenario::make(const ScenarioParams& params) {
  validate(params);
  Scenario s;
  s.params_ = params;
  s.link_ = LinkBudget::make(params.frequency_hz, params.d_br_m, params.p_max_w);
  const double spacing = params.spacing_m.value_or(params.spacing_fraction * s.link_.wavelength_m);
  s.array_ = build_array(params.n_per_side, spacing, params.h_ris_m);
  return s;
}

Scenario Scenario::with_ris_height(double h_ris_m) const {
  ScenarioParams p = params_;
  p.h_ris_m = h_ris_m;
  return make(p);
}

Scenario Scenario::with_d_br(double d_br_m) const {
  ScenarioParams p = params_;
  p.d_br_m = d_br_m;
  return make(p);
}

Scenario Scenario::with_p_max(double p_max_w) const {
  ScenarioParams p = params_;
  p.p_max_w = p_max_w;
  return make(p);
}

FieldEngine::FieldEngine(const Scenario& scenario)
    : elements_(scenario.array().elements().begin(), scenario.array().elements().end()),
      wavenumber_(2.0 * kPi / scenario.link().wavelength_m),
      amplitude_(std::sqrt(60.0 * scenario.link().p_ris_w)),
      quarter_exponent_(scenario.pattern().exponent / 4.0),
      include_azimuth_(scenario.pattern().include_azimuth) {
  target_phase_.assign(elements_.size(), 0.0);
  if (scenario.mode() == Mode::Beamforming) {
    const Point3& t = *scenario.target();
    for (std::size_t n = 0; n < elements_.size(); ++n) {
      const double dx = elements_[n].x - t.x;
      const double dy = elements_[n].y - t.y;
      const double dh = elements_[n].h - t.h;
      target_phase_[n] = wavenumber_ * std::sqrt(dx * dx + dy * dy + dh * dh);
    }
  }
}

std::complex<double> FieldEngine::array_factor(const Point3& p) const {
  require_front(p);
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < elements_.size(); ++n) {
    const double dx = elements_[n].x - p.x;
    const double dy = elements_[n].y - p.y;
    const double dh = elements_[n].h - p.h;
    const double ground2 = dx * dx + dy * dy;
    const double r = std::sqrt(ground2 + dh * dh);
    if (r <= kCoincidenceTolerance) {
      detail::fail(ErrorCode::CoincidentPoint, "evaluation point coincides with a RIS element");
    }
    // sqrt(G) = cos(theta)^(q/2) with cos(theta) = ground / r.
    double weight = 1.0 / r;
    if (quarter_exponent_ != 0.0) {
      weight *= std::pow(ground2 / (r * r), quarter_exponent_);
      if (include_azimuth_) weight *= std::pow(dy * dy / ground2, quarter_exponent_);
    }
    const double phase = wavenumber_ * r - target_phase_[n];
    re += weight * std::cos(phase);
    im -= weight * std::sin(phase);
  }
  return {re, im};
}

double FieldEngine::at(const Point3& p) const { return amplitude_ * std::abs(array_factor(p)); }

double efield_at(const Scenario& scenario, const Point3& p) { return FieldEngine(scenario).at(p); }

double bo_closed_form(const Scenario& scenario) {
  detail::require(scenario.mode() == Mode::Beamforming && scenario.target().has_value(),
                  "closed form applies to beamforming scenarios");
  const Point3& t = *scenario.target();
  const LinkBudget& link = scenario.link();
  const double q4 = scenario.pattern().exponent / 4.0;
  double sum = 0.0;
  for (const Point3& e : scenario.array().elements()) {
    const double dx = e.x - t.x;
    const double dy = e.y - t.y;
    const double dh = e.h - t.h;
    const double r = std::sqrt(dx * dx + dy * dy + dh * dh);
    const double slope = dh / std::sqrt(r * r - dh * dh);
    double term = std::pow(1.0 + slope * slope, -q4);
    if (scenario.pattern().include_azimuth) {
      const double lateral = dx / dy;
      term *= std::pow(1.0 + lateral * lateral, -q4);
    }
    sum += term / r;
  }
  return std::sqrt(60.0 * link.p_max_w) * link.wavelength_m / (4.0 * kPi * link.d_br_m) * sum;
}

std::size_t evaluation_threads() {
  std::size_t cap = 0;
  if (const char* env = std::getenv("RIS_EMF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) cap = static_cast<std::size_t>(v);
  }
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  return cap == 0 ? hw : cap;
}

std::size_t grid_points(double area_side_m, double resolution_m) {
  detail::require(std::isfinite(area_side_m) && area_side_m > 0.0, "area side must be positive");
  detail::require(std::isfinite(resolution_m) && resolution_m > 0.0 && resolution_m <= area_side_m,
                  "resolution must be in (0, area side]");
  // Tolerate D/res landing a hair under an integer.
  return static_cast<std::size_t>(std::floor(area_side_m / resolution_m + 1e-9)) + 1;
}

FieldMap field_map(const Scenario& scenario, double area_side_m, double resolution_m) {
  FieldMap map;
  map.area_side_m = area_side_m;
  map.resolution_m = resolution_m;
  map.nx = map.ny = grid_points(area_side_m, resolution_m);
  map.origin = {map.x_at(0), map.y_at(0), scenario.user_height()};
  map.scenario = scenario;
  map.samples.assign(map.nx * map.ny, 0.0);

  const FieldEngine engine(scenario);
  detail::parallel_for(map.ny, evaluation_threads(), [&](std::size_t iy) {
    for (std::size_t ix = 0; ix < map.nx; ++ix) {
      map.samples[iy * map.nx + ix] = engine.at(map.location(ix, iy));
    }
  });
  return map;
}

std::vector<ScanSample> boresight_scan(const Scenario& scenario, double y_min, double y_max,
                                       int samples_per_decade) {
  detail::require(std::isfinite(y_min) && y_min > 0.0, "y_min must be positive");
  detail::require(std::isfinite(y_max) && y_max > y_min, "y_max must exceed y_min");
  detail::require(samples_per_decade >= 1, "samples_per_decade must be >= 1");

  const double decades = std::log10(y_max / y_min);
  const auto steps = static_cast<std::size_t>(std::ceil(decades * samples_per_decade - 1e-9));
  std::vector<ScanSample> scan(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double y = y_min * std::pow(10.0, static_cast<double>(k) / samples_per_decade);
    scan[k].y_m = k == steps ? y_max : std::min(y, y_max);
  }

  const FieldEngine engine(scenario);
  const double h = scenario.array().center().h;
  detail::parallel_for(scan.size(), evaluation_threads(), [&](std::size_t k) {
    scan[k].e_vpm = engine.at({0.0, scan[k].y_m, h});
  });
  return scan;
}

} // namespace risemf
