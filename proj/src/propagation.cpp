#include "risemf/propagation.hpp"

#include "risemf/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace risemf {

double wavelength(double frequency_hz) {
  detail::require(std::isfinite(frequency_hz) && frequency_hz > 0.0, "frequency must be positive");
  return kSpeedOfLight / frequency_hz;
}

double fspl(double wavelength_m, double distance_m) {
  detail::require(std::isfinite(wavelength_m) && wavelength_m > 0.0, "wavelength must be positive");
  detail::require(std::isfinite(distance_m) && distance_m > 0.0, "distance must be positive");
  const double ratio = wavelength_m / (4.0 * std::numbers::pi * distance_m);
  return ratio * ratio;
}

double ris_received_power(double p_max_w, double wavelength_m, double d_br_m) {
  detail::require(std::isfinite(p_max_w) && p_max_w >= 0.0, "p_max must be non-negative");
  return p_max_w * fspl(wavelength_m, d_br_m);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double vpm_to_dbv(double vpm) { return 20.0 * std::log10(vpm); }

double dbv_to_vpm(double dbv) { return std::pow(10.0, dbv / 20.0); }

LinkBudget LinkBudget::make(double frequency_hz, double d_br_m, double p_max_w) {
  LinkBudget link;
  link.frequency_hz = frequency_hz;
  link.wavelength_m = wavelength(frequency_hz);
  link.d_br_m = d_br_m;
  link.p_max_w = p_max_w;
  link.p_ris_w = ris_received_power(p_max_w, link.wavelength_m, d_br_m);
  return link;
}

FieldRegions field_regions(int n_per_side, double wavelength_m) {
  detail::require(n_per_side >= 1, "n_per_side must be >= 1");
  detail::require(std::isfinite(wavelength_m) && wavelength_m > 0.0, "wavelength must be positive");
  FieldRegions regions;
  regions.aperture_m = n_per_side * wavelength_m / std::numbers::sqrt2;
  const double d = regions.aperture_m;
  regions.near_bound_m = 0.62 * std::sqrt(d * d * d / wavelength_m);
  regions.far_bound_m = 2.0 * d * d / wavelength_m;
  return regions;
}

double eirp_preset(EirpPreset preset) {
  switch (preset) {
  case EirpPreset::Fcc75dBm: return dbm_to_watts(75.0);
  case EirpPreset::Fr1_47dBm: return dbm_to_watts(47.0);
  case EirpPreset::Fr2_59dBm: return dbm_to_watts(59.0);
  }
  detail::fail(ErrorCode::UnknownPreset, "unknown EIRP preset");
}

EirpPreset parse_eirp_preset(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "fcc" || key == "fcc_75dbm") return EirpPreset::Fcc75dBm;
  if (key == "fr1" || key == "fr1_47dbm") return EirpPreset::Fr1_47dBm;
  if (key == "fr2" || key == "fr2_59dbm") return EirpPreset::Fr2_59dBm;
  detail::fail(ErrorCode::UnknownPreset, "unknown EIRP preset '" + std::string(name) + "'");
}

} // namespace risemf
