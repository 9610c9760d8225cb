#pragma once

#include <string_view>

namespace risemf {

inline constexpr double kSpeedOfLight = 299'792'458.0;

double wavelength(double frequency_hz);

/// Free-space path loss as a linear power ratio, (lambda / (4 pi d))^2.
double fspl(double wavelength_m, double distance_m);

/// Power arriving at the RIS from an isotropic-equivalent source of EIRP p_max.
double ris_received_power(double p_max_w, double wavelength_m, double d_br_m);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double vpm_to_dbv(double vpm);
double dbv_to_vpm(double dbv);

struct LinkBudget {
  double frequency_hz = 0.0;
  double wavelength_m = 0.0;
  double d_br_m = 0.0;
  double p_max_w = 0.0;
  double p_ris_w = 0.0;

  static LinkBudget make(double frequency_hz, double d_br_m, double p_max_w);

  // d_br below lambda / (4 pi): the far-field link formula yields a gain.
  bool near_source() const noexcept { return p_ris_w > p_max_w; }
};

struct FieldRegions {
  double aperture_m = 0.0;
  double near_bound_m = 0.0;
  double far_bound_m = 0.0;
};

/// Reactive/Fresnel and Fresnel/far-field boundaries of an N x N
/// half-wavelength array, with aperture N * lambda / sqrt(2).
FieldRegions field_regions(int n_per_side, double wavelength_m);

enum class EirpPreset { Fcc75dBm, Fr1_47dBm, Fr2_59dBm };

double eirp_preset(EirpPreset preset);

/// Accepts the enum spellings (FCC_75DBM, FR1_47DBM, FR2_59DBM) and the short
/// CLI names (fcc, fr1, fr2), case-insensitive.
EirpPreset parse_eirp_preset(std::string_view name);

} // namespace risemf
