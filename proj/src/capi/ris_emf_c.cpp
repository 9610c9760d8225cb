#include "ris_emf.h"

#include "risemf/risemf.hpp"

#include <exception>
#include <iterator>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>

struct ris_scenario {
  risemf::Scenario value;
};

struct ris_field_map {
  risemf::FieldMap value;
};

struct ris_scan {
  std::vector<double> y;
  std::vector<double> e;
};

struct ris_peak_report {
  risemf::PeakReport value;
};

struct ris_limits {
  risemf::RegulatoryDatabase value;
};

namespace {

thread_local std::string g_last_error;

ris_status to_status(risemf::ErrorCode code) {
  using risemf::ErrorCode;
  switch (code) {
  case ErrorCode::InvalidArgument: return RIS_ERR_INVALID_ARGUMENT;
  case ErrorCode::CoincidentPoint: return RIS_ERR_COINCIDENT_POINT;
  case ErrorCode::BehindPlane: return RIS_ERR_BEHIND_PLANE;
  case ErrorCode::NoLimitDefined: return RIS_ERR_NO_LIMIT;
  case ErrorCode::UnknownPreset: return RIS_ERR_UNKNOWN_PRESET;
  case ErrorCode::Infeasible: return RIS_ERR_INFEASIBLE;
  case ErrorCode::Parse: return RIS_ERR_PARSE;
  }
  return RIS_ERR_INTERNAL;
}

ris_status set_error(ris_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename Fn>
ris_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const risemf::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RIS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RIS_ERR_INTERNAL, e.what());
  }
}

ris_status null_argument(const char* name) {
  return set_error(RIS_ERR_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
}

risemf::Point3 to_point(ris_point p) { return {p.x, p.y, p.h}; }

ris_point from_point(const risemf::Point3& p) { return {p.x, p.y, p.h}; }

ris_solver_result from_result(const risemf::SolverResult& r) {
  ris_solver_result out{};
  out.parameter = r.parameter == risemf::PlacementParameter::DBr ? RIS_PARAM_D_BR : RIS_PARAM_H_RIS;
  out.value_m = r.value_m;
  out.limit_used_vpm = r.limit_used_vpm;
  out.peak_at_value_vpm = r.peak_at_value_vpm;
  out.converged = r.converged ? 1 : 0;
  return out;
}

const risemf::RegulatoryDatabase& table(const ris_limits* limits) {
  return limits ? limits->value : risemf::RegulatoryDatabase::builtin();
}

constexpr const char* kAuthorityNames[] = {"ITU", "WHO", "ICNIRP", "USA", "FLANDERS", "CHINA"};

} // namespace

extern "C" {

const char* ris_version(void) { return "1.0.0"; }

const char* ris_status_string(ris_status status) {
  switch (status) {
  case RIS_OK: return "ok";
  case RIS_ERR_INVALID_ARGUMENT: return "invalid argument";
  case RIS_ERR_COINCIDENT_POINT: return "coincident point";
  case RIS_ERR_BEHIND_PLANE: return "behind RIS plane";
  case RIS_ERR_NO_LIMIT: return "no limit defined";
  case RIS_ERR_UNKNOWN_PRESET: return "unknown preset";
  case RIS_ERR_INFEASIBLE: return "infeasible";
  case RIS_ERR_PARSE: return "parse error";
  case RIS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ris_last_error(void) { return g_last_error.c_str(); }

// ---------------------------------------------------------------------------
// Scenario

void ris_scenario_desc_init(ris_scenario_desc* desc) {
  if (!desc) return;
  const risemf::ScenarioParams defaults;
  *desc = ris_scenario_desc{};
  desc->frequency_hz = defaults.frequency_hz;
  desc->n_per_side = defaults.n_per_side;
  desc->spacing_fraction = defaults.spacing_fraction;
  desc->spacing_m = 0.0;
  desc->h_ris_m = defaults.h_ris_m;
  desc->user_height_m = defaults.user_height_m;
  desc->d_br_m = defaults.d_br_m;
  desc->p_max_w = defaults.p_max_w;
  desc->mode = RIS_MODE_RO;
  desc->has_target = 0;
  desc->pattern_exponent = defaults.pattern.exponent;
  desc->include_azimuth = 0;
}

ris_status ris_scenario_create(const ris_scenario_desc* desc, ris_scenario** out) {
  if (!desc) return null_argument("desc");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    risemf::ScenarioParams p;
    p.frequency_hz = desc->frequency_hz;
    p.n_per_side = desc->n_per_side;
    p.spacing_fraction = desc->spacing_fraction;
    if (desc->spacing_m > 0.0) p.spacing_m = desc->spacing_m;
    p.h_ris_m = desc->h_ris_m;
    p.user_height_m = desc->user_height_m;
    p.d_br_m = desc->d_br_m;
    p.p_max_w = desc->p_max_w;
    if (desc->mode != RIS_MODE_RO && desc->mode != RIS_MODE_BO) {
      return set_error(RIS_ERR_INVALID_ARGUMENT, "mode must be RO or BO");
    }
    p.mode = desc->mode == RIS_MODE_BO ? risemf::Mode::Beamforming : risemf::Mode::Reflective;
    if (desc->has_target) p.target = to_point(desc->target);
    p.pattern.exponent = desc->pattern_exponent;
    p.pattern.include_azimuth = desc->include_azimuth != 0;
    *out = new ris_scenario{risemf::Scenario::make(p)};
    return RIS_OK;
  });
}

void ris_scenario_destroy(ris_scenario* scenario) { delete scenario; }

ris_status ris_scenario_link(const ris_scenario* scenario, ris_link_budget* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  const risemf::LinkBudget& link = scenario->value.link();
  out->frequency_hz = link.frequency_hz;
  out->wavelength_m = link.wavelength_m;
  out->d_br_m = link.d_br_m;
  out->p_max_w = link.p_max_w;
  out->p_ris_w = link.p_ris_w;
  out->spacing_m = scenario->value.array().spacing();
  out->near_source = link.near_source() ? 1 : 0;
  return RIS_OK;
}

// ---------------------------------------------------------------------------
// Field evaluation

ris_status ris_efield_at(const ris_scenario* scenario, ris_point p, double* out_vpm) {
  if (!scenario) return null_argument("scenario");
  if (!out_vpm) return null_argument("out_vpm");
  return guarded([&] {
    *out_vpm = risemf::efield_at(scenario->value, to_point(p));
    return RIS_OK;
  });
}

ris_status ris_bo_closed_form(const ris_scenario* scenario, double* out_vpm) {
  if (!scenario) return null_argument("scenario");
  if (!out_vpm) return null_argument("out_vpm");
  return guarded([&] {
    *out_vpm = risemf::bo_closed_form(scenario->value);
    return RIS_OK;
  });
}

ris_status ris_oracle_efield(const ris_scenario* scenario, ris_point p, ris_phasor* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    const risemf::PhasorSum sum = risemf::oracle_efield(scenario->value, to_point(p));
    *out = {sum.real_part, sum.imag_part, sum.magnitude};
    return RIS_OK;
  });
}

ris_status ris_verify(const ris_scenario* scenario, uint64_t seed, size_t cases, double area_side_m,
                      ris_verification* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto report = risemf::verify_against_oracle(scenario->value, seed, cases, area_side_m);
    out->cases = report.cases;
    out->max_relative_difference = report.max_relative_difference;
    out->worst_point = from_point(report.worst_point);
    out->worst_engine_vpm = report.worst_engine_vpm;
    out->worst_oracle_vpm = report.worst_oracle_vpm;
    return RIS_OK;
  });
}

ris_status ris_field_map_create(const ris_scenario* scenario, double area_side_m, double resolution_m,
                                ris_field_map** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ris_field_map{risemf::field_map(scenario->value, area_side_m, resolution_m)};
    return RIS_OK;
  });
}

void ris_field_map_destroy(ris_field_map* map) { delete map; }

size_t ris_field_map_nx(const ris_field_map* map) { return map ? map->value.nx : 0; }

size_t ris_field_map_ny(const ris_field_map* map) { return map ? map->value.ny : 0; }

double ris_field_map_x(const ris_field_map* map, size_t ix) { return map ? map->value.x_at(ix) : 0.0; }

double ris_field_map_y(const ris_field_map* map, size_t iy) { return map ? map->value.y_at(iy) : 0.0; }

double ris_field_map_height(const ris_field_map* map) { return map ? map->value.origin.h : 0.0; }

const double* ris_field_map_samples(const ris_field_map* map) {
  return map ? map->value.samples.data() : nullptr;
}

ris_status ris_boresight_scan_create(const ris_scenario* scenario, double y_min, double y_max,
                                     int samples_per_decade, ris_scan** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const auto samples = risemf::boresight_scan(scenario->value, y_min, y_max, samples_per_decade);
    auto scan = std::make_unique<ris_scan>();
    scan->y.reserve(samples.size());
    scan->e.reserve(samples.size());
    for (const auto& s : samples) {
      scan->y.push_back(s.y_m);
      scan->e.push_back(s.e_vpm);
    }
    *out = scan.release();
    return RIS_OK;
  });
}

void ris_scan_destroy(ris_scan* scan) { delete scan; }

size_t ris_scan_size(const ris_scan* scan) { return scan ? scan->y.size() : 0; }

const double* ris_scan_y(const ris_scan* scan) { return scan ? scan->y.data() : nullptr; }

const double* ris_scan_e(const ris_scan* scan) { return scan ? scan->e.data() : nullptr; }

// ---------------------------------------------------------------------------
// Peaks and solvers

ris_status ris_peak_efield(const ris_scenario* scenario, double area_side_m, double resolution_m,
                           ris_peak_report** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ris_peak_report{risemf::peak_efield(scenario->value, area_side_m, resolution_m)};
    return RIS_OK;
  });
}

ris_status ris_boresight_peaks(const ris_scenario* scenario, double y_max, int samples_per_decade,
                               ris_peak_report** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ris_peak_report{risemf::boresight_peaks(scenario->value, y_max, samples_per_decade)};
    return RIS_OK;
  });
}

void ris_peak_report_destroy(ris_peak_report* report) { delete report; }

size_t ris_peak_report_count(const ris_peak_report* report) {
  return report ? report->value.peaks.size() : 0;
}

ris_status ris_peak_report_get(const ris_peak_report* report, size_t index, ris_peak* out) {
  if (!report) return null_argument("report");
  if (!out) return null_argument("out");
  if (index >= report->value.peaks.size()) {
    return set_error(RIS_ERR_INVALID_ARGUMENT, "peak index out of range");
  }
  const auto& peak = report->value.peaks[index];
  *out = {from_point(peak.location), peak.e_vpm};
  return RIS_OK;
}

ris_peak ris_peak_report_global_max(const ris_peak_report* report) {
  if (!report) return ris_peak{};
  return {from_point(report->value.global_max.location), report->value.global_max.e_vpm};
}

ris_scan_kind ris_peak_report_kind(const ris_peak_report* report) {
  return report && report->value.scan_kind == risemf::ScanKind::Boresight ? RIS_SCAN_BORESIGHT
                                                                          : RIS_SCAN_GRID;
}

ris_status ris_min_dbr(const ris_scenario* scenario, double limit_vpm, double area_side_m,
                       double resolution_m, ris_solver_result* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto r = risemf::min_dbr(scenario->value, limit_vpm, area_side_m, resolution_m);
    *out = from_result(r);
    if (!r.converged) return set_error(RIS_ERR_INFEASIBLE, "d_br: re-evaluated peak exceeds the limit");
    return RIS_OK;
  });
}

ris_status ris_min_height(const ris_scenario* scenario, double limit_vpm, double h_low_m, double h_high_m,
                          double area_side_m, double resolution_m, ris_solver_result* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto r =
        risemf::min_height(scenario->value, limit_vpm, {h_low_m, h_high_m}, area_side_m, resolution_m);
    *out = from_result(r);
    if (!r.converged) {
      return set_error(RIS_ERR_INFEASIBLE, "h_ris: no compliant height in [" + std::to_string(h_low_m) +
                                               ", " + std::to_string(h_high_m) + "] m");
    }
    return RIS_OK;
  });
}

// ---------------------------------------------------------------------------
// Regulatory limits

ris_status ris_limits_load(const char* path, ris_limits** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ris_limits{risemf::RegulatoryDatabase::load(path)};
    return RIS_OK;
  });
}

void ris_limits_destroy(ris_limits* limits) { delete limits; }

const char* ris_limits_version(const ris_limits* limits) {
  try {
    return table(limits).table_version().c_str();
  } catch (...) {
    return "";
  }
}

const char* ris_authority_name(size_t index) {
  return index < std::size(kAuthorityNames) ? kAuthorityNames[index] : nullptr;
}

ris_status ris_limit_lookup(const ris_limits* limits, const char* authority, double frequency_hz,
                            double* out_vpm) {
  if (!authority) return null_argument("authority");
  if (!out_vpm) return null_argument("out_vpm");
  return guarded([&] {
    const auto& profile = table(limits).profile(risemf::parse_authority(authority));
    *out_vpm = risemf::limit_lookup(profile, frequency_hz);
    return RIS_OK;
  });
}

// ---------------------------------------------------------------------------
// Scalar helpers

ris_status ris_wavelength(double frequency_hz, double* out_m) {
  if (!out_m) return null_argument("out_m");
  return guarded([&] {
    *out_m = risemf::wavelength(frequency_hz);
    return RIS_OK;
  });
}

ris_status ris_fspl(double wavelength_m, double distance_m, double* out_ratio) {
  if (!out_ratio) return null_argument("out_ratio");
  return guarded([&] {
    *out_ratio = risemf::fspl(wavelength_m, distance_m);
    return RIS_OK;
  });
}

ris_status ris_received_power(double p_max_w, double wavelength_m, double d_br_m, double* out_w) {
  if (!out_w) return null_argument("out_w");
  return guarded([&] {
    *out_w = risemf::ris_received_power(p_max_w, wavelength_m, d_br_m);
    return RIS_OK;
  });
}

ris_status ris_field_regions_compute(int n_per_side, double wavelength_m, ris_field_regions* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto r = risemf::field_regions(n_per_side, wavelength_m);
    *out = {r.aperture_m, r.near_bound_m, r.far_bound_m};
    return RIS_OK;
  });
}

ris_status ris_eirp_preset(const char* name, double* out_w) {
  if (!name) return null_argument("name");
  if (!out_w) return null_argument("out_w");
  return guarded([&] {
    *out_w = risemf::eirp_preset(risemf::parse_eirp_preset(name));
    return RIS_OK;
  });
}

ris_status ris_element_gain(double exponent, int include_azimuth, double theta, double psi, double* out_gain) {
  if (!out_gain) return null_argument("out_gain");
  return guarded([&] {
    *out_gain = risemf::element_gain({exponent, include_azimuth != 0}, theta, psi);
    return RIS_OK;
  });
}

ris_status ris_pattern_hpbw(double exponent, double* out_deg) {
  if (!out_deg) return null_argument("out_deg");
  return guarded([&] {
    *out_deg = risemf::pattern_hpbw(exponent);
    return RIS_OK;
  });
}

ris_status ris_adb_height(double area_side_m, double downtilt_rad, double* out_m) {
  if (!out_m) return null_argument("out_m");
  return guarded([&] {
    *out_m = risemf::adb_height(area_side_m, downtilt_rad);
    return RIS_OK;
  });
}

} // extern "C"
