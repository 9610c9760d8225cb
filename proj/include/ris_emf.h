/*
 * ris_emf: C interface to the RIS E-field simulator and compliance toolkit.
 *
 * Every fallible call returns a ris_status. On failure a human-readable
 * message is available from ris_last_error() on the same thread until the
 * next failing call. Handles are opaque and owned by the caller; release them
 * with the matching *_destroy function (NULL is accepted).
 */
#ifndef RIS_EMF_H
#define RIS_EMF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RIS_EMF_BUILDING)
#    define RIS_EMF_API __declspec(dllexport)
#  else
#    define RIS_EMF_API __declspec(dllimport)
#  endif
#else
#  define RIS_EMF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ris_status {
  RIS_OK = 0,
  RIS_ERR_INVALID_ARGUMENT = 1,
  RIS_ERR_COINCIDENT_POINT = 2,
  RIS_ERR_BEHIND_PLANE = 3,
  RIS_ERR_NO_LIMIT = 4,
  RIS_ERR_UNKNOWN_PRESET = 5,
  RIS_ERR_INFEASIBLE = 6,
  RIS_ERR_PARSE = 7,
  RIS_ERR_INTERNAL = 99
} ris_status;

typedef enum ris_mode { RIS_MODE_RO = 0, RIS_MODE_BO = 1 } ris_mode;

typedef enum ris_scan_kind { RIS_SCAN_GRID = 0, RIS_SCAN_BORESIGHT = 1 } ris_scan_kind;

typedef enum ris_parameter { RIS_PARAM_D_BR = 0, RIS_PARAM_H_RIS = 1 } ris_parameter;

typedef struct ris_point {
  double x; /* lateral, m */
  double y; /* depth in front of the RIS, m */
  double h; /* height, m */
} ris_point;

typedef struct ris_scenario_desc {
  double frequency_hz;
  int n_per_side;
  double spacing_fraction; /* element pitch in wavelengths, used when spacing_m <= 0 */
  double spacing_m;
  double h_ris_m;
  double user_height_m;
  double d_br_m;
  double p_max_w;
  ris_mode mode;
  int has_target;
  ris_point target;
  double pattern_exponent; /* cos^q power pattern; 0 = isotropic */
  int include_azimuth;
} ris_scenario_desc;

typedef struct ris_link_budget {
  double frequency_hz;
  double wavelength_m;
  double d_br_m;
  double p_max_w;
  double p_ris_w;
  double spacing_m;
  int near_source; /* d_BR < lambda / (4 pi) */
} ris_link_budget;

typedef struct ris_phasor {
  double real_part;
  double imag_part;
  double magnitude;
} ris_phasor;

typedef struct ris_verification {
  size_t cases;
  double max_relative_difference;
  ris_point worst_point;
  double worst_engine_vpm;
  double worst_oracle_vpm;
} ris_verification;

typedef struct ris_peak {
  ris_point location;
  double e_vpm;
} ris_peak;

typedef struct ris_solver_result {
  ris_parameter parameter;
  double value_m;
  double limit_used_vpm;
  double peak_at_value_vpm;
  int converged;
} ris_solver_result;

typedef struct ris_field_regions {
  double aperture_m;
  double near_bound_m;
  double far_bound_m;
} ris_field_regions;

typedef struct ris_scenario ris_scenario;
typedef struct ris_field_map ris_field_map;
typedef struct ris_scan ris_scan;
typedef struct ris_peak_report ris_peak_report;
typedef struct ris_limits ris_limits;

RIS_EMF_API const char* ris_version(void);
RIS_EMF_API const char* ris_status_string(ris_status status);
RIS_EMF_API const char* ris_last_error(void);

/* Scenario */
RIS_EMF_API void ris_scenario_desc_init(ris_scenario_desc* desc);
RIS_EMF_API ris_status ris_scenario_create(const ris_scenario_desc* desc, ris_scenario** out);
RIS_EMF_API void ris_scenario_destroy(ris_scenario* scenario);
RIS_EMF_API ris_status ris_scenario_link(const ris_scenario* scenario, ris_link_budget* out);

/* Field evaluation */
RIS_EMF_API ris_status ris_efield_at(const ris_scenario* scenario, ris_point p, double* out_vpm);
RIS_EMF_API ris_status ris_bo_closed_form(const ris_scenario* scenario, double* out_vpm);
RIS_EMF_API ris_status ris_oracle_efield(const ris_scenario* scenario, ris_point p, ris_phasor* out);
RIS_EMF_API ris_status ris_verify(const ris_scenario* scenario, uint64_t seed, size_t cases,
                                  double area_side_m, ris_verification* out);

RIS_EMF_API ris_status ris_field_map_create(const ris_scenario* scenario, double area_side_m,
                                            double resolution_m, ris_field_map** out);
RIS_EMF_API void ris_field_map_destroy(ris_field_map* map);
RIS_EMF_API size_t ris_field_map_nx(const ris_field_map* map);
RIS_EMF_API size_t ris_field_map_ny(const ris_field_map* map);
RIS_EMF_API double ris_field_map_x(const ris_field_map* map, size_t ix);
RIS_EMF_API double ris_field_map_y(const ris_field_map* map, size_t iy);
RIS_EMF_API double ris_field_map_height(const ris_field_map* map);
/* Row-major, y index outer: sample (ix, iy) is at [iy * nx + ix]. */
RIS_EMF_API const double* ris_field_map_samples(const ris_field_map* map);

RIS_EMF_API ris_status ris_boresight_scan_create(const ris_scenario* scenario, double y_min, double y_max,
                                                 int samples_per_decade, ris_scan** out);
RIS_EMF_API void ris_scan_destroy(ris_scan* scan);
RIS_EMF_API size_t ris_scan_size(const ris_scan* scan);
RIS_EMF_API const double* ris_scan_y(const ris_scan* scan);
RIS_EMF_API const double* ris_scan_e(const ris_scan* scan);

/* Peaks and placement solvers */
RIS_EMF_API ris_status ris_peak_efield(const ris_scenario* scenario, double area_side_m, double resolution_m,
                                       ris_peak_report** out);
RIS_EMF_API ris_status ris_boresight_peaks(const ris_scenario* scenario, double y_max, int samples_per_decade,
                                           ris_peak_report** out);
RIS_EMF_API void ris_peak_report_destroy(ris_peak_report* report);
RIS_EMF_API size_t ris_peak_report_count(const ris_peak_report* report);
RIS_EMF_API ris_status ris_peak_report_get(const ris_peak_report* report, size_t index, ris_peak* out);
RIS_EMF_API ris_peak ris_peak_report_global_max(const ris_peak_report* report);
RIS_EMF_API ris_scan_kind ris_peak_report_kind(const ris_peak_report* report);

/* Both solvers fill *out even when returning RIS_ERR_INFEASIBLE. */
RIS_EMF_API ris_status ris_min_dbr(const ris_scenario* scenario, double limit_vpm, double area_side_m,
                                   double resolution_m, ris_solver_result* out);
RIS_EMF_API ris_status ris_min_height(const ris_scenario* scenario, double limit_vpm, double h_low_m,
                                      double h_high_m, double area_side_m, double resolution_m,
                                      ris_solver_result* out);

/* Regulatory limits. A NULL table means the built-in one. */
RIS_EMF_API ris_status ris_limits_load(const char* path, ris_limits** out);
RIS_EMF_API void ris_limits_destroy(ris_limits* limits);
RIS_EMF_API const char* ris_limits_version(const ris_limits* limits);
/* Canonical authority names, index 0.. ; NULL past the end. */
RIS_EMF_API const char* ris_authority_name(size_t index);
RIS_EMF_API ris_status ris_limit_lookup(const ris_limits* limits, const char* authority, double frequency_hz,
                                        double* out_vpm);

/* Scalar helpers */
RIS_EMF_API ris_status ris_wavelength(double frequency_hz, double* out_m);
RIS_EMF_API ris_status ris_fspl(double wavelength_m, double distance_m, double* out_ratio);
RIS_EMF_API ris_status ris_received_power(double p_max_w, double wavelength_m, double d_br_m, double* out_w);
RIS_EMF_API ris_status ris_field_regions_compute(int n_per_side, double wavelength_m, ris_field_regions* out);
RIS_EMF_API ris_status ris_eirp_preset(const char* name, double* out_w);
RIS_EMF_API ris_status ris_element_gain(double exponent, int include_azimuth, double theta, double psi,
                                        double* out_gain);
RIS_EMF_API ris_status ris_pattern_hpbw(double exponent, double* out_deg);
RIS_EMF_API ris_status ris_adb_height(double area_side_m, double downtilt_rad, double* out_m);

#ifdef __cplusplus
}
#endif

#endif /* RIS_EMF_H */
