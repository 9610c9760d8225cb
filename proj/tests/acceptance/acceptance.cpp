// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "risemf/risemf.hpp"

#include "../test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace risemf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

class Timer {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double db(double ratio) { return 20.0 * std::log10(ratio); }

// ---------------------------------------------------------------------------

// Phase-aligned sum written out from the element angles, independent of the engine.
long double direct_bo_target(const Scenario& s) {
  const auto& p = s.params();
  const Point3 t = *p.target;
  const long double lambda = s.link().wavelength_m;
  const long double spacing = p.spacing_m ? *p.spacing_m : p.spacing_fraction * lambda;
  const int n = p.n_per_side;
  const long double q = p.pattern.exponent;
  long double sum = 0.0L;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const long double ex = (j - (n - 1) / 2.0L) * spacing;
      const long double eh = p.h_ris_m + (i - (n - 1) / 2.0L) * spacing;
      const long double dx = t.x - ex;
      const long double dy = t.y;
      const long double dh = t.h - eh;
      const long double ground = std::hypot(dx, dy);
      const long double r = std::sqrt(ground * ground + dh * dh);
      long double amp = std::pow(std::cos(std::atan2(dh, ground)), q / 2.0L);
      if (p.pattern.include_azimuth) amp *= std::pow(std::cos(std::atan(dx / dy)), q / 2.0L);
      sum += amp / r;
    }
  }
  const long double pi = std::numbers::pi_v<long double>;
  return std::sqrt(60.0L * p.p_max_w) * lambda / (4.0L * pi * p.d_br_m) * sum;
}

Outcome closed_form_equivalence() {
  Timer timer;
  test::RandomScenarios gen(20240101);
  double worst = 0.0;
  double worst_vs_library = 0.0;
  for (int i = 0; i < 1000; ++i) {
    ScenarioParams p = gen.params(16);
    p.mode = Mode::Beamforming;
    p.target = gen.point();
    const Scenario s = Scenario::make(p);
    const double engine = efield_at(s, *p.target);
    const long double direct = direct_bo_target(s);
    worst = std::max(worst, static_cast<double>(std::abs(engine - direct) / direct));
    worst_vs_library = std::max(worst_vs_library, std::abs(engine - bo_closed_form(s)) / engine);
  }
  const double t = timer.seconds();
  return {worst < 1e-12 && worst_vs_library < 1e-12 && t < 10.0,
          format("max rel err %.2e vs direct sum, %.2e vs library closed form, 1000 cases, %.2f s (< 10 s)",
                 worst, worst_vs_library, t)};
}

Outcome oracle_equivalence() {
  Timer timer;
  test::RandomScenarios gen(777);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    ScenarioParams p = gen.params(32);
    if (i % 2 == 1) {
      p.mode = Mode::Beamforming;
      p.target = gen.point();
    }
    const Scenario s = Scenario::make(p);
    worst = std::max(worst, verify_against_oracle(s, 1000 + i, 4, 10.0).max_relative_difference);
  }
  const double t = timer.seconds();
  return {worst < 1e-9 && t < 30.0,
          format("max rel err %.2e, 1000 scenarios x 4 points, %.2f s (< 30 s)", worst, t)};
}

Outcome array_peak_value() {
  ScenarioParams p;
  p.n_per_side = 4;
  p.h_ris_m = 1.5;
  p.user_height_m = 1.5;
  p.pattern.exponent = 0.0;
  p.p_max_w = test::eirp_for_ris_power(1e-3, p.frequency_hz, p.d_br_m);
  const Scenario s = Scenario::make(p);
  const PeakReport report = peak_efield(s);
  const FieldPeak& g = report.global_max;
  const double peak_db = vpm_to_dbv(g.e_vpm);
  const double oracle_db = vpm_to_dbv(oracle_efield(s, g.location).magnitude);
  const double gap = std::abs(peak_db - oracle_db);
  return {std::abs(peak_db - 27.38) <= 0.1 && gap <= 0.25,
          format("peak %.3f dBV/m at y=%.2f m (target 27.38 +- 0.1), engine/oracle gap %.2e dB (<= 0.25)",
                 peak_db, g.location.y, gap)};
}

struct BoresightRun {
  int n;
  double expected_m;
  std::size_t expected_count;
  double found_m = 0.0;
  std::size_t count = 0;
  double tolerance_m = 0.0;
};

ScenarioParams boresight_params(int n) {
  ScenarioParams p;
  p.n_per_side = n;
  p.h_ris_m = 1.5;
  p.user_height_m = 1.5;
  p.pattern.exponent = 0.0;
  return p;
}

std::vector<BoresightRun> boresight_runs() {
  std::vector<BoresightRun> runs = {{4, 0.085, 1}, {8, 0.432, 2}, {16, 1.842, 4}, {32, 7.455, 8}};
  for (auto& r : runs) {
    const PeakReport report = boresight_peaks(Scenario::make(boresight_params(r.n)), 200.0);
    r.count = report.peaks.size();
    r.found_m = report.peaks.empty() ? 0.0 : report.peaks.back().location.y;
    const double step = r.expected_m * (std::pow(10.0, 1.0 / kDefaultSamplesPerDecade) - 1.0);
    r.tolerance_m = std::max(0.05 * r.expected_m, step);
  }
  return runs;
}

Outcome near_field_peaks(std::vector<BoresightRun>& runs) {
  Timer timer;
  runs = boresight_runs();
  const double t = timer.seconds();
  bool pass = t < 60.0;
  std::string detail;
  for (const auto& r : runs) {
    pass = pass && std::abs(r.found_m - r.expected_m) <= r.tolerance_m && r.count == r.expected_count;
    detail += format("N=%d %.4f m (%.3f +- %.4f) x%zu; ", r.n, r.found_m, r.expected_m, r.tolerance_m, r.count);
  }
  detail += format("%.2f s (< 60 s)", t);
  return {pass, detail};
}

Outcome region_bounds(const std::vector<BoresightRun>& runs) {
  const FieldRegions fr = field_regions(32, wavelength(3.5e9));
  const auto it = std::find_if(runs.begin(), runs.end(), [](const BoresightRun& r) { return r.n == 32; });
  const double peak = it == runs.end() ? 0.0 : it->found_m;
  const bool pass = std::abs(fr.near_bound_m - 5.72) < 0.01 && std::abs(fr.far_bound_m - 87.7) < 0.1 &&
                    fr.near_bound_m < peak && peak < fr.far_bound_m;
  return {pass, format("d_N %.3f m < peak %.3f m < d_F %.2f m", fr.near_bound_m, peak, fr.far_bound_m)};
}

Outcome minimum_heights() {
  Timer timer;
  ScenarioParams p;
  p.n_per_side = 16;
  p.pattern.exponent = 6.0;
  const double limit = dbv_to_vpm(20.0);
  const HeightRange range{1.5, 10.0};
  const SolverResult ro = min_height(Scenario::make(p), limit, range);
  p.mode = Mode::Beamforming;
  p.target = Point3{0.0, 1.0, 1.5};
  const SolverResult bo = min_height(Scenario::make(p), limit, range);
  const double t = timer.seconds();
  const bool pass = ro.converged && bo.converged && std::abs(ro.value_m - 2.05) <= 0.05 &&
                    std::abs(bo.value_m - 3.19) <= 0.05 && t < 300.0;
  return {pass, format("RO %.3f m (2.05 +- 0.05), BO %.3f m (3.19 +- 0.05), %.1f s (< 300 s)", ro.value_m,
                       bo.value_m, t)};
}

Outcome frequency_independence() {
  struct Case {
    int n;
    double f;
  };
  const Case cases[] = {{8, 3.5e9}, {32, 14e9}, {64, 28e9}};
  std::vector<double> peaks;
  std::string detail;
  for (const auto& c : cases) {
    ScenarioParams p;
    p.n_per_side = c.n;
    p.frequency_hz = c.f;
    const double peak = vpm_to_dbv(peak_efield(Scenario::make(p)).global_max.e_vpm);
    peaks.push_back(peak);
    detail += format("%dx%d@%.1fGHz %.3f dBV/m; ", c.n, c.n, c.f / 1e9, peak);
  }
  const auto [lo, hi] = std::minmax_element(peaks.begin(), peaks.end());
  detail += format("spread %.3f dB (<= 1)", *hi - *lo);
  return {*hi - *lo <= 1.0, detail};
}

Outcome property_suites() {
  std::string detail;
  bool pass = true;

  test::RandomScenarios gen(4242);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    ScenarioParams p = gen.params(16);
    const Point3 t = gen.point();
    const double ro = efield_at(Scenario::make(p), t);
    p.mode = Mode::Beamforming;
    p.target = t;
    const double bo = efield_at(Scenario::make(p), t);
    if (ro > bo * (1.0 + 1e-12)) ++violations;
  }
  pass = pass && violations == 0;
  detail += format("RO<=BO violations %d/1000; ", violations);

  ScenarioParams p;
  p.mode = Mode::Beamforming;
  p.target = Point3{0.0, 1.0, 1.5};
  const Scenario base = Scenario::make(p);
  const double peak = peak_efield(base).global_max.e_vpm;
  const double shift_dbr = db(peak_efield(base.with_d_br(2.0 * p.d_br_m)).global_max.e_vpm / peak);
  const double shift_pmax = db(peak_efield(base.with_p_max(2.0 * p.p_max_w)).global_max.e_vpm / peak);
  const double want_dbr = db(0.5);
  const double want_pmax = 10.0 * std::log10(2.0);
  pass = pass && std::abs(shift_dbr - want_dbr) < 1e-9 && std::abs(shift_pmax - want_pmax) < 1e-9;
  detail += format("2x d_BR %.4f dB, 2x P_max %+.4f dB; ", shift_dbr, shift_pmax);

  double asym = 0.0;
  for (const bool azimuth : {false, true}) {
    ScenarioParams m;
    m.n_per_side = 7;
    m.pattern.include_azimuth = azimuth;
    for (const Mode mode : {Mode::Reflective, Mode::Beamforming}) {
      m.mode = mode;
      m.target = mode == Mode::Beamforming ? std::optional<Point3>(Point3{0.0, 2.0, 1.0}) : std::nullopt;
      const FieldMap map = field_map(Scenario::make(m), 10.0, 0.05);
      for (std::size_t iy = 0; iy < map.ny; ++iy) {
        for (std::size_t ix = 0; ix < map.nx; ++ix) {
          const double a = map.at(ix, iy);
          const double b = map.at(map.nx - 1 - ix, iy);
          asym = std::max(asym, std::abs(a - b) / std::max(a, b));
        }
      }
    }
  }
  pass = pass && asym < 1e-9;
  detail += format("mirror asymmetry %.2e; ", asym);

  double refine = 0.0;
  for (const Mode mode : {Mode::Reflective, Mode::Beamforming}) {
    ScenarioParams r;
    r.mode = mode;
    if (mode == Mode::Beamforming) r.target = Point3{0.0, 1.0, 1.5};
    const Scenario s = Scenario::make(r);
    const double coarse = peak_efield(s, 10.0, 0.05).global_max.e_vpm;
    const double fine = peak_efield(s, 10.0, 0.025).global_max.e_vpm;
    refine = std::max(refine, std::abs(db(fine / coarse)));
  }
  pass = pass && refine < 0.1;
  detail += format("grid refinement %.4f dB (< 0.1)", refine);
  return {pass, detail};
}

struct TableRow {
  Authority authority;
  double f_low_hz;
  double f_high_hz;
  double low_vpm;
  double high_vpm;
  double printed_step;
};

Outcome limits_database() {
  const TableRow rows[] = {
      {Authority::Itu, 400e6, 2e9, 27.5, 61.5, 0.1},      {Authority::Itu, 2e9, 300e9, 61.0, 61.0, 0.0},
      {Authority::Icnirp, 400e6, 2e9, 27.5, 61.5, 0.1},   {Authority::Usa, 300e6, 1.5e9, 27.46, 61.4, 0.01},
      {Authority::Usa, 1.5e9, 100e9, 61.4, 61.4, 0.0},    {Authority::Flanders, 400e6, 2e9, 13.7, 30.7, 0.1},
      {Authority::Flanders, 2e9, 300e9, 30.7, 30.7, 0.0}, {Authority::China, 30e6, 3e9, 12.0, 12.0, 0.0},
      {Authority::China, 3e9, 15e9, 12.0, 27.0, 0.0},     {Authority::China, 15e9, 300e9, 27.0, 27.0, 0.0},
  };
  const auto& table = RegulatoryDatabase::builtin();
  bool pass = true;
  int checked = 0;
  const auto matches = [](double got, double want, double step) {
    if (step == 0.0) return got == want;
    return std::abs(std::round(got / step) * step - want) < 1e-9;
  };
  for (const auto& row : rows) {
    const auto& bands = table.profile(row.authority).bands;
    const auto band = std::find_if(bands.begin(), bands.end(), [&](const LimitBand& b) {
      return b.f_low_hz == row.f_low_hz && b.f_high_hz == row.f_high_hz;
    });
    if (band == bands.end()) {
      pass = false;
      continue;
    }
    pass = pass && matches(band->limit_at(row.f_low_hz), row.low_vpm, row.printed_step) &&
           matches(band->limit_at(row.f_high_hz), row.high_vpm, row.printed_step);
    checked += 2;
  }
  const double who = limit_lookup(table.profile(Authority::Who), 3.5e9);
  pass = pass && who == 41.25;

  const double itu900 = limit_lookup(table.profile(Authority::Itu), 900e6);
  const double icnirp900 = limit_lookup(table.profile(Authority::Icnirp), 900e6);
  pass = pass && std::abs(itu900 - 41.25) < 1e-12 && std::abs(icnirp900 - 41.25) < 1e-12;

  std::string icnirp_message;
  for (const double f : {2.5e9, 300e9, 28e9}) {
    try {
      limit_lookup(table.profile(Authority::Icnirp), f);
      pass = false;
    } catch (const Error& e) {
      icnirp_message = e.what();
      pass = pass && e.code() == ErrorCode::NoLimitDefined &&
             icnirp_message.find("no limit defined") != std::string::npos;
    }
  }
  return {pass, format("%d endpoints, WHO %.2f, 900 MHz ITU %.4f / ICNIRP %.4f, ICNIRP 28 GHz: \"%s\"",
                       checked, who, itu900, icnirp900, icnirp_message.c_str())};
}

Outcome performance() {
  ScenarioParams p;
  p.n_per_side = 64;
  const Scenario s = Scenario::make(p);
  Timer timer;
  const FieldMap map = field_map(s, 10.0, 0.05);
  const double t = timer.seconds();
  const bool shape = map.nx == 201 && map.ny == 201;
  return {shape && t < 30.0, format("64x64 elements over %zux%zu grid in %.2f s with %zu threads (< 30 s)", map.nx,
                                    map.ny, t, evaluation_threads())};
}

} // namespace

int main() {
  std::vector<BoresightRun> runs;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"closed-form equivalence", closed_form_equivalence},
      {"oracle equivalence", oracle_equivalence},
      {"4x4 peak value", array_peak_value},
      {"near-field peak locations", [&] { return near_field_peaks(runs); }},
      {"region bounds", [&] { return region_bounds(runs); }},
      {"minimum heights", minimum_heights},
      {"RO frequency independence", frequency_independence},
      {"property suites", property_suites},
      {"limits database", limits_database},
      {"performance", performance},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
