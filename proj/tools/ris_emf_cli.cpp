// ris-emf: command-line front end over the ris_emf C API.
#include "ris_emf.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;

struct CliError : std::runtime_error {
  CliError(int code, const std::string& message) : std::runtime_error(message), exit_code(code) {}
  int exit_code;
};

[[noreturn]] void invalid(const std::string& message) { throw CliError(kExitInvalid, message); }

void check(ris_status status) {
  if (status == RIS_OK) return;
  const int code = status == RIS_ERR_INFEASIBLE ? kExitInfeasible : kExitInvalid;
  throw CliError(code, ris_last_error());
}

struct Settings {
  std::optional<double> freq_ghz;
  std::optional<int> n;
  std::optional<double> spacing_frac;
  std::optional<double> h_ris;
  std::optional<double> h_user;
  std::optional<double> d_br;
  std::optional<double> pmax_dbm;
  std::optional<std::string> eirp;
  std::optional<std::string> mode;
  std::optional<std::string> target;
  std::optional<double> area;
  std::optional<double> res;
  std::optional<double> pattern_exp;
  std::optional<bool> azimuth_pattern;
  std::optional<std::string> authority;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cases;
  std::optional<double> limit_vpm;
  std::optional<double> limit_dbv;
  std::optional<double> h_min;
  std::optional<double> h_max;
  std::optional<double> y_min;
  std::optional<double> y_max;
  std::optional<int> spd;
  std::optional<std::string> limits_file;
};

template <typename T>
void overlay(std::optional<T>& base, const std::optional<T>& top) {
  if (top) base = top;
}

Settings merged(Settings base, const Settings& flags) {
  // Either power flag replaces both power keys from the config file.
  if (flags.pmax_dbm || flags.eirp) {
    base.pmax_dbm.reset();
    base.eirp.reset();
  }
  overlay(base.freq_ghz, flags.freq_ghz);
  overlay(base.n, flags.n);
  overlay(base.spacing_frac, flags.spacing_frac);
  overlay(base.h_ris, flags.h_ris);
  overlay(base.h_user, flags.h_user);
  overlay(base.d_br, flags.d_br);
  overlay(base.pmax_dbm, flags.pmax_dbm);
  overlay(base.eirp, flags.eirp);
  overlay(base.mode, flags.mode);
  overlay(base.target, flags.target);
  overlay(base.area, flags.area);
  overlay(base.res, flags.res);
  overlay(base.pattern_exp, flags.pattern_exp);
  overlay(base.azimuth_pattern, flags.azimuth_pattern);
  overlay(base.authority, flags.authority);
  overlay(base.out, flags.out);
  overlay(base.format, flags.format);
  overlay(base.seed, flags.seed);
  overlay(base.cases, flags.cases);
  overlay(base.limit_vpm, flags.limit_vpm);
  overlay(base.limit_dbv, flags.limit_dbv);
  overlay(base.h_min, flags.h_min);
  overlay(base.h_max, flags.h_max);
  overlay(base.y_min, flags.y_min);
  overlay(base.y_max, flags.y_max);
  overlay(base.spd, flags.spd);
  overlay(base.limits_file, flags.limits_file);
  return base;
}

// ---------------------------------------------------------------------------
// Config file

double config_number(const Json& v, const std::string& key) {
  if (!v.is_number()) invalid("config: '" + key + "' must be a number");
  return v.get<double>();
}

long long config_integer(const Json& v, const std::string& key) {
  if (!v.is_number_integer()) invalid("config: '" + key + "' must be an integer");
  return v.get<long long>();
}

std::string config_string(const Json& v, const std::string& key) {
  if (!v.is_string()) invalid("config: '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string config_target(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (!v.is_array() || v.size() != 3) invalid("config: 'target' must be \"x,y,h\" or an array of three numbers");
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < 3; ++i) {
    if (i) os << ',';
    os << config_number(v[i], "target");
  }
  return os.str();
}

Settings load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("config: cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    invalid(std::string("config: malformed JSON in '") + path + "': " + e.what());
  }
  if (!doc.is_object()) invalid("config: top level must be a JSON object");

  Settings s;
  using Setter = std::function<void(const Json&, const std::string&)>;
  const auto num = [](std::optional<double>& dst) -> Setter {
    return [&dst](const Json& v, const std::string& k) { dst = config_number(v, k); };
  };
  const auto str = [](std::optional<std::string>& dst) -> Setter {
    return [&dst](const Json& v, const std::string& k) { dst = config_string(v, k); };
  };
  const auto u64 = [](std::optional<std::uint64_t>& dst) -> Setter {
    return [&dst](const Json& v, const std::string& k) {
      const auto x = config_integer(v, k);
      if (x < 0) invalid("config: '" + k + "' must be >= 0");
      dst = static_cast<std::uint64_t>(x);
    };
  };
  const auto i32 = [](std::optional<int>& dst) -> Setter {
    return [&dst](const Json& v, const std::string& k) {
      const auto x = config_integer(v, k);
      if (x < -1000000 || x > 1000000) invalid("config: '" + k + "' is out of range");
      dst = static_cast<int>(x);
    };
  };

  const std::map<std::string, Setter> setters = {
      {"freq_ghz", num(s.freq_ghz)},
      {"n", i32(s.n)},
      {"spacing_frac", num(s.spacing_frac)},
      {"h_ris", num(s.h_ris)},
      {"h_user", num(s.h_user)},
      {"d_br", num(s.d_br)},
      {"pmax_dbm", num(s.pmax_dbm)},
      {"eirp", str(s.eirp)},
      {"mode", str(s.mode)},
      {"target", [&s](const Json& v, const std::string&) { s.target = config_target(v); }},
      {"area", num(s.area)},
      {"res", num(s.res)},
      {"pattern_exp", num(s.pattern_exp)},
      {"azimuth_pattern",
       [&s](const Json& v, const std::string&) {
         if (!v.is_boolean()) invalid("config: 'azimuth_pattern' must be true or false");
         s.azimuth_pattern = v.get<bool>();
       }},
      {"authority", str(s.authority)},
      {"out", str(s.out)},
      {"format", str(s.format)},
      {"seed", u64(s.seed)},
      {"cases", u64(s.cases)},
      {"limit_vpm", num(s.limit_vpm)},
      {"limit_dbv", num(s.limit_dbv)},
      {"h_min", num(s.h_min)},
      {"h_max", num(s.h_max)},
      {"y_min", num(s.y_min)},
      {"y_max", num(s.y_max)},
      {"spd", i32(s.spd)},
      {"limits_file", str(s.limits_file)},
  };
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) invalid("config: unknown key '" + key + "'");
    it->second(value, key);
  }
  if (s.pmax_dbm && s.eirp) invalid("config: give either 'pmax_dbm' or 'eirp', not both");
  return s;
}

// ---------------------------------------------------------------------------
// Formatting

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(fmt9(v).c_str(), nullptr);
}

double to_dbv(double vpm) { return vpm > 0.0 ? 20.0 * std::log10(vpm) : -HUGE_VAL; }

std::string csv_dbv(double vpm) { return vpm > 0.0 ? fmt9(to_dbv(vpm)) : "-inf"; }

Json point_json(const ris_point& p) { return Json{{"x_m", num(p.x)}, {"y_m", num(p.y)}, {"h_m", num(p.h)}}; }

Json peak_json(const ris_peak& p) {
  Json j = point_json(p.location);
  j["e_vpm"] = num(p.e_vpm);
  j["e_dbvpm"] = num(to_dbv(p.e_vpm));
  return j;
}

// ---------------------------------------------------------------------------
// Scenario

struct ScenarioHandle {
  ~ScenarioHandle() { ris_scenario_destroy(ptr); }
  ris_scenario* ptr = nullptr;
  ris_scenario_desc desc{};
  ris_link_budget link{};
};

ris_point parse_target(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0' || errno != 0) {
      invalid("target: cannot parse '" + text + "' (expected \"x,y,h\" in metres)");
    }
    parts.push_back(v);
  }
  if (parts.size() != 3) invalid("target: expected three values \"x,y,h\", got '" + text + "'");
  return {parts[0], parts[1], parts[2]};
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::unique_ptr<ScenarioHandle> make_scenario(const Settings& s) {
  auto h = std::make_unique<ScenarioHandle>();
  ris_scenario_desc& d = h->desc;
  ris_scenario_desc_init(&d);
  if (s.freq_ghz) d.frequency_hz = *s.freq_ghz * 1e9;
  if (s.n) d.n_per_side = *s.n;
  if (s.spacing_frac) d.spacing_fraction = *s.spacing_frac;
  if (s.h_ris) d.h_ris_m = *s.h_ris;
  if (s.h_user) d.user_height_m = *s.h_user;
  if (s.d_br) d.d_br_m = *s.d_br;
  if (s.pmax_dbm) {
    if (!std::isfinite(*s.pmax_dbm)) invalid("pmax_dbm: must be finite");
    d.p_max_w = std::pow(10.0, (*s.pmax_dbm - 30.0) / 10.0);
  } else if (s.eirp) {
    if (ris_eirp_preset(s.eirp->c_str(), &d.p_max_w) != RIS_OK) {
      invalid("eirp: unknown preset '" + *s.eirp + "' (expected fcc, fr1 or fr2)");
    }
  }
  if (s.mode) {
    const auto m = lower(*s.mode);
    if (m == "ro") {
      d.mode = RIS_MODE_RO;
    } else if (m == "bo") {
      d.mode = RIS_MODE_BO;
    } else {
      invalid("mode: expected 'ro' or 'bo', got '" + *s.mode + "'");
    }
  }
  if (s.target) {
    if (d.mode != RIS_MODE_BO) invalid("target: only valid with --mode bo");
    d.has_target = 1;
    d.target = parse_target(*s.target);
  } else if (d.mode == RIS_MODE_BO) {
    invalid("target: --mode bo requires --target \"x,y,h\"");
  }
  if (s.pattern_exp) d.pattern_exponent = *s.pattern_exp;
  if (s.azimuth_pattern) d.include_azimuth = *s.azimuth_pattern ? 1 : 0;

  check(ris_scenario_create(&d, &h->ptr));
  check(ris_scenario_link(h->ptr, &h->link));
  if (h->link.near_source) {
    std::cerr << "ris-emf: warning: d_br " << fmt9(d.d_br_m)
              << " m is inside the near-source zone; P_RIS exceeds P_max\n";
  }
  return h;
}

Json scenario_json(const ScenarioHandle& h) {
  const auto& d = h.desc;
  const auto& l = h.link;
  Json j;
  j["frequency_ghz"] = num(d.frequency_hz / 1e9);
  j["wavelength_m"] = num(l.wavelength_m);
  j["n_per_side"] = d.n_per_side;
  j["spacing_m"] = num(l.spacing_m);
  j["h_ris_m"] = num(d.h_ris_m);
  j["h_user_m"] = num(d.user_height_m);
  j["d_br_m"] = num(d.d_br_m);
  j["p_max_dbm"] = num(10.0 * std::log10(l.p_max_w) + 30.0);
  j["p_ris_dbm"] = num(10.0 * std::log10(l.p_ris_w) + 30.0);
  j["mode"] = d.mode == RIS_MODE_BO ? "bo" : "ro";
  j["target_m"] = d.has_target ? Json::array({num(d.target.x), num(d.target.y), num(d.target.h)}) : Json(nullptr);
  j["pattern_exponent"] = num(d.pattern_exponent);
  j["azimuth_pattern"] = d.include_azimuth != 0;
  return j;
}

// ---------------------------------------------------------------------------
// Commands

enum class Format { Csv, Json };

struct Context {
  Settings settings;
  Format format = Format::Json;
  std::ostream* out = nullptr;
};

double area(const Settings& s) { return s.area.value_or(10.0); }
double res(const Settings& s) { return s.res.value_or(0.05); }

void emit_json(Context& ctx, const Json& j) { *ctx.out << j.dump(2) << '\n'; }

void require_json(const Context& ctx, const char* command) {
  if (ctx.format == Format::Csv) invalid(std::string("format: csv is not available for '") + command + "'");
}

struct LimitsHandle {
  ~LimitsHandle() { ris_limits_destroy(ptr); }
  ris_limits* ptr = nullptr;
};

std::unique_ptr<LimitsHandle> open_limits(const Settings& s) {
  auto h = std::make_unique<LimitsHandle>();
  if (s.limits_file) {
    if (ris_limits_load(s.limits_file->c_str(), &h->ptr) != RIS_OK) {
      invalid(std::string("limits_file: ") + ris_last_error());
    }
  }
  return h;
}

struct ResolvedLimit {
  double vpm;
  Json source;
};

ResolvedLimit resolve_limit(const Settings& s, double frequency_hz) {
  const int given = (s.limit_vpm ? 1 : 0) + (s.limit_dbv ? 1 : 0) + (s.authority ? 1 : 0);
  if (given == 0) invalid("limit: give one of --limit-vpm, --limit-dbv or --authority");
  if (given > 1) invalid("limit: --limit-vpm, --limit-dbv and --authority are mutually exclusive");
  if (s.limit_vpm) return {*s.limit_vpm, Json{{"kind", "explicit"}}};
  if (s.limit_dbv) return {std::pow(10.0, *s.limit_dbv / 20.0), Json{{"kind", "explicit"}}};
  const auto table = open_limits(s);
  double v = 0.0;
  const ris_status st = ris_limit_lookup(table->ptr, s.authority->c_str(), frequency_hz, &v);
  if (st != RIS_OK) invalid(std::string("authority: ") + ris_last_error());
  return {v, Json{{"kind", "authority"}, {"authority", lower(*s.authority)},
                  {"table_version", ris_limits_version(table->ptr)}}};
}

int cmd_map(Context& ctx) {
  const auto sc = make_scenario(ctx.settings);
  ris_field_map* raw = nullptr;
  check(ris_field_map_create(sc->ptr, area(ctx.settings), res(ctx.settings), &raw));
  std::unique_ptr<ris_field_map, decltype(&ris_field_map_destroy)> map(raw, &ris_field_map_destroy);
  const std::size_t nx = ris_field_map_nx(raw);
  const std::size_t ny = ris_field_map_ny(raw);
  const double* e = ris_field_map_samples(raw);

  if (ctx.format == Format::Csv) {
    std::string text = "x_m,y_m,e_vpm,e_dbvpm\n";
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const std::string y = fmt9(ris_field_map_y(raw, iy));
      for (std::size_t ix = 0; ix < nx; ++ix) {
        const double v = e[iy * nx + ix];
        text += fmt9(ris_field_map_x(raw, ix));
        text += ',';
        text += y;
        text += ',';
        text += fmt9(v);
        text += ',';
        text += csv_dbv(v);
        text += '\n';
      }
    }
    *ctx.out << text;
    return kExitOk;
  }

  Json j;
  j["scenario"] = scenario_json(*sc);
  j["grid"] = Json{{"area_m", num(area(ctx.settings))},
                   {"resolution_m", num(res(ctx.settings))},
                   {"nx", nx},
                   {"ny", ny},
                   {"height_m", num(ris_field_map_height(raw))}};
  Json xs = Json::array();
  Json ys = Json::array();
  for (std::size_t ix = 0; ix < nx; ++ix) xs.push_back(num(ris_field_map_x(raw, ix)));
  for (std::size_t iy = 0; iy < ny; ++iy) ys.push_back(num(ris_field_map_y(raw, iy)));
  j["x_m"] = std::move(xs);
  j["y_m"] = std::move(ys);
  Json rows = Json::array();
  for (std::size_t iy = 0; iy < ny; ++iy) {
    Json row = Json::array();
    for (std::size_t ix = 0; ix < nx; ++ix) row.push_back(num(e[iy * nx + ix]));
    rows.push_back(std::move(row));
  }
  j["e_vpm"] = std::move(rows);
  emit_json(ctx, j);
  return kExitOk;
}

int emit_peaks(Context& ctx, const ScenarioHandle& sc, ris_peak_report* report, Json scan) {
  const std::size_t count = ris_peak_report_count(report);
  std::vector<ris_peak> peaks(count);
  for (std::size_t i = 0; i < count; ++i) check(ris_peak_report_get(report, i, &peaks[i]));

  if (ctx.format == Format::Csv) {
    std::string text = "x_m,y_m,h_m,e_vpm,e_dbvpm\n";
    for (const auto& p : peaks) {
      text += fmt9(p.location.x) + ',' + fmt9(p.location.y) + ',' + fmt9(p.location.h) + ',' + fmt9(p.e_vpm) +
              ',' + csv_dbv(p.e_vpm) + '\n';
    }
    *ctx.out << text;
    return kExitOk;
  }

  Json j;
  j["scenario"] = scenario_json(sc);
  j["scan"] = std::move(scan);
  j["global_max"] = peak_json(ris_peak_report_global_max(report));
  j["peak_count"] = count;
  Json list = Json::array();
  for (const auto& p : peaks) list.push_back(peak_json(p));
  j["peaks"] = std::move(list);
  emit_json(ctx, j);
  return kExitOk;
}

int cmd_peaks(Context& ctx) {
  const auto sc = make_scenario(ctx.settings);
  ris_peak_report* raw = nullptr;
  check(ris_peak_efield(sc->ptr, area(ctx.settings), res(ctx.settings), &raw));
  std::unique_ptr<ris_peak_report, decltype(&ris_peak_report_destroy)> report(raw, &ris_peak_report_destroy);
  return emit_peaks(ctx, *sc, raw,
                    Json{{"kind", "grid"},
                         {"area_m", num(area(ctx.settings))},
                         {"resolution_m", num(res(ctx.settings))}});
}

int cmd_boresight(Context& ctx) {
  const auto& s = ctx.settings;
  const auto sc = make_scenario(s);
  const double y_min = s.y_min.value_or(1e-3);
  const double y_max = s.y_max.value_or(100.0);
  const int spd = s.spd.value_or(200);

  if (ctx.format == Format::Csv) {
    ris_scan* raw = nullptr;
    check(ris_boresight_scan_create(sc->ptr, y_min, y_max, spd, &raw));
    std::unique_ptr<ris_scan, decltype(&ris_scan_destroy)> scan(raw, &ris_scan_destroy);
    const std::size_t n = ris_scan_size(raw);
    const double* y = ris_scan_y(raw);
    const double* e = ris_scan_e(raw);
    std::string text = "y_m,e_vpm,e_dbvpm\n";
    for (std::size_t i = 0; i < n; ++i) text += fmt9(y[i]) + ',' + fmt9(e[i]) + ',' + csv_dbv(e[i]) + '\n';
    *ctx.out << text;
    return kExitOk;
  }

  if (s.y_min && *s.y_min != 1e-3) invalid("y_min: the peak report always starts the scan at 0.001 m");
  ris_peak_report* raw = nullptr;
  check(ris_boresight_peaks(sc->ptr, y_max, spd, &raw));
  std::unique_ptr<ris_peak_report, decltype(&ris_peak_report_destroy)> report(raw, &ris_peak_report_destroy);
  return emit_peaks(ctx, *sc, raw,
                    Json{{"kind", "boresight"},
                         {"y_min_m", num(1e-3)},
                         {"y_max_m", num(y_max)},
                         {"samples_per_decade", spd}});
}

int cmd_limits(Context& ctx) {
  require_json(ctx, "limits");
  const auto& s = ctx.settings;
  if (!s.freq_ghz) invalid("freq_ghz: limits requires --freq-ghz");
  const double f_hz = *s.freq_ghz * 1e9;
  const auto table = open_limits(s);

  Json j;
  j["table_version"] = ris_limits_version(table->ptr);
  j["frequency_ghz"] = num(*s.freq_ghz);
  if (s.authority) {
    double v = 0.0;
    const ris_status st = ris_limit_lookup(table->ptr, s.authority->c_str(), f_hz, &v);
    if (st == RIS_ERR_NO_LIMIT) invalid(std::string("freq_ghz: ") + ris_last_error());
    if (st != RIS_OK) invalid(std::string("authority: ") + ris_last_error());
    j["authority"] = lower(*s.authority);
    j["limit_vpm"] = num(v);
    j["limit_dbvpm"] = num(to_dbv(v));
  } else {
    Json all = Json::array();
    for (std::size_t i = 0; const char* name = ris_authority_name(i); ++i) {
      double v = 0.0;
      const ris_status st = ris_limit_lookup(table->ptr, name, f_hz, &v);
      Json row{{"authority", lower(name)}};
      row["limit_vpm"] = st == RIS_OK ? num(v) : Json(nullptr);
      row["limit_dbvpm"] = st == RIS_OK ? num(to_dbv(v)) : Json(nullptr);
      all.push_back(std::move(row));
    }
    j["limits"] = std::move(all);
  }
  emit_json(ctx, j);
  return kExitOk;
}

Json solver_json(const ScenarioHandle& sc, const ResolvedLimit& limit, const ris_solver_result& r,
                 const char* value_key) {
  Json j;
  j["scenario"] = scenario_json(sc);
  j["limit"] = limit.source;
  j["limit"]["limit_vpm"] = num(limit.vpm);
  j[value_key] = num(r.value_m);
  j["peak_at_value_vpm"] = num(r.peak_at_value_vpm);
  j["converged"] = r.converged != 0;
  return j;
}

int cmd_min_dist(Context& ctx) {
  require_json(ctx, "min-dist");
  const auto sc = make_scenario(ctx.settings);
  const auto limit = resolve_limit(ctx.settings, sc->desc.frequency_hz);
  ris_solver_result r{};
  const ris_status st = ris_min_dbr(sc->ptr, limit.vpm, area(ctx.settings), res(ctx.settings), &r);
  if (st != RIS_OK && st != RIS_ERR_INFEASIBLE) check(st);
  Json j = solver_json(*sc, limit, r, "d_br_min_m");
  j["grid"] = Json{{"area_m", num(area(ctx.settings))}, {"resolution_m", num(res(ctx.settings))}};
  emit_json(ctx, j);
  if (st == RIS_ERR_INFEASIBLE) {
    std::cerr << "ris-emf: error: " << ris_last_error() << '\n';
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_min_height(Context& ctx) {
  require_json(ctx, "min-height");
  const auto& s = ctx.settings;
  const auto sc = make_scenario(s);
  const auto limit = resolve_limit(s, sc->desc.frequency_hz);
  const double lo = s.h_min.value_or(sc->desc.user_height_m);
  const double hi = s.h_max.value_or(10.0);
  if (!(hi > lo)) invalid("h_max: must exceed h_min (" + fmt9(lo) + " m)");
  ris_solver_result r{};
  const ris_status st = ris_min_height(sc->ptr, limit.vpm, lo, hi, area(s), res(s), &r);
  if (st != RIS_OK && st != RIS_ERR_INFEASIBLE) check(st);
  Json j = solver_json(*sc, limit, r, "h_ris_min_m");
  j["search_m"] = Json::array({num(lo), num(hi)});
  j["grid"] = Json{{"area_m", num(area(s))}, {"resolution_m", num(res(s))}};
  emit_json(ctx, j);
  if (st == RIS_ERR_INFEASIBLE) {
    std::cerr << "ris-emf: error: " << ris_last_error() << '\n';
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_regions(Context& ctx) {
  require_json(ctx, "regions");
  const auto sc = make_scenario(ctx.settings);
  ris_field_regions fr{};
  check(ris_field_regions_compute(sc->desc.n_per_side, sc->link.wavelength_m, &fr));
  Json j;
  j["scenario"] = scenario_json(*sc);
  j["aperture_m"] = num(fr.aperture_m);
  j["near_bound_m"] = num(fr.near_bound_m);
  j["far_bound_m"] = num(fr.far_bound_m);
  emit_json(ctx, j);
  return kExitOk;
}

int cmd_verify(Context& ctx) {
  require_json(ctx, "verify");
  const auto& s = ctx.settings;
  const auto sc = make_scenario(s);
  const std::uint64_t seed = s.seed.value_or(0);
  const std::uint64_t cases = s.cases.value_or(1000);
  ris_verification v{};
  check(ris_verify(sc->ptr, seed, static_cast<size_t>(cases), area(s), &v));
  const bool pass = v.max_relative_difference < 1e-9;
  Json j;
  j["scenario"] = scenario_json(*sc);
  j["seed"] = seed;
  j["cases"] = v.cases;
  j["area_m"] = num(area(s));
  j["max_relative_difference"] = num(v.max_relative_difference);
  j["worst_point"] = point_json(v.worst_point);
  j["worst_engine_vpm"] = num(v.worst_engine_vpm);
  j["worst_oracle_vpm"] = num(v.worst_oracle_vpm);
  j["tolerance"] = num(1e-9);
  j["pass"] = pass;
  emit_json(ctx, j);
  if (!pass) {
    std::cerr << "ris-emf: error: engine and oracle differ by " << fmt9(v.max_relative_difference) << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Argument parsing

template <typename T>
void opt(CLI::App& app, const std::string& name, std::optional<T>& dst, const std::string& help) {
  app.add_option_function<T>(name, [&dst](const T& v) { dst = v; }, help);
}

int run(int argc, char** argv) {
  CLI::App app{"RIS electric-field simulator and EMF compliance toolkit", "ris-emf"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", ris_version());

  Settings flags;
  std::optional<std::string> config_path;
  opt(app, "--config", config_path, "JSON scenario file; flags override its values");
  opt(app, "--freq-ghz", flags.freq_ghz, "carrier frequency [GHz] (default 3.5)");
  opt(app, "--n", flags.n, "elements per side (default 8)");
  opt(app, "--spacing-frac", flags.spacing_frac, "element pitch in wavelengths (default 0.5)");
  opt(app, "--h-ris", flags.h_ris, "RIS centre height [m] (default 3)");
  opt(app, "--h-user", flags.h_user, "user evaluation height [m] (default 1.5)");
  opt(app, "--d-br", flags.d_br, "BS-RIS distance [m] (default 20)");
  opt(app, "--pmax-dbm", flags.pmax_dbm, "BS EIRP [dBm] (default 75)");
  opt(app, "--eirp", flags.eirp, "EIRP preset: fcc (75 dBm), fr1 (47 dBm), fr2 (59 dBm)");
  opt(app, "--mode", flags.mode, "ro (reflective) or bo (beamforming)");
  opt(app, "--target", flags.target, "beam target \"x,y,h\" [m] for --mode bo");
  opt(app, "--area", flags.area, "side of the square evaluation area [m] (default 10)");
  opt(app, "--res", flags.res, "grid resolution [m] (default 0.05)");
  opt(app, "--pattern-exp", flags.pattern_exp, "element pattern exponent q in cos^q (default 3, 0 = isotropic)");
  app.add_flag_callback("--azimuth-pattern", [&flags] { flags.azimuth_pattern = true; },
                        "apply the element pattern in azimuth as well");
  opt(app, "--authority", flags.authority, "ITU, WHO, ICNIRP, USA, FLANDERS or CHINA");
  opt(app, "--limits-file", flags.limits_file, "regulatory table JSON replacing the built-in one");
  opt(app, "--limit-vpm", flags.limit_vpm, "explicit limit [V/m] for the solvers");
  opt(app, "--limit-dbv", flags.limit_dbv, "explicit limit [dBV/m] for the solvers");
  opt(app, "--out", flags.out, "write the report to this path instead of stdout");
  opt(app, "--format", flags.format, "csv or json");

  auto* map = app.add_subcommand("map", "E-field map over the evaluation grid");
  auto* peaks = app.add_subcommand("peaks", "local and global maxima of the E-field map");
  auto* boresight = app.add_subcommand("boresight", "near-field peaks along the boresight");
  opt(*boresight, "--y-min", flags.y_min, "scan start [m] (csv only, default 0.001)");
  opt(*boresight, "--y-max", flags.y_max, "scan end [m] (default 100)");
  opt(*boresight, "--spd", flags.spd, "samples per decade (default 200)");
  auto* limits = app.add_subcommand("limits", "regulatory E-field limit lookup");
  auto* min_dist = app.add_subcommand("min-dist", "minimum BS-RIS distance meeting a limit");
  auto* min_height = app.add_subcommand("min-height", "minimum RIS height meeting a limit");
  opt(*min_height, "--h-min", flags.h_min, "lowest candidate height [m] (default h_user)");
  opt(*min_height, "--h-max", flags.h_max, "highest candidate height [m] (default 10)");
  auto* regions = app.add_subcommand("regions", "reactive/radiating near-field and far-field bounds");
  auto* verify = app.add_subcommand("verify", "compare the field engine with the reference oracle");
  opt(*verify, "--seed", flags.seed, "random seed (default 0)");
  opt(*verify, "--cases", flags.cases, "number of random points (default 1000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ris-emf: error: " << e.what() << '\n';
    return kExitInvalid;
  }

  if (flags.pmax_dbm && flags.eirp) invalid("eirp: give either --pmax-dbm or --eirp, not both");
  Context ctx;
  ctx.settings = merged(config_path ? load_config(*config_path) : Settings{}, flags);
  const auto& s = ctx.settings;

  const bool tabular = map->parsed();
  if (s.format) {
    const auto f = lower(*s.format);
    if (f == "csv") {
      ctx.format = Format::Csv;
    } else if (f == "json") {
      ctx.format = Format::Json;
    } else {
      invalid("format: expected 'csv' or 'json', got '" + *s.format + "'");
    }
  } else {
    ctx.format = tabular ? Format::Csv : Format::Json;
  }

  std::ostringstream buffer;
  ctx.out = &buffer;
  int code = kExitOk;
  if (map->parsed()) code = cmd_map(ctx);
  else if (peaks->parsed()) code = cmd_peaks(ctx);
  else if (boresight->parsed()) code = cmd_boresight(ctx);
  else if (limits->parsed()) code = cmd_limits(ctx);
  else if (min_dist->parsed()) code = cmd_min_dist(ctx);
  else if (min_height->parsed()) code = cmd_min_height(ctx);
  else if (regions->parsed()) code = cmd_regions(ctx);
  else if (verify->parsed()) code = cmd_verify(ctx);

  if (s.out) {
    std::ofstream file(*s.out, std::ios::binary | std::ios::trunc);
    if (!file) invalid("out: cannot open '" + *s.out + "' for writing");
    file << buffer.str();
    if (!file) invalid("out: write to '" + *s.out + "' failed");
  } else {
    std::cout << buffer.str() << std::flush;
  }
  return code;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CliError& e) {
    std::cerr << "ris-emf: error: " << e.what() << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "ris-emf: error: " << e.what() << '\n';
    return kExitInvalid;
  }
}
