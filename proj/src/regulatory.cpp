#include "risemf/regulatory.hpp"

#include "risemf/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace risemf {

namespace detail {
extern const std::string_view kBuiltinRegulatoryTable;
}

namespace {

using nlohmann::json;

constexpr struct {
  Authority authority;
  std::string_view name;
} kAuthorityNames[] = {
    {Authority::Itu, "ITU"},           {Authority::Who, "WHO"}, {Authority::Icnirp, "ICNIRP"},
    {Authority::Usa, "USA"},           {Authority::Flanders, "FLANDERS"},
    {Authority::China, "CHINA"},
};

std::string format_frequency(double hz) {
  std::ostringstream os;
  if (hz >= 1e9) {
    os << hz / 1e9 << " GHz";
  } else {
    os << hz / 1e6 << " MHz";
  }
  return os.str();
}

Interpolation parse_interpolation(const std::string& name) {
  if (name == "CONSTANT") return Interpolation::Constant;
  if (name == "SQRT_F") return Interpolation::SqrtF;
  if (name == "LINEAR_F") return Interpolation::LinearF;
  detail::fail(ErrorCode::Parse, "unknown interpolation '" + name + "'");
}

LimitBand parse_band(const json& j) {
  static constexpr std::string_view kKeys[] = {"f_low_hz",       "f_high_hz",     "limit_low_vpm",
                                               "limit_high_vpm", "interpolation",
                                               "coefficient_vpm_per_sqrt_mhz"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      detail::fail(ErrorCode::Parse, "unknown band key '" + key + "'");
    }
  }
  LimitBand band;
  band.f_low_hz = j.at("f_low_hz").get<double>();
  band.f_high_hz = j.at("f_high_hz").get<double>();
  band.limit_low_vpm = j.at("limit_low_vpm").get<double>();
  band.limit_high_vpm = j.at("limit_high_vpm").get<double>();
  band.interpolation = parse_interpolation(j.at("interpolation").get<std::string>());
  if (band.interpolation == Interpolation::SqrtF) {
    band.sqrt_coefficient = j.at("coefficient_vpm_per_sqrt_mhz").get<double>();
  }
  return band;
}

} // namespace

std::string_view to_string(Authority authority) {
  for (const auto& entry : kAuthorityNames) {
    if (entry.authority == authority) return entry.name;
  }
  return "UNKNOWN";
}

Authority parse_authority(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto& entry : kAuthorityNames) {
    if (entry.name == key) return entry.authority;
  }
  detail::fail(ErrorCode::InvalidArgument, "unknown authority '" + std::string(name) + "'");
}

double LimitBand::limit_at(double frequency_hz) const {
  switch (interpolation) {
  case Interpolation::Constant:
    return limit_low_vpm;
  case Interpolation::SqrtF:
    return sqrt_coefficient * std::sqrt(frequency_hz / 1e6);
  case Interpolation::LinearF: {
    const double t = (frequency_hz - f_low_hz) / (f_high_hz - f_low_hz);
    return limit_low_vpm + t * (limit_high_vpm - limit_low_vpm);
  }
  }
  return limit_low_vpm;
}

void RegulatoryProfile::validate() const {
  const std::string who(to_string(authority));
  double previous_high = 0.0;
  for (const LimitBand& b : bands) {
    detail::require(b.f_low_hz > 0.0 && b.f_low_hz < b.f_high_hz, who + ": band range must be ascending");
    detail::require(b.f_low_hz >= previous_high, who + ": bands overlap or are out of order");
    detail::require(b.limit_low_vpm > 0.0 && b.limit_high_vpm > 0.0, who + ": limits must be positive");
    if (b.interpolation == Interpolation::Constant) {
      detail::require(b.limit_low_vpm == b.limit_high_vpm, who + ": constant band with differing endpoints");
    }
    if (b.interpolation == Interpolation::SqrtF) {
      detail::require(b.sqrt_coefficient > 0.0, who + ": sqrt band needs a positive coefficient");
    }
    previous_high = b.f_high_hz;
  }
}

double limit_lookup(const RegulatoryProfile& profile, double frequency_hz) {
  detail::require(std::isfinite(frequency_hz) && frequency_hz > 0.0, "frequency must be positive");
  std::optional<double> limit;
  for (const LimitBand& band : profile.bands) {
    if (!band.contains(frequency_hz)) continue;
    const double v = band.limit_at(frequency_hz);
    limit = limit ? std::min(*limit, v) : v;
  }
  if (!limit) {
    detail::fail(ErrorCode::NoLimitDefined, std::string(to_string(profile.authority)) +
                                                ": no limit defined at " + format_frequency(frequency_hz));
  }
  return *limit;
}

RegulatoryDatabase RegulatoryDatabase::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    detail::fail(ErrorCode::Parse, std::string("regulatory table: ") + e.what());
  }
  RegulatoryDatabase db;
  try {
    detail::require(doc.at("schema_version").get<int>() == 1, "unsupported regulatory schema version");
    db.table_version_ = doc.at("table_version").get<std::string>();
    for (const auto& [name, bands] : doc.at("authorities").items()) {
      RegulatoryProfile profile;
      profile.authority = parse_authority(name);
      for (const json& band : bands) profile.bands.push_back(parse_band(band));
      profile.validate();
      db.profiles_[profile.authority] = std::move(profile);
    }
  } catch (const json::exception& e) {
    detail::fail(ErrorCode::Parse, std::string("regulatory table: ") + e.what());
  }
  return db;
}

RegulatoryDatabase RegulatoryDatabase::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) detail::fail(ErrorCode::Parse, "cannot open regulatory table " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

const RegulatoryDatabase& RegulatoryDatabase::builtin() {
  static const RegulatoryDatabase db = from_json(detail::kBuiltinRegulatoryTable);
  return db;
}

const RegulatoryProfile& RegulatoryDatabase::profile(Authority authority) const {
  const auto it = profiles_.find(authority);
  if (it == profiles_.end()) {
    detail::fail(ErrorCode::NoLimitDefined,
                 std::string(to_string(authority)) + ": no limits in table " + table_version_);
  }
  return it->second;
}

} // namespace risemf
