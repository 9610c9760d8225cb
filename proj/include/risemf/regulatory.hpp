#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace risemf {

enum class Authority { Itu, Who, Icnirp, Usa, Flanders, China };

std::string_view to_string(Authority authority);
Authority parse_authority(std::string_view name);

enum class Interpolation {
  Constant,
  SqrtF,   // coefficient * sqrt(f in MHz)
  LinearF, // straight line between the band endpoints
};

struct LimitBand {
  double f_low_hz = 0.0;
  double f_high_hz = 0.0;
  double limit_low_vpm = 0.0;
  double limit_high_vpm = 0.0;
  Interpolation interpolation = Interpolation::Constant;
  double sqrt_coefficient = 0.0; // V/m per sqrt(MHz), SqrtF only

  bool contains(double frequency_hz) const noexcept {
    return frequency_hz >= f_low_hz && frequency_hz <= f_high_hz;
  }
  double limit_at(double frequency_hz) const;
};

struct RegulatoryProfile {
  Authority authority = Authority::Itu;
  std::vector<LimitBand> bands; // ascending, non-overlapping (endpoints may be shared)

  void validate() const;
};

/// General-public E-field limit at frequency_hz. Where two bands share an
/// endpoint the stricter limit applies. Throws NoLimitDefined outside every band.
double limit_lookup(const RegulatoryProfile& profile, double frequency_hz);

class RegulatoryDatabase {
public:
  static RegulatoryDatabase from_json(std::string_view text);
  static RegulatoryDatabase load(const std::filesystem::path& path);

  /// Table compiled into the library from data/regulatory_limits.json.
  static const RegulatoryDatabase& builtin();

  const RegulatoryProfile& profile(Authority authority) const;
  const std::string& table_version() const noexcept { return table_version_; }
  const std::map<Authority, RegulatoryProfile>& profiles() const noexcept { return profiles_; }

private:
  std::string table_version_;
  std::map<Authority, RegulatoryProfile> profiles_;
};

} // namespace risemf
