#include "risemf/oracle.hpp"

#include "risemf/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace risemf {

namespace {

using Real = long double;

constexpr Real kPiL = 3.141592653589793238462643383279502884L;
constexpr Real kLightSpeed = 299792458.0L;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  void add(Real v) {
    const Real t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + carry_; }

private:
  Real sum_ = 0.0L;
  Real carry_ = 0.0L;
};

struct Element {
  Real x;
  Real h;
};

Real pattern_lobe(Real angle, Real exponent) {
  if (!(std::fabs(angle) < kPiL / 2.0L)) return 0.0L;
  if (exponent == 0.0L) return 1.0L;
  return std::pow(std::cos(angle), exponent);
}

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

PhasorSum oracle_efield(const Scenario& scenario, const Point3& p) {
  const ScenarioParams& sp = scenario.params();
  if (!(p.y > 0.0)) {
    detail::fail(ErrorCode::BehindPlane, "evaluation point must lie in front of the RIS (y > 0)");
  }

  const Real lambda = kLightSpeed / static_cast<Real>(sp.frequency_hz);
  const Real spacing = sp.spacing_m ? static_cast<Real>(*sp.spacing_m)
                                    : static_cast<Real>(sp.spacing_fraction) * lambda;
  const Real path = lambda / (4.0L * kPiL * static_cast<Real>(sp.d_br_m));
  const Real p_ris = static_cast<Real>(sp.p_max_w) * path * path;
  const Real k = 2.0L * kPiL / lambda;
  const Real exponent = sp.pattern.exponent;

  const int n = sp.n_per_side;
  std::vector<Element> lattice;
  lattice.reserve(static_cast<std::size_t>(n) * n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const Real x = (static_cast<Real>(col) - (n - 1) / 2.0L) * spacing;
      const Real h = static_cast<Real>(sp.h_ris_m) + (static_cast<Real>(row) - (n - 1) / 2.0L) * spacing;
      lattice.push_back({x, h});
    }
  }

  const Real xu = p.x;
  const Real yu = p.y;
  const Real hu = p.h;
  CompensatedSum re;
  CompensatedSum im;
  for (const Element& e : lattice) {
    const Real dx = e.x - xu;
    const Real dy = 0.0L - yu;
    const Real dh = e.h - hu;
    const Real r = std::sqrt(dx * dx + dy * dy + dh * dh);
    if (r <= kCoincidenceTolerance) {
      detail::fail(ErrorCode::CoincidentPoint, "evaluation point coincides with a RIS element");
    }
    const Real psi = std::atan(dx / dy);
    const Real theta = std::atan(dh / std::sqrt(dx * dx + dy * dy));
    Real gain = pattern_lobe(theta, exponent);
    if (sp.pattern.include_azimuth) gain *= pattern_lobe(psi, exponent);

    Real dphi = k * r;
    if (sp.mode == Mode::Beamforming) {
      const Point3& t = *sp.target;
      const Real tx = e.x - t.x;
      const Real ty = 0.0L - t.y;
      const Real th = e.h - t.h;
      dphi -= k * std::sqrt(tx * tx + ty * ty + th * th);
    }
    const Real w = std::sqrt(gain) / r;
    re.add(w * std::cos(-dphi));
    im.add(w * std::sin(-dphi));
  }

  const Real scale = std::sqrt(60.0L * p_ris);
  const Real real_part = scale * re.value();
  const Real imag_part = scale * im.value();
  PhasorSum out;
  out.real_part = static_cast<double>(real_part);
  out.imag_part = static_cast<double>(imag_part);
  out.magnitude = static_cast<double>(std::hypot(real_part, imag_part));
  return out;
}

VerificationReport verify_against_oracle(const Scenario& scenario, std::uint64_t seed,
                                         std::size_t cases, double area_side_m) {
  detail::require(cases >= 1, "verification needs at least one case");
  detail::require(std::isfinite(area_side_m) && area_side_m > 0.0, "area side must be positive");
  std::mt19937_64 rng(seed);
  const FieldEngine engine(scenario);
  const double h_top = 2.0 * scenario.array().center().h;

  VerificationReport report;
  report.cases = cases;
  for (std::size_t i = 0; i < cases; ++i) {
    Point3 p;
    p.x = (uniform(rng) - 0.5) * area_side_m;
    p.y = (1.0 - uniform(rng)) * area_side_m;
    p.h = uniform(rng) * h_top;
    const double e = engine.at(p);
    const double o = oracle_efield(scenario, p).magnitude;
    const double rel = o > 0.0 ? std::abs(e - o) / o : std::abs(e);
    if (i == 0 || rel > report.max_relative_difference) {
      report.max_relative_difference = rel;
      report.worst_point = p;
      report.worst_engine_vpm = e;
      report.worst_oracle_vpm = o;
    }
  }
  return report;
}

} // namespace risemf
