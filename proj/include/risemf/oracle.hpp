#pragma once

#include "risemf/efield.hpp"

#include <cstddef>
#include <cstdint>

namespace risemf {

struct PhasorSum {
  double real_part = 0.0;
  double imag_part = 0.0;
  double magnitude = 0.0;
};

/// Brute-force reference for efield_at. Rebuilds the element lattice and the
/// link budget from the scenario parameters, evaluates the angles and gains
/// literally, and accumulates the complex sum in extended precision with
/// compensated summation. Shares no code with FieldEngine.
PhasorSum oracle_efield(const Scenario& scenario, const Point3& p);

struct VerificationReport {
  std::size_t cases = 0;
  double max_relative_difference = 0.0;
  Point3 worst_point;
  double worst_engine_vpm = 0.0;
  double worst_oracle_vpm = 0.0;
};

/// Compares the engine against the oracle at `cases` pseudo-random points in
/// x in [-D/2, D/2], y in (0, D], h in [0, 2 h_ris]. Deterministic for a seed.
VerificationReport verify_against_oracle(const Scenario& scenario, std::uint64_t seed,
                                         std::size_t cases, double area_side_m);

} // namespace risemf
