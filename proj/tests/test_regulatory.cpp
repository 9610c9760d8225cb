#include <doctest.h>

#include "risemf/error.hpp"
#include "risemf/regulatory.hpp"

#include <cmath>
#include <string>

using namespace risemf;

namespace {

double lookup(Authority a, double f) { return limit_lookup(RegulatoryDatabase::builtin().profile(a), f); }

// Round to the number of decimals printed in the regulation table.
double printed(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

struct TableEntry {
  Authority authority;
  double f_low_hz;
  double f_high_hz;
  double limit_low;
  double limit_high;
  int decimals;
};

// General-public column of the regulation overview table.
const TableEntry kTable[] = {
    {Authority::Itu, 400e6, 2000e6, 27.5, 61.5, 1},
    {Authority::Itu, 2e9, 300e9, 61.0, 61.0, 0},
    {Authority::Who, 100e3, 300e9, 41.25, 41.25, 2},
    {Authority::Icnirp, 400e6, 2000e6, 27.5, 61.5, 1},
    {Authority::Usa, 300e6, 1500e6, 27.46, 61.4, 2},
    {Authority::Usa, 1.5e9, 100e9, 61.4, 61.4, 1},
    {Authority::Flanders, 400e6, 2000e6, 13.7, 30.7, 1},
    {Authority::Flanders, 2e9, 300e9, 30.7, 30.7, 1},
    {Authority::China, 30e6, 3000e6, 12.0, 12.0, 0},
    {Authority::China, 3e9, 15e9, 12.0, 27.0, 0},
    {Authority::China, 15e9, 300e9, 27.0, 27.0, 0},
};

const LimitBand& band_for(const TableEntry& t) {
  for (const LimitBand& b : RegulatoryDatabase::builtin().profile(t.authority).bands) {
    if (b.f_low_hz == t.f_low_hz && b.f_high_hz == t.f_high_hz) return b;
  }
  FAIL("band missing from table");
  throw;
}

} // namespace

TEST_CASE("builtin table loads") {
  const auto& db = RegulatoryDatabase::builtin();
  CHECK(db.table_version() == "2024.1-general-public");
  CHECK(db.profiles().size() == 6);
}

TEST_CASE("limit lookup examples") {
  CHECK(lookup(Authority::Flanders, 3.5e9) == 30.7);
  CHECK(lookup(Authority::Itu, 28e9) == 61.0);
  CHECK(lookup(Authority::Itu, 900e6) == doctest::Approx(41.25).epsilon(1e-12));
  CHECK(lookup(Authority::Icnirp, 900e6) == doctest::Approx(41.25).epsilon(1e-12));
  CHECK(lookup(Authority::Who, 3.5e9) == 41.25);
  CHECK(lookup(Authority::China, 9e9) == doctest::Approx(19.5).epsilon(1e-12));
}

TEST_CASE("every table entry is reproduced at its band endpoints") {
  for (const TableEntry& t : kTable) {
    CAPTURE(to_string(t.authority));
    CAPTURE(t.f_low_hz);
    const LimitBand& band = band_for(t);
    CHECK(printed(band.limit_at(t.f_low_hz), t.decimals) == t.limit_low);
    CHECK(printed(band.limit_at(t.f_high_hz), t.decimals) == t.limit_high);
    if (band.interpolation != Interpolation::SqrtF) {
      CHECK(band.limit_at(t.f_low_hz) == t.limit_low);
      CHECK(band.limit_at(t.f_high_hz) == t.limit_high);
    }
  }
}

TEST_CASE("shared band endpoints take the stricter limit") {
  CHECK(lookup(Authority::Itu, 2e9) == 61.0);
  CHECK(lookup(Authority::Usa, 1.5e9) == doctest::Approx(61.4).epsilon(1e-4));
  CHECK(lookup(Authority::Usa, 1.5e9) <= 61.4);
  CHECK(lookup(Authority::China, 3e9) == 12.0);
}

TEST_CASE("out-of-band frequencies have no limit") {
  try {
    (void)lookup(Authority::Icnirp, 28e9);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoLimitDefined);
    CHECK(std::string(e.what()).find("no limit defined") != std::string::npos);
  }
  CHECK_THROWS_AS(lookup(Authority::China, 10e6), Error);
  CHECK_THROWS_AS(lookup(Authority::Itu, 350e9), Error);
}

TEST_CASE("interpolated bands are continuous") {
  for (const auto& [authority, profile] : RegulatoryDatabase::builtin().profiles()) {
    for (const LimitBand& b : profile.bands) {
      if (b.interpolation == Interpolation::Constant) continue;
      const double step = (b.f_high_hz - b.f_low_hz) / 1000.0;
      for (double f = b.f_low_hz; f + step <= b.f_high_hz; f += step) {
        CHECK(std::abs(b.limit_at(f + step) - b.limit_at(f)) < 0.1);
        CHECK(b.limit_at(f + step) >= b.limit_at(f));
      }
    }
  }
}

TEST_CASE("authority names") {
  CHECK(parse_authority("flanders") == Authority::Flanders);
  CHECK(parse_authority("ITU") == Authority::Itu);
  CHECK(to_string(Authority::Icnirp) == "ICNIRP");
  CHECK_THROWS_AS(parse_authority("EU"), Error);
}

TEST_CASE("table validation") {
  const char* overlapping = R"({"schema_version":1,"table_version":"t","authorities":{"ITU":[
    {"f_low_hz":1e9,"f_high_hz":3e9,"limit_low_vpm":5,"limit_high_vpm":5,"interpolation":"CONSTANT"},
    {"f_low_hz":2e9,"f_high_hz":4e9,"limit_low_vpm":5,"limit_high_vpm":5,"interpolation":"CONSTANT"}]}})";
  CHECK_THROWS_AS(RegulatoryDatabase::from_json(overlapping), Error);

  const char* uneven = R"({"schema_version":1,"table_version":"t","authorities":{"ITU":[
    {"f_low_hz":1e9,"f_high_hz":3e9,"limit_low_vpm":5,"limit_high_vpm":6,"interpolation":"CONSTANT"}]}})";
  CHECK_THROWS_AS(RegulatoryDatabase::from_json(uneven), Error);

  const char* unknown_key = R"({"schema_version":1,"table_version":"t","authorities":{"ITU":[
    {"f_low_hz":1e9,"f_high_hz":3e9,"limit_low_vpm":5,"limit_high_vpm":5,"interpolation":"CONSTANT","x":1}]}})";
  CHECK_THROWS_AS(RegulatoryDatabase::from_json(unknown_key), Error);

  CHECK_THROWS_AS(RegulatoryDatabase::from_json("{not json"), Error);

  const char* ok = R"({"schema_version":1,"table_version":"custom","authorities":{"WHO":[
    {"f_low_hz":1e9,"f_high_hz":3e9,"limit_low_vpm":9,"limit_high_vpm":9,"interpolation":"CONSTANT"}]}})";
  const auto db = RegulatoryDatabase::from_json(ok);
  CHECK(db.table_version() == "custom");
  CHECK(limit_lookup(db.profile(Authority::Who), 2e9) == 9.0);
  CHECK_THROWS_AS(db.profile(Authority::Itu), Error);
}

TEST_CASE("shipped data file matches the builtin table") {
  const auto db = RegulatoryDatabase::load(std::string(RIS_EMF_DATA_DIR) + "/regulatory_limits.json");
  CHECK(db.table_version() == RegulatoryDatabase::builtin().table_version());
  CHECK(limit_lookup(db.profile(Authority::Flanders), 3.5e9) == 30.7);
  CHECK_THROWS_AS(RegulatoryDatabase::load("/nonexistent/limits.json"), Error);
}
