#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nnts/core.hpp"
#include "nnts/harness.hpp"
#include "nnts/mle.hpp"
#include "nnts/sum.hpp"
#include "nnts/uniformity.hpp"

namespace nnts {

using json = nlohmann::json;

enum class AngleUnit { Radians, Degrees, YearFraction };

const char* to_string(AngleUnit unit);
std::optional<AngleUnit> parse_angle_unit(std::string_view name);

// Radians reduced into [0, 2pi): degrees * pi/180, year fraction * 2pi.
double to_radians(double value, AngleUnit unit);

struct AngleFileSpec {
  std::filesystem::path path;
  AngleUnit unit = AngleUnit::Radians;
  bool has_header = false;
};

// One value per row; blank rows are skipped. Every malformed row is
// collected into one ParseError; an unreadable file is an IoError.
AngleSample parse_angles(const AngleFileSpec& spec);
AngleSample parse_angles(std::istream& in, AngleUnit unit, bool has_header);

// --- Fixtures: pigeon vanishing bearings, in degrees ------------------------

enum class FixtureName { PigeonReducedC, PigeonReducedON, PigeonCompleteC, PigeonCompleteON, PigeonCompleteV1 };

struct Fixture {
  FixtureName name;
  std::span<const int> degrees;
  AngleSample angles;
};

const char* to_string(FixtureName name);  // e.g. "pigeon-reduced-c"
std::optional<FixtureName> parse_fixture_name(std::string_view name);
const std::vector<FixtureName>& all_fixtures();
Fixture fixture(FixtureName name);

// FNV-1a (64-bit) of the comma-separated degree listing, e.g. "5,20,45".
std::uint64_t fixture_checksum(const Fixture& f);

// --- JSON -------------------------------------------------------------------

// {"m": M, "c": [[re, im], ...]}. Reading accepts non-canonical vectors and
// canonicalizes them; canonical input is kept bit-exact.
json params_to_json(const NntsParams& params);
NntsParams params_from_json(const json& j);
NntsParams read_params_file(const std::filesystem::path& path);

struct Manifest {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::string version;
};

std::string library_version();
json manifest_to_json(const Manifest& m);

json to_json(const FitResult& fit, std::size_t n);
json to_json(const TestOutcome& outcome);
json to_json(const SumResult& result);
json to_json(const Spectrum& spectrum);
json to_json(const PowerReport& report);

}  // namespace nnts
