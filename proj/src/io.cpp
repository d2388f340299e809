#include "nnts/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <numbers>

namespace nnts {

namespace {

constexpr int kReducedC[] = {5,   20,  45,  50,  145, 170, 205, 210, 210, 210, 215, 230, 230,
                             240, 240, 270, 270, 300, 310, 310, 310, 320, 330, 340, 350};
constexpr int kReducedON[] = {20,  40,  45,  50,  60,  60,  60,  70,  80,  90,  90,  90,  110,
                              130, 140, 170, 210, 210, 215, 230, 270, 270, 295, 320, 325};
constexpr int kCompleteC[] = {1,   2,   3,   8,   10,  10,  10,  12,  14,  18,  18,  19,  42,  46,
                              46,  48,  52,  54,  58,  86,  92,  108, 131, 274, 306, 310, 320, 324,
                              327, 328, 333, 334, 334, 336, 342, 346, 350, 350, 352, 354, 358};
constexpr int kCompleteON[] = {4,   11,  38,  47,  52,  79,  106, 106, 120, 126, 138, 142, 146, 154,
                               158, 182, 194, 252, 268, 292, 292, 298, 308, 323, 324, 338, 344};
constexpr int kCompleteV1[] = {3,  4,  4,   4,   6,   6,   8,   16,  17,  21,  22,  24,  24,  40,
                               44, 46, 70,  80,  81,  84,  88,  102, 124, 267, 294, 304, 322, 334,
                               336, 338, 339, 342, 344, 349, 353, 354, 354, 356, 358, 358};

std::span<const int> fixture_degrees(FixtureName name) {
  switch (name) {
    case FixtureName::PigeonReducedC: return kReducedC;
    case FixtureName::PigeonReducedON: return kReducedON;
    case FixtureName::PigeonCompleteC: return kCompleteC;
    case FixtureName::PigeonCompleteON: return kCompleteON;
    case FixtureName::PigeonCompleteV1: return kCompleteV1;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown fixture");
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

double number_at(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorKind::InvalidParameter, std::string(what) + " must be a number");
  return j.get<double>();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

const char* to_string(AngleUnit unit) {
  switch (unit) {
    case AngleUnit::Radians: return "radians";
    case AngleUnit::Degrees: return "degrees";
    case AngleUnit::YearFraction: return "year-fraction";
  }
  return "unknown";
}

std::optional<AngleUnit> parse_angle_unit(std::string_view name) {
  for (AngleUnit u : {AngleUnit::Radians, AngleUnit::Degrees, AngleUnit::YearFraction})
    if (name == to_string(u)) return u;
  return std::nullopt;
}

double to_radians(double value, AngleUnit unit) {
  switch (unit) {
    case AngleUnit::Radians: return reduce_angle(value);
    case AngleUnit::Degrees: return reduce_angle(value * std::numbers::pi / 180.0);
    case AngleUnit::YearFraction: return reduce_angle(value * kTwoPi);
  }
  return value;
}

AngleSample parse_angles(std::istream& in, AngleUnit unit, bool has_header) {
  std::vector<double> angles;
  std::vector<std::size_t> bad;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && has_header) continue;
    const std::string_view field = trim(line);
    if (field.empty()) continue;
    if (auto v = parse_double(field))
      angles.push_back(to_radians(*v, unit));
    else
      bad.push_back(row);
  }
  if (in.bad()) throw Error(ErrorKind::IoError, "read error");
  if (!bad.empty()) {
    std::string rows;
    for (std::size_t r : bad) rows += (rows.empty() ? "" : ", ") + std::to_string(r);
    throw ParseError("non-numeric value on row(s) " + rows, std::move(bad));
  }
  return AngleSample(std::move(angles));
}

AngleSample parse_angles(const AngleFileSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + spec.path.string());
  return parse_angles(in, spec.unit, spec.has_header);
}

// --- Fixtures ---------------------------------------------------------------

const char* to_string(FixtureName name) {
  switch (name) {
    case FixtureName::PigeonReducedC: return "pigeon-reduced-c";
    case FixtureName::PigeonReducedON: return "pigeon-reduced-on";
    case FixtureName::PigeonCompleteC: return "pigeon-complete-c";
    case FixtureName::PigeonCompleteON: return "pigeon-complete-on";
    case FixtureName::PigeonCompleteV1: return "pigeon-complete-v1";
  }
  return "unknown";
}

const std::vector<FixtureName>& all_fixtures() {
  static const std::vector<FixtureName> names = {FixtureName::PigeonReducedC, FixtureName::PigeonReducedON,
                                                 FixtureName::PigeonCompleteC, FixtureName::PigeonCompleteON,
                                                 FixtureName::PigeonCompleteV1};
  return names;
}

std::optional<FixtureName> parse_fixture_name(std::string_view name) {
  for (FixtureName f : all_fixtures())
    if (name == to_string(f)) return f;
  return std::nullopt;
}

Fixture fixture(FixtureName name) {
  const std::span<const int> deg = fixture_degrees(name);
  std::vector<double> rad;
  rad.reserve(deg.size());
  for (int d : deg) rad.push_back(to_radians(d, AngleUnit::Degrees));
  return {name, deg, AngleSample(std::move(rad))};
}

std::uint64_t fixture_checksum(const Fixture& f) {
  std::string listing;
  for (int d : f.degrees) listing += (listing.empty() ? "" : ",") + std::to_string(d);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : listing) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// --- JSON -------------------------------------------------------------------

json params_to_json(const NntsParams& params) {
  json c = json::array();
  for (int k = 0; k <= params.m(); ++k) c.push_back({params[k].real(), params[k].imag()});
  return {{"m", params.m()}, {"c", std::move(c)}};
}

NntsParams params_from_json(const json& j) {
  if (!j.is_object() || !j.contains("c") || !j.at("c").is_array())
    throw Error(ErrorKind::InvalidParameter, "params JSON needs a \"c\" array");
  const json& arr = j.at("c");
  CoeffVector c(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const json& entry = arr[k];
    if (!entry.is_array() || entry.size() != 2)
      throw Error(ErrorKind::InvalidParameter, "each coefficient must be [re, im]");
    c(static_cast<Eigen::Index>(k)) = Complex(number_at(entry[0], "re"), number_at(entry[1], "im"));
  }
  if (j.contains("m")) {
    if (!j.at("m").is_number_integer() || j.at("m").get<long long>() + 1 != static_cast<long long>(arr.size()))
      throw Error(ErrorKind::InvalidParameter, "\"m\" disagrees with the number of coefficients");
  }
  if (c.size() == 0) throw Error(ErrorKind::InvalidParameter, "empty coefficient vector");
  try {
    return NntsParams::from_canonical(c);
  } catch (const Error&) {
    return NntsParams::canonicalize(c);
  }
}

NntsParams read_params_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidParameter, path.string() + ": " + e.what());
  }
  return params_from_json(j);
}

std::string library_version() { return NNTS_VERSION; }

json manifest_to_json(const Manifest& m) {
  return {{"command", m.command}, {"seed", m.seed ? json(*m.seed) : json(nullptr)}, {"version", m.version}};
}

json to_json(const FitResult& fit, std::size_t n) {
  return {{"params", params_to_json(fit.params)},
          {"log_lik", fit.log_lik},
          {"n", n},
          {"iterations", fit.iterations},
          {"converged", fit.converged},
          {"grad_norm", fit.grad_norm},
          {"restarts_used", fit.restarts_used}};
}

json to_json(const TestOutcome& o) {
  json j = {{"method", to_string(o.method)},
            {"statistic", o.statistic},
            {"n", o.n},
            {"alpha", o.alpha},
            {"critical_value", optional_number(o.critical_value)},
            {"p_value", optional_number(o.p_value)},
            {"decision", to_string(o.decision)},
            {"seed", o.seed ? json(*o.seed) : json(nullptr)}};
  if (is_nnts(o.method)) j["m"] = o.m;
  if (o.fit) j["fit"] = to_json(*o.fit, o.n);
  return j;
}

json to_json(const SumResult& r) {
  return {{"params", params_to_json(r.params)},
          {"m_sum", r.m_sum},
          {"method", to_string(r.method)},
          {"residual", r.residual},
          {"spectrum_discrepancy", r.spectrum_discrepancy}};
}

json to_json(const Spectrum& s) {
  json phi = json::array();
  for (int t = -s.m(); t <= s.m(); ++t) phi.push_back({{"t", t}, {"re", s(t).real()}, {"im", s(t).imag()}});
  return {{"m", s.m()}, {"phi", std::move(phi)}};
}

json to_json(const PowerReport& r) {
  json entries = json::array();
  for (const PowerEntry& e : r.entries) {
    json item = {{"method", to_string(e.method.method)},
                 {"critical_value", e.critical_value},
                 {"simulated_cv", e.simulated_cv},
                 {"rejection_pct", e.rejection_pct},
                 {"rounded_pct", e.rounded_pct}};
    if (is_nnts(e.method.method)) item["m"] = e.method.m;
    entries.push_back(std::move(item));
  }
  return {{"alternative", params_to_json(r.alternative)},
          {"n", r.n},
          {"alpha", r.alpha},
          {"reps", r.reps},
          {"entries", std::move(entries)}};
}

}  // namespace nnts
