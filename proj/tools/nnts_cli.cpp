// Command-line front end: nnts <subcommand> [flags]. Exit status 0 on
// success, 1 on usage errors, 2 when a computation fails.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nnts/classical.hpp"
#include "nnts/harness.hpp"
#include "nnts/io.hpp"
#include "nnts/mle.hpp"
#include "nnts/sum.hpp"
#include "nnts/uniformity.hpp"

namespace fs = std::filesystem;
using namespace nnts;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Where results go, plus the manifest that accompanies them.
struct Sink {
  std::string output;  // empty = stdout
  Manifest manifest;

  void json_out(json body) const {
    body["manifest"] = manifest_to_json(manifest);
    emit(body.dump(2) + "\n");
  }

  // CSV with a sidecar manifest file, or a leading comment line on stdout.
  void csv_out(const std::string& body) const {
    if (output.empty()) {
      std::cout << "# manifest: " << manifest_to_json(manifest).dump() << "\n" << body;
      return;
    }
    emit(body);
    std::ofstream side(output + ".manifest.json");
    if (!side) throw Error(ErrorKind::IoError, "cannot write " + output + ".manifest.json");
    side << manifest_to_json(manifest).dump(2) << "\n";
  }

 private:
  void emit(const std::string& text) const {
    if (output.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(output);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + output);
    out << text;
  }
};

struct InputFlags {
  std::string input;
  std::string fixture;
  std::string unit;
  bool degrees = false;
  bool header = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--input", input, "Angle file, one value per row");
    cmd->add_option("--fixture", fixture, "Embedded data set (see `fixtures`)");
    cmd->add_option("--unit", unit, "radians | degrees | year-fraction (default radians)");
    cmd->add_flag("--degrees", degrees, "Shorthand for --unit degrees");
    cmd->add_flag("--header", header, "Skip the first row of --input");
  }

  AngleSample load() const {
    if (input.empty() == fixture.empty()) throw UsageError("give exactly one of --input or --fixture");
    if (!fixture.empty()) {
      const auto name = parse_fixture_name(fixture);
      if (!name) throw UsageError("unknown fixture '" + fixture + "'");
      return nnts::fixture(*name).angles;
    }
    AngleUnit u = degrees ? AngleUnit::Degrees : AngleUnit::Radians;
    if (!unit.empty()) {
      const auto parsed = parse_angle_unit(unit);
      if (!parsed) throw UsageError("unknown unit '" + unit + "'");
      u = *parsed;
    }
    return parse_angles(AngleFileSpec{input, u, header});
  }
};

double parse_alpha(double alpha) {
  alpha_index(alpha);
  return alpha;
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const std::string& what) {
  if (!seed) throw UsageError(what + " is stochastic and needs --seed");
  return *seed;
}

std::string density_csv(const NntsParams& params, int grid) {
  if (grid < 1) throw UsageError("--grid must be positive");
  std::ostringstream out;
  out.precision(17);
  out << "theta,density\n";
  for (int i = 0; i < grid; ++i) {
    const double theta = kTwoPi * i / grid;
    out << theta << "," << density(params, theta) << "\n";
  }
  return out.str();
}

// "nnts2:3" -> {NNTS2, 3}; classical names take no order.
PowerMethod parse_power_method(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const auto method = parse_test_method(name);
  if (!method) throw UsageError("unknown method '" + name + "'");
  PowerMethod pm{*method, 1};
  if (is_nnts(*method)) {
    if (colon == std::string::npos) throw UsageError("NNTS methods need an order, e.g. " + name + ":2");
    try {
      pm.m = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("bad order in '" + spec + "'");
    }
  } else if (colon != std::string::npos) {
    throw UsageError("method '" + name + "' takes no order");
  }
  return pm;
}

std::string join_argv(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonnegative trigonometric sum (NNTS) circular distributions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  std::string output;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--output,-o", output, "Write results here instead of stdout");
    cmd->add_option("--threads", threads, "Worker threads (0 = one per core)");
  };
  auto add_seed = [&](CLI::App* cmd) { cmd->add_option("--seed", seed, "Base seed for random streams"); };

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Maximum likelihood NNTS fit");
  InputFlags fit_in;
  fit_in.add_to(fit_cmd);
  int fit_m = 1;
  FitOptions fit_opts;
  fit_cmd->add_option("--m", fit_m, "Order M")->required();
  fit_cmd->add_option("--tol", fit_opts.tol, "Tangent-gradient tolerance");
  fit_cmd->add_option("--max-iter", fit_opts.max_iter, "Iteration cap per start");
  fit_cmd->add_option("--restarts", fit_opts.restarts, "Random restarts besides the uniform start");
  std::string fit_csv;
  fit_cmd->add_option("--csv", fit_csv, "Also write the fitted density on a grid to this CSV file");
  add_seed(fit_cmd);
  common(fit_cmd);

  // test
  auto* test_cmd = app.add_subcommand("test", "Uniformity test");
  InputFlags test_in;
  test_in.add_to(test_cmd);
  std::string test_method = "nnts2", test_source = "auto";
  int test_m = 1;
  double test_alpha = 0.05;
  std::optional<std::size_t> test_reps;
  test_cmd->add_option("--method", test_method, "nnts1 | nnts2 | rayleigh | hro | hrm | pycke");
  test_cmd->add_option("--m", test_m, "Order M for the NNTS tests");
  test_cmd->add_option("--alpha", test_alpha, "0.10, 0.05 or 0.01");
  test_cmd->add_option("--pvalue-reps", test_reps, "Monte-Carlo replicates for the p-value");
  test_cmd->add_option("--source", test_source, "Critical values: auto | table | regression");
  add_seed(test_cmd);
  common(test_cmd);

  // sum
  auto* sum_cmd = app.add_subcommand("sum", "Parameters of a sum of independent NNTS variables");
  std::vector<std::string> sum_files;
  std::string sum_method = "auto", sum_csv;
  int sum_grid = 512;
  sum_cmd->add_option("--params", sum_files, "Two or more params JSON files")->required()->expected(2, -1);
  sum_cmd->add_option("--method", sum_method, "auto | closed-form | solver | exact");
  sum_cmd->add_option("--csv", sum_csv, "Also write the summed density on a grid to this CSV file");
  sum_cmd->add_option("--grid", sum_grid, "Grid points for --csv");
  common(sum_cmd);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw angles from an NNTS density");
  std::string sample_params;
  std::size_t sample_n = 0;
  bool sample_degrees = false;
  sample_cmd->add_option("--params", sample_params, "Params JSON file")->required();
  sample_cmd->add_option("--n", sample_n, "Number of draws")->required();
  sample_cmd->add_flag("--degrees", sample_degrees, "Write degrees instead of radians");
  add_seed(sample_cmd);
  common(sample_cmd);

  // density
  auto* density_cmd = app.add_subcommand("density", "Density on an equally spaced grid (CSV)");
  std::string density_params;
  int density_grid = 512;
  density_cmd->add_option("--params", density_params, "Params JSON file")->required();
  density_cmd->add_option("--grid", density_grid, "Number of grid points on [0, 2pi)");
  common(density_cmd);

  // charfn
  auto* charfn_cmd = app.add_subcommand("charfn", "Characteristic function phi(-M..M)");
  std::string charfn_params;
  charfn_cmd->add_option("--params", charfn_params, "Params JSON file")->required();
  common(charfn_cmd);

  // critvals
  auto* cv_cmd = app.add_subcommand("critvals", "Simulated null critical values (CSV)");
  std::string cv_method = "nnts2";
  std::vector<int> cv_m{1};
  std::vector<std::size_t> cv_n;
  std::vector<double> cv_alpha{0.10, 0.05, 0.01};
  std::size_t cv_reps = 10000;
  cv_cmd->add_option("--method", cv_method, "nnts1 | nnts2 | rayleigh | hro | hrm | pycke");
  cv_cmd->add_option("--m", cv_m, "One or more orders M");
  cv_cmd->add_option("--n", cv_n, "One or more sample sizes")->required();
  cv_cmd->add_option("--alpha", cv_alpha, "Significance levels");
  cv_cmd->add_option("--reps", cv_reps, "Null replicates (>= 1000)");
  add_seed(cv_cmd);
  common(cv_cmd);

  // power
  auto* power_cmd = app.add_subcommand("power", "Rejection rates under an NNTS alternative (CSV)");
  std::string power_params;
  int power_alt_m = 0;
  double power_c0 = 1.0;
  std::optional<std::uint64_t> power_alt_seed;
  std::size_t power_n = 100, power_reps = 1000, power_null_reps = 10000;
  double power_alpha = 0.05;
  std::vector<std::string> power_methods{"nnts2:1", "rayleigh", "hrm", "pycke"};
  power_cmd->add_option("--params", power_params, "Alternative params JSON file");
  power_cmd->add_option("--alt-m", power_alt_m, "Order of a generated alternative");
  power_cmd->add_option("--c0", power_c0, "c_0 of a generated alternative");
  power_cmd->add_option("--alt-seed", power_alt_seed, "Seed for the generated alternative");
  power_cmd->add_option("--n", power_n, "Sample size");
  power_cmd->add_option("--alpha", power_alpha, "0.10, 0.05 or 0.01");
  power_cmd->add_option("--reps", power_reps, "Replicates under the alternative");
  power_cmd->add_option("--null-reps", power_null_reps, "Replicates for simulated critical values");
  power_cmd->add_option("--methods", power_methods, "e.g. nnts1:2 nnts2:3 rayleigh hrm pycke");
  add_seed(power_cmd);
  common(power_cmd);

  // fixtures
  auto* fx_cmd = app.add_subcommand("fixtures", "List embedded data sets, or print one as CSV");
  std::string fx_name;
  bool fx_radians = false;
  fx_cmd->add_option("--name", fx_name, "Fixture to print");
  fx_cmd->add_flag("--radians", fx_radians, "Print radians instead of degrees");
  common(fx_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Sink sink{output, Manifest{join_argv(argc, argv), std::nullopt, library_version()}};
  try {
    if (*fit_cmd) {
      fit_opts.seed = seed.value_or(0);
      sink.manifest.seed = fit_opts.seed;
      const AngleSample x = fit_in.load();
      const FitResult f = fit(x, fit_m, fit_opts);
      json body = to_json(f, x.size());
      body["nnts2_statistic"] = nnts2_statistic(f, x.size());
      body["nnts1_statistic"] = nnts1_statistic(f, x.size());
      if (!fit_csv.empty()) Sink{fit_csv, sink.manifest}.csv_out(density_csv(f.params, 512));
      sink.json_out(std::move(body));
    } else if (*test_cmd) {
      const auto method = parse_test_method(test_method);
      if (!method) throw UsageError("unknown method '" + test_method + "'");
      parse_alpha(test_alpha);
      const AngleSample x = test_in.load();
      TestOutcome outcome;
      if (is_nnts(*method)) {
        TestOptions opts;
        if (test_source == "table") opts.source = CvSource::Table;
        else if (test_source == "regression") opts.source = CvSource::Regression;
        else if (test_source != "auto") throw UsageError("unknown --source '" + test_source + "'");
        opts.p_value_reps = test_reps;
        opts.threads = threads;
        if (test_reps) opts.seed = require_seed(seed, "a Monte-Carlo p-value");
        opts.fit.seed = seed.value_or(0);
        sink.manifest.seed = seed;
        outcome = run_uniformity_test(x, test_m, test_alpha, *method, opts);
      } else {
        const std::uint64_t s = require_seed(seed, "a classical test");
        sink.manifest.seed = s;
        outcome = run_classical_test(x, *method, test_alpha, test_reps.value_or(10000), s, threads);
      }
      sink.json_out(to_json(outcome));
    } else if (*sum_cmd) {
      std::vector<NntsParams> summands;
      for (const auto& p : sum_files) summands.push_back(read_params_file(p));
      SumResult r = [&] {
        if (sum_method == "auto") return nnts::sum_params(summands);
        if (sum_method == "closed-form") return sum_params_closed_form(summands);
        if (sum_method == "solver") return sum_params_solver(summands);
        if (sum_method == "exact") return sum_params_exact(summands);
        throw UsageError("unknown --method '" + sum_method + "'");
      }();
      if (!sum_csv.empty()) Sink{sum_csv, sink.manifest}.csv_out(density_csv(r.params, sum_grid));
      sink.json_out(to_json(r));
    } else if (*sample_cmd) {
      const std::uint64_t s = require_seed(seed, "sample");
      sink.manifest.seed = s;
      const AngleSample x = sample(read_params_file(sample_params), sample_n, s);
      std::ostringstream out;
      out.precision(17);
      out << (sample_degrees ? "degrees" : "radians") << "\n";
      for (double a : x) out << (sample_degrees ? a * 180.0 / std::numbers::pi : a) << "\n";
      sink.csv_out(out.str());
    } else if (*density_cmd) {
      sink.csv_out(density_csv(read_params_file(density_params), density_grid));
    } else if (*charfn_cmd) {
      sink.json_out(to_json(char_fn(read_params_file(charfn_params))));
    } else if (*cv_cmd) {
      const auto method = parse_test_method(cv_method);
      if (!method) throw UsageError("unknown method '" + cv_method + "'");
      const std::uint64_t s = require_seed(seed, "critvals");
      sink.manifest.seed = s;
      std::ostringstream out;
      out << "m,alpha,n,value,raw,failures\n";
      const std::vector<int> orders = is_nnts(*method) ? cv_m : std::vector<int>{0};
      for (int m : orders)
        for (std::size_t n : cv_n) {
          SimulationPlan plan;
          plan.test = *method;
          plan.m = m;
          plan.n = n;
          plan.alphas = cv_alpha;
          plan.reps = cv_reps;
          plan.base_seed = s;
          plan.threads = threads;
          const CriticalValueSimulation sim = simulate_critical_values(plan);
          for (const auto& v : sim.values)
            out << m << "," << v.alpha << "," << n << "," << v.rounded << "," << v.raw << "," << sim.failures
                << "\n";
        }
      sink.csv_out(out.str());
    } else if (*power_cmd) {
      const std::uint64_t s = require_seed(seed, "power");
      sink.manifest.seed = s;
      NntsParams alt = NntsParams::uniform(0);
      if (!power_params.empty())
        alt = read_params_file(power_params);
      else
        alt = make_alternative(power_alt_m, power_c0, power_alt_seed.value_or(s));
      std::vector<PowerMethod> methods;
      for (const auto& m : power_methods) methods.push_back(parse_power_method(m));
      PowerOptions opts;
      opts.null_reps = power_null_reps;
      opts.threads = threads;
      const PowerReport report = power_study(alt, power_n, power_alpha, power_reps, methods, s, opts);
      std::ostringstream out;
      out << "method,m,rejection_pct,rounded_pct,critical_value,simulated_cv\n";
      for (const PowerEntry& e : report.entries)
        out << to_string(e.method.method) << "," << (is_nnts(e.method.method) ? std::to_string(e.method.m) : "")
            << "," << e.rejection_pct << "," << e.rounded_pct << "," << e.critical_value << ","
            << (e.simulated_cv ? "true" : "false") << "\n";
      sink.csv_out(out.str());
    } else if (*fx_cmd) {
      if (fx_name.empty()) {
        json list = json::array();
        for (FixtureName f : all_fixtures()) {
          const Fixture fx = fixture(f);
          std::ostringstream sum;
          sum << std::hex << fixture_checksum(fx);
          list.push_back({{"name", to_string(f)}, {"n", fx.angles.size()}, {"checksum", sum.str()}});
        }
        sink.json_out({{"fixtures", std::move(list)}});
      } else {
        const auto name = parse_fixture_name(fx_name);
        if (!name) throw UsageError("unknown fixture '" + fx_name + "'");
        const Fixture fx = fixture(*name);
        std::ostringstream out;
        out.precision(17);
        out << (fx_radians ? "radians" : "degrees") << "\n";
        for (std::size_t i = 0; i < fx.degrees.size(); ++i)
          if (fx_radians) out << fx.angles[i] << "\n";
          else out << fx.degrees[i] << "\n";
        sink.csv_out(out.str());
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
