// tgfield: verification suites for unit vector fields and their images in T1M.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tgfield/report.hpp"
#include "tgfield/sampling.hpp"

using namespace tgfield;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string manifold;
  std::string field;
  std::string suite = "tg";
  int samples = 200;
  std::uint64_t seed = 1;
  std::vector<std::string> tol;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, Options& o, bool with_suite) {
  cmd->add_option("--manifold", o.manifold, "registry key: sphere:n, flat:n, warped:a,alpha0")->required();
  cmd->add_option("--field", o.field, "registry key: hopf:m, flat-tg:a,omega0, flat-parallel, flat-radial, tg2d:a,omega0, meridian")
      ->required();
  if (with_suite)
    cmd->add_option("--suite", o.suite, "tg|harmonic|minimal|classify|sff-oracle|phi-curvature|trajectory");
  cmd->add_option("--samples", o.samples, "sample points (trajectory: start points)");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--tol", o.tol, "tolerance override: VALUE for every check or NAME=VALUE");
  cmd->add_option("--out", o.out, "output file (trajectory: directory)");
  cmd->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
}

SuiteConfig make_config(const Options& o, SuiteKind suite) {
  SuiteConfig c;
  c.manifold = o.manifold;
  c.field = o.field;
  c.suite = suite;
  c.samples = o.samples;
  c.seed = o.seed;
  for (const auto& t : o.tol) add_tolerance_override(c, t);
  c.output = o.out;
  c.format = parse_format(o.format);
  return c;
}

void print_summary(const SuiteResult& r, LogLevel level) {
  if (level == LogLevel::Quiet) return;
  std::printf("%s on %s, suite %s\n", r.config.field.c_str(), r.config.manifold.c_str(),
              std::string(to_string(r.config.suite)).c_str());
  for (const auto& c : r.checks)
    std::printf("  %s %-22s defect %.3e  tolerance %.1e  (%d points)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.defect, c.tolerance, c.points);
  if (r.classification)
    for (const auto& [name, f] : r.classification->flags)
      std::printf("  %-20s %-5s max defect %.3e  tolerance %.1e\n", name.c_str(), f.holds ? "yes" : "no",
                  f.max_defect, f.tolerance);
  for (const auto& [k, v] : r.values) std::printf("  %s = %.12g\n", k.c_str(), v);
  for (const auto& [k, v] : r.notes) std::printf("  %s: %s\n", k.c_str(), v.c_str());
  std::printf("verdict: %s\n", r.pass ? "pass" : "fail");
  if (level == LogLevel::Debug) std::fprintf(stderr, "wall time %.3f s\n", r.wall_seconds);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::BadConfig, "cannot write " + path.string());
  os << text;
}

void write_result(const SuiteResult& r, LogLevel level) {
  if (r.config.suite == SuiteKind::Trajectory && !r.config.output.empty()) {
    const auto paths = export_trajectories(r, r.config.output);
    write_file(std::filesystem::path(r.config.output) / "report.json", dump(to_json(r)));
    if (level != LogLevel::Quiet) std::printf("wrote %zu trajectory files to %s\n", paths.size(), r.config.output.c_str());
    return;
  }
  if (r.config.output.empty()) return;
  write_file(r.config.output, r.config.format == OutputFormat::Json ? dump(to_json(r)) : checks_csv(r));
  if (level == LogLevel::Debug) std::fprintf(stderr, "wrote %s\n", r.config.output.c_str());
}

int run_one(const Options& o, SuiteKind suite, LogLevel level) {
  const SuiteResult r = run_suite(make_config(o, suite));
  print_summary(r, level);
  write_result(r, level);
  return r.pass ? kExitPass : kExitFail;
}

int run_report(const Options& o, LogLevel level) {
  SuiteConfig base = make_config(o, SuiteKind::Tg);
  base.strict_tolerances = false;
  base.output.clear();
  nlohmann::json suites = nlohmann::json::array();
  std::set<std::string> known{"*", "classifier"};
  bool pass = true;
  for (const auto kind : applicable_suites(base)) {
    SuiteConfig c = base;
    c.suite = kind;
    const SuiteResult r = run_suite(c);
    for (const auto& ch : r.checks) known.insert(ch.name);
    print_summary(r, level);
    pass = pass && r.pass;
    suites.push_back(to_json(r));
  }
  for (const auto& [name, v] : base.tolerances)
    if (!known.count(name)) throw Error(ErrorCode::BadConfig, "tolerance override for unknown check '" + name + "'");
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["manifold"] = o.manifold;
  j["field"] = o.field;
  j["rng"] = {{"name", kRngName}, {"seed", o.seed}};
  j["suites"] = suites;
  j["verdict"] = pass ? "pass" : "fail";
  if (!o.out.empty()) write_file(o.out, dump(j));
  if (level != LogLevel::Quiet) std::printf("report verdict: %s\n", pass ? "pass" : "fail");
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Totally geodesic unit vector field verification"};
  app.require_subcommand(1);
  Options verify_opts, classify_opts, trajectory_opts, report_opts;
  auto* verify = app.add_subcommand("verify", "run one verification suite");
  add_common(verify, verify_opts, true);
  auto* classify_cmd = app.add_subcommand("classify", "report the classifier flags");
  add_common(classify_cmd, classify_opts, false);
  auto* trajectory = app.add_subcommand("trajectory", "integrate trajectories and export CSV");
  add_common(trajectory, trajectory_opts, false);
  trajectory_opts.samples = 3;
  auto* report = app.add_subcommand("report", "run every applicable suite");
  add_common(report, report_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const LogLevel level = log_level_from_env();
  try {
    if (*verify) return run_one(verify_opts, parse_suite(verify_opts.suite), level);
    if (*classify_cmd) return run_one(classify_opts, SuiteKind::Classify, level);
    if (*trajectory) return run_one(trajectory_opts, SuiteKind::Trajectory, level);
    return run_report(report_opts, level);
  } catch (const Error& e) {
    std::fprintf(stderr, "tgfield: %s\n", e.what());
    const bool usage = e.code() == ErrorCode::UnknownRegistryKey || e.code() == ErrorCode::BadConfig;
    return usage ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "tgfield: %s\n", e.what());
    return kExitFail;
  }
}
