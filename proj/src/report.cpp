#include "tgfield/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "tgfield/builtin.hpp"
#include "tgfield/sampling.hpp"
#include "tgfield/sasaki.hpp"

namespace tgfield {

namespace {

constexpr std::pair<SuiteKind, std::string_view> kSuiteNames[] = {
    {SuiteKind::Tg, "tg"},
    {SuiteKind::Harmonic, "harmonic"},
    {SuiteKind::Minimal, "minimal"},
    {SuiteKind::Classify, "classify"},
    {SuiteKind::SffOracle, "sff-oracle"},
    {SuiteKind::PhiCurvature, "phi-curvature"},
    {SuiteKind::Trajectory, "trajectory"},
};

constexpr double kFiveQuarters = 1.25;

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !(v > 0.0))
    throw Error(ErrorCode::BadConfig, "invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

bool is_hopf(const std::string& key) { return key.rfind("hopf:", 0) == 0; }

/// Collects per-point maxima and turns them into reports.
class Checks {
public:
  Checks(const SuiteConfig& config, bool warped) : config_(config), warped_(warped) {}

  /// Tolerance with overrides; `loose` marks checks limited by the warped profile table.
  double tolerance(const std::string& name, double base, bool loose = false) {
    known_.insert(name);
    if (auto it = config_.tolerances.find(name); it != config_.tolerances.end()) return it->second;
    if (auto it = config_.tolerances.find("*"); it != config_.tolerances.end()) return it->second;
    return loose && warped_ ? std::max(base, 1e-6) : base;
  }

  void add(const std::string& name, int points, double defect, double base, bool loose = false) {
    const double tol = tolerance(name, base, loose);
    reports_.push_back(ResidualReport{name, points, defect, tol, defect < tol});
  }

  void validate_overrides() const {
    for (const auto& [name, v] : config_.tolerances)
      if (name != "*" && !known_.count(name))
        throw Error(ErrorCode::BadConfig, "tolerance override for unknown check '" + name + "'");
  }

  std::vector<ResidualReport> take() { return std::move(reports_); }

private:
  const SuiteConfig& config_;
  bool warped_;
  std::set<std::string> known_;
  std::vector<ResidualReport> reports_;
};

double unit_defect(const Manifold& m, const Field& xi, const Point& p) {
  const Vec v = xi.at(p);
  return std::abs(v.dot(metric_at(m, p) * v) - 1.0);
}

void run_tg(const Manifold& m, const Field& xi, const std::vector<Point>& pts, Checks& checks) {
  double worst = 0.0, equiv = 0.0;
  const bool sphere = m.kind() == ManifoldKind::UnitSphere;
  for (const auto& p : pts) {
    const PointwiseField f(m, xi, p);
    const auto frame = adapted_frame(m, xi, p);
    for (const auto& x : frame.vectors)
      for (const auto& y : frame.vectors) {
        const Vec r = f.tg_residual(x, y);
        worst = std::max(worst, f.geometry().norm(r));
        if (sphere) equiv = std::max(equiv, f.geometry().norm(f.sphere_tg_residual(x, y) - r));
      }
  }
  const int n = static_cast<int>(pts.size());
  checks.add("tg_residual", n, worst, 1e-8, true);
  if (sphere) checks.add("sphere_equivalence", n, equiv, 1e-9);
}

void run_harmonic(const Manifold& m, const Field& xi, const std::vector<Point>& pts, Checks& checks) {
  double field = 0.0, map = 0.0;
  for (const auto& p : pts) {
    field = std::max(field, harmonic_residual(m, xi, p).norm);
    map = std::max(map, harmonic_map_residual(m, xi, p).norm);
  }
  const int n = static_cast<int>(pts.size());
  checks.add("harmonic_field", n, field, 1e-8, true);
  checks.add("harmonic_map", n, map, 1e-8, true);
}

void run_minimal(const Manifold& m, const Field& xi, const std::vector<Point>& pts, Checks& checks,
                 SuiteResult& out) {
  double worst = 0.0;
  int degenerate = 0;
  for (const auto& p : pts) {
    const auto r = minimality_residual(m, xi, p);
    worst = std::max(worst, r.norm);
    degenerate += r.degenerate ? 1 : 0;
  }
  checks.add("minimality", static_cast<int>(pts.size()), worst, 1e-8, true);
  out.values["degenerate_points"] = degenerate;
}

void run_sff(const Manifold& m, const Field& xi, const std::vector<Point>& pts, std::uint64_t seed, Checks& checks) {
  SampleRng rng(seed + 1);
  const int n = m.dim();
  double agree = 0.0, sym = 0.0;
  for (const auto& p : pts) {
    const Vec w = xi.at(p);
    const Mat g = metric_at(m, p);
    const Vec x = rng.vector(n), y = rng.vector(n);
    Vec nn = rng.vector(n);
    nn -= w * w.dot(g * nn);
    const double oracle = sff_oracle(m, xi, p, x, y, nn);
    agree = std::max(agree, std::abs(sff_formula(m, xi, p, x, y, nn) - oracle));
    sym = std::max(sym, std::abs(sff_oracle(m, xi, p, y, x, nn) - oracle));
  }
  const int count = static_cast<int>(pts.size());
  checks.add("sff_agreement", count, agree, 1e-5);
  checks.add("sff_symmetry", count, sym, 1e-6);
}

void run_phi(const Manifold& m, const Field& xi, const std::vector<Point>& pts, std::uint64_t seed, Checks& checks,
             SuiteResult& out) {
  SampleRng rng(seed + 2);
  const int n = m.dim();
  const MetricScaling scalings[] = {MetricScaling::Sasaki, MetricScaling::Quarter};
  double lo[2] = {INFINITY, INFINITY}, hi[2] = {-INFINITY, -INFINITY};
  double plane = 0.0;
  for (const auto& p : pts) {
    const PointwiseField f(m, xi, p);
    Vec x = rng.vector(n);
    x -= f.xi() * f.inner(f.xi(), x);
    x /= f.geometry().norm(x);
    for (int s = 0; s < 2; ++s) {
      const double k = phi_sectional_curvature(m, xi, p, x, scalings[s]);
      lo[s] = std::min(lo[s], k);
      hi[s] = std::max(hi[s], k);
      if (s == 0) {
        const Vec turned = std::cos(0.9) * x + std::sin(0.9) * f.shape(x);
        plane = std::max(plane, std::abs(phi_sectional_curvature(m, xi, p, turned, scalings[s]) - k));
      }
    }
  }
  const int count = static_cast<int>(pts.size());
  checks.add("phi_constancy_sasaki", count, hi[0] - lo[0], 1e-6);
  checks.add("phi_constancy_quarter", count, hi[1] - lo[1], 1e-6);
  checks.add("phi_plane_invariance", count, plane, 1e-8);
  const double tol = checks.tolerance("phi_five_quarters", 1e-5);
  std::vector<std::string> matching;
  double best = INFINITY;
  for (int s = 0; s < 2; ++s) {
    const double mid = 0.5 * (lo[s] + hi[s]);
    out.values[std::string("phi_curvature_") + std::string(to_string(scalings[s]))] = mid;
    const double d = std::max(std::abs(lo[s] - kFiveQuarters), std::abs(hi[s] - kFiveQuarters));
    best = std::min(best, d);
    if (d < tol) matching.emplace_back(to_string(scalings[s]));
  }
  out.notes["five_quarters_scaling"] = matching.size() == 1 ? matching.front() : matching.empty() ? "none" : "both";
  checks.add("phi_five_quarters", count, matching.size() == 1 ? best : std::max(best, tol), tol);
}

void run_trajectory(const Manifold& m, const Field& xi, const SuiteConfig& config, Checks& checks, SuiteResult& out) {
  SampleRng rng(config.seed + 3);
  const bool sphere = m.kind() == ManifoldKind::UnitSphere;
  const double length = sphere ? 2.0 * std::numbers::pi : 2.0;

  // Flat helical fields are compared with their closed-form trajectories.
  std::optional<std::pair<double, double>> helical;
  if (config.field.rfind("flat-tg:", 0) == 0) {
    const auto key = std::string_view(config.field).substr(8);
    const auto comma = key.find(',');
    double a = 0.0, w = 0.0;
    std::from_chars(key.data(), key.data() + comma, a);
    std::from_chars(key.data() + comma + 1, key.data() + key.size(), w);
    helical = std::pair{a, w};
  }
  const bool straight = config.field == "flat-parallel" || (helical && helical->first == 0.0);

  std::vector<Point> starts;
  if (helical && !straight) {
    const auto [a, w] = *helical;
    for (int i = 0; i < config.samples; ++i) {
      const double phase = rng.uniform(0.3, std::numbers::pi - 0.3);
      starts.push_back(m.point(Vec{{(phase - w) / a, rng.uniform(-1.0, 1.0)}}));
    }
  } else {
    starts = sample_points(m, &xi, config.samples, config.seed + 3);
  }

  double speed = 0.0, shape = 0.0;
  int truncated = 0;
  for (const auto& p0 : starts) {
    TrajectoryRecord rec{integral_curve(m, xi, p0, length), {}, {}};
    const auto& tr = rec.trajectory;
    truncated += tr.truncated ? 1 : 0;
    for (std::size_t s = 1; s < tr.samples.size(); ++s) {
      const Vec d = tr.samples[s].coords - tr.samples[s - 1].coords;
      const Point mid{p0.chart, 0.5 * (tr.samples[s].coords + tr.samples[s - 1].coords)};
      const double v = std::sqrt(d.dot(metric_at(m, mid) * d)) / (tr.t[s] - tr.t[s - 1]);
      speed = std::max(speed, std::abs(v - 1.0));
    }
    if (helical && !straight) {
      const auto [a, w] = *helical;
      const Vec& q0 = p0.coords;
      const double c = q0[1] + std::log(std::abs(std::sin(a * q0[0] + w))) / a;
      rec.extra_names = {"y_closed_form", "dy"};
      for (const auto& q : tr.samples) {
        const double y = flat_trajectory_closed_form(a, c, q.coords[0] + w / a);
        rec.extra.push_back({y, q.coords[1] - y});
        shape = std::max(shape, std::abs(q.coords[1] - y));
      }
    } else if (straight) {
      const Vec dir = xi.at(p0);
      for (std::size_t s = 0; s < tr.samples.size(); ++s)
        shape = std::max(shape, (tr.samples[s].coords - p0.coords - tr.t[s] * dir).norm());
    } else if (sphere && is_hopf(config.field) && !tr.truncated) {
      shape = std::max(shape, (sphere_to_ambient(tr.samples.back()) - sphere_to_ambient(p0)).norm());
    }
    out.trajectories.push_back(std::move(rec));
  }
  const int count = static_cast<int>(starts.size());
  checks.add("unit_speed", count, speed, 1e-4);
  if (helical && !straight) checks.add("closed_form", count, shape, 1e-6);
  if (straight) checks.add("straight_line", count, shape, 1e-12);
  if (sphere && is_hopf(config.field)) checks.add("closure", count - truncated, shape, 1e-5);
  out.values["truncated_trajectories"] = truncated;
  out.values["length"] = length;
}

nlohmann::json point_json(const Point& p) {
  return {{"chart", p.chart}, {"coords", std::vector<double>(p.coords.data(), p.coords.data() + p.coords.size())}};
}

}  // namespace

std::string_view to_string(SuiteKind s) {
  for (const auto& [k, name] : kSuiteNames)
    if (k == s) return name;
  return "?";
}

SuiteKind parse_suite(std::string_view name) {
  for (const auto& [k, n] : kSuiteNames)
    if (n == name) return k;
  throw Error(ErrorCode::BadConfig, "unknown suite '" + std::string(name) + "'");
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

OutputFormat parse_format(std::string_view name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  throw Error(ErrorCode::BadConfig, "unknown format '" + std::string(name) + "'");
}

void add_tolerance_override(SuiteConfig& config, std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos) {
    config.tolerances["*"] = parse_double(spec, "tolerance");
    return;
  }
  const auto name = spec.substr(0, eq);
  if (name.empty()) throw Error(ErrorCode::BadConfig, "empty check name in --tol " + std::string(spec));
  config.tolerances[std::string(name)] = parse_double(spec.substr(eq + 1), "tolerance");
}

std::vector<SuiteKind> applicable_suites(const SuiteConfig& config) {
  std::vector<SuiteKind> out;
  for (const auto& [k, name] : kSuiteNames)
    if (k != SuiteKind::PhiCurvature || is_hopf(config.field)) out.push_back(k);
  return out;
}

SuiteResult run_suite(const SuiteConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.samples < 1) throw Error(ErrorCode::BadConfig, "samples must be at least 1");
  const ManifoldEntry entry = resolve_manifold(config.manifold);
  const Field xi = resolve_field(config.field, entry);
  const Manifold& m = entry.manifold;
  if (config.suite == SuiteKind::PhiCurvature && !is_hopf(config.field))
    throw Error(ErrorCode::BadConfig, "phi-curvature needs a Hopf field, got " + config.field);

  SuiteResult out;
  out.config = config;
  Checks checks(config, entry.warped.has_value());
  if (entry.warped) {
    out.values["profile_u_min"] = entry.warped->alpha->u_min();
    out.values["profile_u_max"] = entry.warped->alpha->u_max();
    out.values["profile_step"] = entry.warped->alpha->step();
  }

  const auto pts = sample_points(m, &xi, config.samples, config.seed);
  double unit = 0.0;
  for (const auto& p : pts) unit = std::max(unit, unit_defect(m, xi, p));
  checks.add("unit_norm", config.samples, unit, kUnitTolerance);

  switch (config.suite) {
    case SuiteKind::Tg:
      run_tg(m, xi, pts, checks);
      break;
    case SuiteKind::Harmonic:
      run_harmonic(m, xi, pts, checks);
      break;
    case SuiteKind::Minimal:
      run_minimal(m, xi, pts, checks, out);
      break;
    case SuiteKind::Classify:
      out.classification = classify(m, xi, pts, checks.tolerance("classifier", kClassifierTolerance));
      break;
    case SuiteKind::SffOracle:
      run_sff(m, xi, pts, config.seed, checks);
      break;
    case SuiteKind::PhiCurvature:
      run_phi(m, xi, pts, config.seed, checks, out);
      break;
    case SuiteKind::Trajectory:
      run_trajectory(m, xi, config, checks, out);
      break;
  }
  if (config.strict_tolerances) checks.validate_overrides();
  out.checks = checks.take();
  out.pass = std::all_of(out.checks.begin(), out.checks.end(), [](const auto& c) { return c.pass; });
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

nlohmann::json to_json(const ClassificationRecord& record) {
  nlohmann::json flags = nlohmann::json::object();
  for (const auto& [name, f] : record.flags)
    flags[name] = {{"holds", f.holds}, {"max_defect", f.max_defect}, {"tolerance", f.tolerance}};
  return {{"flags", flags}, {"sample_points", record.sample_points.size()}};
}

nlohmann::json to_json(const SuiteResult& r) {
  nlohmann::json tol = nlohmann::json::object();
  for (const auto& [k, v] : r.config.tolerances) tol[k] = v;
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = {{"manifold", r.config.manifold}, {"field", r.config.field}, {"suite", to_string(r.config.suite)},
                 {"samples", r.config.samples}, {"seed", r.config.seed}, {"tolerance_overrides", tol}};
  j["rng"] = {{"name", kRngName}, {"seed", r.config.seed}};
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"points", c.points},
                      {"defect", c.defect},
                      {"tolerance", c.tolerance},
                      {"verdict", c.pass ? "pass" : "fail"}});
  j["checks"] = checks;
  if (r.classification) j["classification"] = to_json(*r.classification);
  if (!r.values.empty()) j["values"] = r.values;
  if (!r.notes.empty()) j["notes"] = r.notes;
  if (!r.trajectories.empty()) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& rec : r.trajectories)
      t.push_back({{"start", point_json(rec.trajectory.samples.front())},
                   {"end", point_json(rec.trajectory.samples.back())},
                   {"samples", rec.trajectory.samples.size()},
                   {"truncated", rec.trajectory.truncated}});
    j["trajectories"] = t;
  }
  j["verdict"] = r.pass ? "pass" : "fail";
  return j;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string checks_csv(const SuiteResult& r) {
  std::ostringstream os;
  os << "name,points,defect,tolerance,verdict\r\n" << std::setprecision(17);
  for (const auto& c : r.checks)
    os << c.name << ',' << c.points << ',' << c.defect << ',' << c.tolerance << ',' << (c.pass ? "pass" : "fail")
       << "\r\n";
  return os.str();
}

std::vector<std::filesystem::path> export_trajectories(const SuiteResult& r, const std::filesystem::path& dir) {
  if (r.config.suite != SuiteKind::Trajectory)
    throw Error(ErrorCode::BadConfig, "trajectory export needs the trajectory suite");
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (std::size_t i = 0; i < r.trajectories.size(); ++i) {
    const auto path = dir / ("trajectory_" + std::to_string(i) + ".csv");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::BadConfig, "cannot write " + path.string());
    const auto& rec = r.trajectories[i];
    write_trajectory_csv(os, rec.trajectory, rec.extra_names, rec.extra);
    paths.push_back(path);
  }
  return paths;
}

LogLevel log_level_from_env() {
  const char* v = std::getenv("TGFIELD_LOG");
  if (!v) return LogLevel::Info;
  const std::string s(v);
  if (s == "quiet" || s == "0") return LogLevel::Quiet;
  if (s == "debug" || s == "2") return LogLevel::Debug;
  return LogLevel::Info;
}

}  // namespace tgfield
