#include "tgfield/builtin.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace tgfield {

namespace {

bool is_north(std::string_view chart) {
  if (chart == "north") return true;
  if (chart == "south") return false;
  throw Error(ErrorCode::UnknownRegistryKey, "sphere has no chart " + std::string(chart));
}

Jet squared_norm(std::span<const Jet> u) {
  Jet s(0.0);
  for (const auto& c : u) s += c * c;
  return s;
}

}  // namespace

Manifold make_flat(int n) {
  if (n < 1) throw Error(ErrorCode::BadConfig, "flat space needs n >= 1");
  auto metric = [n](std::span<const Jet>) {
    JetMatrix g(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = Jet(1.0);
    return g;
  };
  return Manifold("flat:" + std::to_string(n), ManifoldKind::Euclidean,
                  {Chart::from_formula("cartesian", Box::unbounded(n), Box::cube(n, -2.0, 2.0), metric)});
}

Manifold make_sphere(int n) {
  if (n < 2) throw Error(ErrorCode::BadConfig, "make_sphere needs n >= 2");
  auto metric = [n](std::span<const Jet> u) {
    const Jet conformal = 4.0 * reciprocal(square(1.0 + squared_norm(u)));
    JetMatrix g(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = conformal;
    return g;
  };
  // Both charts cover all but one pole; sampling stays well away from it.
  std::vector<Chart> charts{
      Chart::from_formula("north", Box::unbounded(n), Box::cube(n, -1.2, 1.2), metric),
      Chart::from_formula("south", Box::unbounded(n), Box::cube(n, -1.2, 1.2), metric),
  };
  // The chart change is the inversion u -> u / |u|^2 in both directions.
  auto map = [](const Vec& u) -> std::optional<Vec> {
    const double r2 = u.squaredNorm();
    if (r2 < 1e-24) return std::nullopt;
    return Vec(u / r2);
  };
  auto jac = [](const Vec& u) -> Mat {
    const double r2 = u.squaredNorm();
    const auto dim = u.size();
    return (Mat::Identity(dim, dim) * r2 - 2.0 * u * u.transpose()) / (r2 * r2);
  };
  std::vector<ChartTransition> transitions{{"north", "south", map, jac}, {"south", "north", map, jac}};
  return Manifold("sphere:" + std::to_string(n), ManifoldKind::UnitSphere, std::move(charts), std::move(transitions));
}

std::vector<Jet> sphere_embedding(std::string_view chart, std::span<const Jet> u) {
  const bool north = is_north(chart);
  const Jet r2 = squared_norm(u);
  const Jet inv = reciprocal(1.0 + r2);
  std::vector<Jet> x;
  x.reserve(u.size() + 1);
  for (const auto& c : u) x.push_back(2.0 * c * inv);
  x.push_back(north ? (r2 - 1.0) * inv : (1.0 - r2) * inv);
  return x;
}

Vec sphere_to_ambient(const Point& p) {
  std::vector<Jet> u(p.coords.data(), p.coords.data() + p.coords.size());
  const auto x = sphere_embedding(p.chart, u);
  Vec out(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) out[static_cast<Eigen::Index>(i)] = x[i].value();
  return out;
}

Point ambient_to_sphere(const Vec& x, std::string_view chart) {
  const bool north = is_north(chart);
  const auto n = x.size() - 1;
  const double denom = north ? 1.0 - x[n] : 1.0 + x[n];
  if (std::abs(denom) < 1e-14)
    throw Error(ErrorCode::PointOutsideDomain, "projection pole is not covered by chart " + std::string(chart));
  return Point{std::string(chart), x.head(n) / denom};
}

Mat sphere_embedding_jacobian(const Point& p) {
  const auto x = sphere_embedding(p.chart, identity_jets({p.coords.data(), static_cast<std::size_t>(p.coords.size())}, 1));
  const auto n = p.coords.size();
  Mat j(n + 1, n);
  for (Eigen::Index a = 0; a <= n; ++a)
    for (Eigen::Index i = 0; i < n; ++i) j(a, i) = x[static_cast<std::size_t>(a)].derivative({static_cast<int>(i)});
  return j;
}

Vec sphere_ambient_vector(const TangentVector& v) { return sphere_embedding_jacobian(v.at) * v.components; }

Vec sphere_chart_vector(const Point& p, const Vec& ambient) {
  const Vec x = sphere_to_ambient(p);
  const bool north = is_north(p.chart);
  const auto n = p.coords.size();
  const double denom = north ? 1.0 - x[n] : 1.0 + x[n];
  const double sign = north ? 1.0 : -1.0;
  return ambient.head(n) / denom + sign * x.head(n) * ambient[n] / (denom * denom);
}

Field ambient_sphere_field(std::string name, int n, AmbientMap map, bool unit, std::optional<Box> north_domain) {
  auto formula = [n, map = std::move(map)](const std::string& chart, std::span<const Jet> u) {
    const bool north = is_north(chart);
    const auto x = sphere_embedding(chart, u);
    const auto f = map(x);
    // Differential of the stereographic projection at x(u).
    const Jet denom = north ? 1.0 - x[n] : 1.0 + x[n];
    const Jet inv = reciprocal(denom);
    const Jet tail = (north ? 1.0 : -1.0) * f[n] * inv * inv;
    std::vector<Jet> v;
    v.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v.push_back(f[i] * inv + x[i] * tail);
    return v;
  };
  return Field(std::move(name), std::move(formula), unit, std::move(north_domain), "north");
}

Field hopf_field(int m) {
  if (m < 1) throw Error(ErrorCode::BadConfig, "hopf_field needs m >= 1");
  auto map = [](std::span<const Jet> x) {
    std::vector<Jet> f(x.size());
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      f[i] = -x[i + 1];
      f[i + 1] = x[i];
    }
    return f;
  };
  return ambient_sphere_field("hopf:" + std::to_string(m), 2 * m + 1, map);
}

Field sphere_meridian_field(int n) {
  auto map = [n](std::span<const Jet> x) {
    std::vector<Jet> v(static_cast<std::size_t>(n + 1));
    const Jet inv = reciprocal(sqrt(1.0 - x[0] * x[0]));
    for (int i = 0; i <= n; ++i) v[i] = ((i == 0 ? 1.0 : 0.0) - x[0] * x[i]) * inv;
    return v;
  };
  std::vector<Interval> axes(static_cast<std::size_t>(n));
  axes[0] = Interval{-0.6, 0.6};
  return ambient_sphere_field("meridian", n, map, true, Box(std::move(axes)));
}

WarpedSurfaceSpec make_warped_surface(double a, double alpha0, double step) {
  auto table = std::make_shared<const AlphaTable>(integrate_alpha(a, alpha0, step));
  auto metric = [table](std::span<const Jet> u) {
    JetMatrix g(2, 2);
    g(0, 0) = Jet(1.0);
    g(1, 1) = square(sin(table->evaluate(u[0])));
    return g;
  };
  const double lo = table->u_min(), hi = table->u_max();
  const double margin = 0.02 * (hi - lo);
  Box domain({Interval{lo, hi}, Interval{}});
  Box sample({Interval{lo + margin, hi - margin}, Interval{-std::numbers::pi, std::numbers::pi}});
  Manifold m("warped:" + std::to_string(a) + "," + std::to_string(alpha0), ManifoldKind::WarpedSurface,
             {Chart::from_formula("uv", domain, sample, metric)});
  return WarpedSurfaceSpec{a, alpha0, std::move(table), std::move(m)};
}

Field tg_field_2d(const WarpedSurfaceSpec& s, double omega0) { return tg_field_2d(s, s.a, omega0); }

Field tg_field_2d(const WarpedSurfaceSpec& s, double a, double omega0) {
  auto table = s.alpha;
  auto formula = [table, a, omega0](const std::string&, std::span<const Jet> u) {
    const Jet phase = a * u[1] + omega0;
    return std::vector<Jet>{cos(phase), sin(phase) / sin(table->evaluate(u[0]))};
  };
  return Field("tg2d:" + std::to_string(a) + "," + std::to_string(omega0), formula);
}

Field flat_tg_field(double a, double omega0) {
  auto formula = [a, omega0](const std::string&, std::span<const Jet> x) {
    const Jet phase = a * x[0] + omega0;
    return std::vector<Jet>{sin(phase), -cos(phase)};
  };
  return Field("flat-tg:" + std::to_string(a) + "," + std::to_string(omega0), formula);
}

Field flat_parallel_field(int n) {
  auto formula = [n](const std::string&, std::span<const Jet>) {
    std::vector<Jet> v(static_cast<std::size_t>(n), Jet(0.0));
    v[0] = Jet(1.0);
    return v;
  };
  return Field("flat-parallel", formula);
}

Field flat_radial_field(int n) {
  auto formula = [](const std::string&, std::span<const Jet> x) {
    const Jet inv = reciprocal(sqrt(squared_norm(x)));
    std::vector<Jet> v;
    for (const auto& c : x) v.push_back(c * inv);
    return v;
  };
  return Field("flat-radial", formula, true, Box::cube(n, 0.25, 2.0));
}

// ---------------------------------------------------------------------------
// Registry

namespace {

struct Key {
  std::string name;
  std::vector<double> args;
};

Key parse_key(std::string_view key) {
  Key k;
  const auto colon = key.find(':');
  k.name = std::string(key.substr(0, colon));
  if (colon == std::string_view::npos) return k;
  std::string_view rest = key.substr(colon + 1);
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view tok = rest.substr(0, comma);
    double v = 0.0;
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (tok.empty() || ec != std::errc() || ptr != last)
      throw Error(ErrorCode::BadConfig, "cannot parse numeric argument '" + std::string(tok) + "' in " + std::string(key));
    k.args.push_back(v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return k;
}

void expect_args(const Key& k, std::size_t count, std::string_view key) {
  if (k.args.size() != count)
    throw Error(ErrorCode::BadConfig, std::string(key) + ": expected " + std::to_string(count) + " argument(s)");
}

int as_int(double v, std::string_view key) {
  if (v != std::floor(v)) throw Error(ErrorCode::BadConfig, std::string(key) + ": expected an integer");
  return static_cast<int>(v);
}

}  // namespace

ManifoldEntry resolve_manifold(std::string_view key) {
  const Key k = parse_key(key);
  if (k.name == "sphere") {
    expect_args(k, 1, key);
    return {std::string(key), make_sphere(as_int(k.args[0], key)), std::nullopt};
  }
  if (k.name == "flat") {
    expect_args(k, 1, key);
    return {std::string(key), make_flat(as_int(k.args[0], key)), std::nullopt};
  }
  if (k.name == "warped") {
    expect_args(k, 2, key);
    auto spec = make_warped_surface(k.args[0], k.args[1]);
    Manifold m = spec.manifold;
    return {std::string(key), std::move(m), std::move(spec)};
  }
  throw Error(ErrorCode::UnknownRegistryKey, "unknown manifold '" + std::string(key) + "'");
}

Field resolve_field(std::string_view key, const ManifoldEntry& on) {
  const Key k = parse_key(key);
  const Manifold& m = on.manifold;
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::BadConfig, std::string(key) + " requires " + what + ", got " + m.name());
  };
  if (k.name == "hopf") {
    expect_args(k, 1, key);
    const int mm = as_int(k.args[0], key);
    require(m.kind() == ManifoldKind::UnitSphere && m.dim() == 2 * mm + 1, "sphere:" + std::to_string(2 * mm + 1));
    return hopf_field(mm);
  }
  if (k.name == "flat-tg") {
    expect_args(k, 2, key);
    require(m.kind() == ManifoldKind::Euclidean && m.dim() == 2, "flat:2");
    return flat_tg_field(k.args[0], k.args[1]);
  }
  if (k.name == "flat-parallel") {
    expect_args(k, 0, key);
    require(m.kind() == ManifoldKind::Euclidean, "a flat manifold");
    return flat_parallel_field(m.dim());
  }
  if (k.name == "flat-radial") {
    expect_args(k, 0, key);
    require(m.kind() == ManifoldKind::Euclidean, "a flat manifold");
    return flat_radial_field(m.dim());
  }
  if (k.name == "tg2d") {
    expect_args(k, 2, key);
    require(on.warped.has_value(), "a warped surface");
    return tg_field_2d(*on.warped, k.args[0], k.args[1]);
  }
  if (k.name == "meridian") {
    expect_args(k, 0, key);
    require(m.kind() == ManifoldKind::UnitSphere, "a sphere");
    return sphere_meridian_field(m.dim());
  }
  throw Error(ErrorCode::UnknownRegistryKey, "unknown field '" + std::string(key) + "'");
}

}  // namespace tgfield
