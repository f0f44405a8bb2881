#include "tgfield/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tgfield {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::DegenerateSeed: return "DegenerateSeed";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::NonUnitField: return "NonUnitField";
    case ErrorCode::NotOrthogonalToXi: return "NotOrthogonalToXi";
    case ErrorCode::NotASphere: return "NotASphere";
    case ErrorCode::ImmediateSingularity: return "ImmediateSingularity";
    case ErrorCode::ZeroParameter: return "ZeroParameter";
    case ErrorCode::SingularAbscissa: return "SingularAbscissa";
    case ErrorCode::UnknownRegistryKey: return "UnknownRegistryKey";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

namespace {

std::string describe(std::span<const double> p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

std::span<const double> as_span(const Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

// ---------------------------------------------------------------------------
// Box

bool Box::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (!axes_[i].contains(x[i])) return false;
  return true;
}

bool Box::bounded() const {
  return std::all_of(axes_.begin(), axes_.end(), [](const Interval& a) { return a.bounded(); });
}

double Box::volume() const {
  double v = 1.0;
  for (const auto& a : axes_) v *= a.hi - a.lo;
  return v;
}

Box Box::intersect(const Box& other) const {
  std::vector<Interval> axes(axes_);
  for (int i = 0; i < dim(); ++i) {
    axes[i].lo = std::max(axes[i].lo, other.axis(i).lo);
    axes[i].hi = std::min(axes[i].hi, other.axis(i).hi);
  }
  return Box(std::move(axes));
}

// ---------------------------------------------------------------------------
// Chart

Chart::Chart(std::string id, Box domain, Box sample_box, MetricJetFn metric)
    : id_(std::move(id)), domain_(std::move(domain)), sample_box_(std::move(sample_box)), metric_(std::move(metric)) {
  if (domain_.dim() < 1 || sample_box_.dim() != domain_.dim())
    throw Error(ErrorCode::DimensionMismatch, "chart " + id_ + ": inconsistent box dimensions");
}

Chart Chart::from_formula(std::string id, Box domain, Box sample_box, MetricFormula formula) {
  return Chart(std::move(id), std::move(domain), std::move(sample_box),
               [f = std::move(formula)](std::span<const double> p, int order) {
                 return f(identity_jets(p, order));
               });
}

JetMatrix Chart::metric_jet(std::span<const double> p, int order) const {
  if (!domain_.contains(p))
    throw Error(ErrorCode::PointOutsideDomain, "chart " + id_ + " does not contain " + describe(p));
  return metric_(p, order);
}

// ---------------------------------------------------------------------------
// Manifold

Manifold::Manifold(std::string name, ManifoldKind kind, std::vector<Chart> charts,
                   std::vector<ChartTransition> transitions)
    : name_(std::move(name)), kind_(kind), charts_(std::move(charts)), transitions_(std::move(transitions)) {
  if (charts_.empty()) throw Error(ErrorCode::BadConfig, "manifold " + name_ + " has no charts");
  for (const auto& c : charts_)
    if (c.dim() != charts_.front().dim())
      throw Error(ErrorCode::DimensionMismatch, "manifold " + name_ + ": charts differ in dimension");
}

const Chart& Manifold::chart(std::string_view id) const {
  for (const auto& c : charts_)
    if (c.id() == id) return c;
  throw Error(ErrorCode::UnknownRegistryKey, "manifold " + name_ + " has no chart " + std::string(id));
}

const ChartTransition* Manifold::find_transition(std::string_view from, std::string_view to) const {
  for (const auto& t : transitions_)
    if (t.from == from && t.to == to) return &t;
  return nullptr;
}

std::optional<Point> Manifold::transition(const Point& p, std::string_view to) const {
  if (p.chart == to) return p;
  const auto* t = find_transition(p.chart, to);
  if (!t) return std::nullopt;
  auto q = t->map(p.coords);
  if (!q || !chart(to).contains(as_span(*q))) return std::nullopt;
  return Point{std::string(to), *q};
}

std::optional<TangentVector> Manifold::transition(const TangentVector& v, std::string_view to) const {
  auto q = transition(v.at, to);
  if (!q) return std::nullopt;
  if (v.at.chart == to) return v;
  const auto* t = find_transition(v.at.chart, to);
  return TangentVector{*q, t->jacobian(v.at.coords) * v.components};
}

// ---------------------------------------------------------------------------
// Field

Field::Field(std::string name, Formula formula, bool unit, std::optional<Box> domain, std::string domain_chart)
    : name_(std::move(name)),
      formula_(std::move(formula)),
      unit_(unit),
      domain_(std::move(domain)),
      domain_chart_(std::move(domain_chart)) {}

std::optional<Box> Field::domain(std::string_view chart) const {
  if (!domain_chart_.empty() && chart != domain_chart_) return std::nullopt;
  return domain_;
}

bool Field::defined_at(const Point& p) const {
  const auto box = domain(p.chart);
  return !box || box->contains(as_span(p.coords));
}

std::vector<Jet> Field::jet(const Point& p, int order) const {
  if (!defined_at(p))
    throw Error(ErrorCode::PointOutsideDomain, "field " + name_ + " is not defined at " + describe(as_span(p.coords)));
  return formula_(p.chart, identity_jets(as_span(p.coords), order));
}

Vec Field::at(const Point& p) const {
  const auto j = jet(p, 0);
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].value();
  return v;
}

Mat Frame::matrix() const {
  Mat m(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  return m;
}

// ---------------------------------------------------------------------------
// LocalGeometry

void require_nonsingular(const Mat& g, std::string_view where) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < 1e-10)
    throw Error(ErrorCode::SingularMetric, std::string(where) + ": metric not positive definite within 1e-10");
}

LocalGeometry::LocalGeometry(const Manifold& m, const Point& p) : p_(p), n_(m.dim()) {
  const Chart& chart = m.chart(p.chart);
  const JetMatrix g = chart.metric_jet(as_span(p.coords), 2);
  g_ = g.value();
  require_nonsingular(g_, "chart " + chart.id());
  ginv_ = g_.inverse();

  const auto gj = christoffel_jet(g);
  const std::size_t n = static_cast<std::size_t>(n_);
  gamma_.resize(n * n * n);
  dgamma_.resize(n * n * n * n);
  for (std::size_t idx = 0; idx < gj.size(); ++idx) {
    gamma_[idx] = gj[idx].value();
    for (int l = 0; l < n_; ++l) dgamma_[idx * n + l] = gj[idx].derivative({l});
  }

  riemann_.assign(n * n * n * n, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          double r = dgamma(i, l, j, k) - dgamma(i, k, j, l);
          for (int q = 0; q < n_; ++q) r += gamma(i, k, q) * gamma(q, l, j) - gamma(i, l, q) * gamma(q, k, j);
          riemann_[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l] = r;
        }
}

Vec LocalGeometry::connection(const Vec& x, const Vec& y) const {
  Vec r = Vec::Zero(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) r[i] += gamma(i, j, k) * x[j] * y[k];
  return r;
}

Vec LocalGeometry::curvature(const Vec& x, const Vec& y, const Vec& z) const {
  Vec r = Vec::Zero(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (z[j] == 0.0) continue;
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) r[i] += riemann(i, j, k, l) * z[j] * x[k] * y[l];
    }
  return r;
}

// ---------------------------------------------------------------------------
// Kernel operations

Mat metric_at(const Manifold& m, const Point& p) {
  const Mat g = m.chart(p.chart).metric_jet(as_span(p.coords), 0).value();
  require_nonsingular(g, "metric_at");
  return g;
}

ChristoffelSample christoffel_at(const Manifold& m, const Point& p) {
  const JetMatrix g = m.chart(p.chart).metric_jet(as_span(p.coords), 1);
  require_nonsingular(g.value(), "christoffel_at");
  const auto gamma = christoffel_jet(g);
  ChristoffelSample s{p, m.dim(), {}};
  s.gamma.reserve(gamma.size());
  for (const auto& j : gamma) s.gamma.push_back(j.value());
  return s;
}

TangentVector riemann_at(const Manifold& m, const Point& p, const Vec& x, const Vec& y, const Vec& z) {
  LocalGeometry geo(m, p);
  return TangentVector{p, geo.curvature(x, y, z)};
}

TangentVector covariant_derivative(const Manifold& m, const Field& v, const TangentVector& x) {
  const auto sample = christoffel_at(m, x.at);
  const auto jv = v.jet(x.at, 1);
  const int n = m.dim();
  Vec r = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) r[i] += x.components[j] * jv[i].derivative({j});
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r[i] += sample(i, j, k) * x.components[j] * jv[k].value();
  }
  return TangentVector{x.at, r};
}

TangentVector lie_bracket(const Manifold& m, const Field& v, const Field& w, const Point& p) {
  const int n = m.dim();
  if (!m.chart(p.chart).contains(as_span(p.coords)))
    throw Error(ErrorCode::PointOutsideDomain, "lie_bracket: point outside chart " + p.chart);
  const auto jv = v.jet(p, 1);
  const auto jw = w.jet(p, 1);
  Vec r = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += jv[j].value() * jw[i].derivative({j}) - jw[j].value() * jv[i].derivative({j});
  return TangentVector{p, r};
}

Frame adapted_frame(const Manifold& m, const Field& xi, const Point& p, const std::vector<Vec>& seed) {
  const Mat g = metric_at(m, p);
  const Vec e1 = xi.at(p);
  const double norm2 = e1.dot(g * e1);
  if (std::abs(norm2 - 1.0) > 1e-10)
    throw Error(ErrorCode::NonUnitField, "adapted_frame: |xi|^2 = " + std::to_string(norm2));

  Frame f{p, {e1}};
  std::vector<Vec> pool = seed;
  const int n = m.dim();
  // Pivoted Gram-Schmidt: always take the seed with the largest remaining component.
  while (static_cast<int>(f.vectors.size()) < n) {
    int best = -1;
    double best_norm = 0.0;
    for (std::size_t s = 0; s < pool.size(); ++s) {
      for (const auto& e : f.vectors) pool[s] -= e.dot(g * pool[s]) * e;
      const double nrm = std::sqrt(std::max(0.0, pool[s].dot(g * pool[s])));
      if (nrm > best_norm) {
        best_norm = nrm;
        best = static_cast<int>(s);
      }
    }
    if (best < 0 || best_norm < 1e-12)
      throw Error(ErrorCode::DegenerateSeed, "adapted_frame: seed does not span a complement of xi");
    Vec e = pool[best] / best_norm;
    // Second pass keeps orthonormality at the 1e-15 level.
    for (const auto& q : f.vectors) e -= q.dot(g * e) * q;
    e /= std::sqrt(e.dot(g * e));
    f.vectors.push_back(e);
    pool.erase(pool.begin() + best);
  }
  return f;
}

Frame adapted_frame(const Manifold& m, const Field& xi, const Point& p) {
  std::vector<Vec> seed;
  for (int i = 0; i < m.dim(); ++i) seed.push_back(Vec::Unit(m.dim(), i));
  return adapted_frame(m, xi, p, seed);
}

double sectional_curvature(const LocalGeometry& geo, const Vec& x, const Vec& y) {
  const double denom = geo.inner(x, x) * geo.inner(y, y) - std::pow(geo.inner(x, y), 2);
  if (denom < 1e-12) throw Error(ErrorCode::DegeneratePlane, "sectional_curvature: vectors span no plane");
  return geo.inner(geo.curvature(x, y, y), x) / denom;
}

double sectional_curvature(const Manifold& m, const Point& p, const Vec& x, const Vec& y) {
  return sectional_curvature(LocalGeometry(m, p), x, y);
}

// ---------------------------------------------------------------------------
// Finite differences

ChristoffelSample christoffel_fd(const Manifold& m, const Point& p, double step) {
  const Chart& chart = m.chart(p.chart);
  const int n = m.dim();
  const Mat g = chart.metric_jet(as_span(p.coords), 0).value();
  require_nonsingular(g, "christoffel_fd");
  const Mat ginv = g.inverse();
  std::vector<Mat> dg;
  for (int l = 0; l < n; ++l) {
    Vec plus = p.coords, minus = p.coords;
    plus[l] += step;
    minus[l] -= step;
    dg.push_back((chart.metric_jet(as_span(plus), 0).value() - chart.metric_jet(as_span(minus), 0).value()) /
                 (2.0 * step));
  }
  ChristoffelSample s{p, n, std::vector<double>(static_cast<std::size_t>(n) * n * n, 0.0)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int l = 0; l < n; ++l) v += 0.5 * ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
        s.gamma[(static_cast<std::size_t>(i) * n + j) * n + k] = v;
      }
  return s;
}

std::vector<double> riemann_fd(const Manifold& m, const Point& p, double step) {
  const int n = m.dim();
  const auto g0 = christoffel_fd(m, p, step);
  std::vector<ChristoffelSample> dplus, dminus;
  for (int l = 0; l < n; ++l) {
    Point a = p, b = p;
    a.coords[l] += step;
    b.coords[l] -= step;
    dplus.push_back(christoffel_fd(m, a, step));
    dminus.push_back(christoffel_fd(m, b, step));
  }
  auto dgamma = [&](int i, int j, int k, int l) { return (dplus[l](i, j, k) - dminus[l](i, j, k)) / (2.0 * step); };
  std::vector<double> r(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = dgamma(i, l, j, k) - dgamma(i, k, j, l);
          for (int q = 0; q < n; ++q) v += g0(i, k, q) * g0(q, l, j) - g0(i, l, q) * g0(q, k, j);
          r[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l] = v;
        }
  return r;
}

}  // namespace tgfield
