#include "tgfield/sasaki.hpp"

#include <cmath>
#include <memory>
#include <numeric>

#include "tgfield/builtin.hpp"

namespace tgfield {

namespace {

bool horizontal_first(LiftCombo c) { return c == LiftCombo::HH || c == LiftCombo::HV; }
bool horizontal_second(LiftCombo c) { return c == LiftCombo::HH || c == LiftCombo::VH; }

/// Gamma^i_{jk} a^j b^k
Vec contract(const ChristoffelSample& g, const Vec& a, const Vec& b) {
  const int n = g.dim;
  Vec out = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[i] += g(i, j, k) * a[j] * b[k];
  return out;
}

void check_fiber(const Manifold& m, const BundlePoint& q) {
  if (q.fiber.size() != m.dim() || q.base.coords.size() != m.dim())
    throw Error(ErrorCode::DimensionMismatch, "bundle point does not match dim " + std::to_string(m.dim()));
}

struct FirstOrder {
  Vec xi;
  Mat a;  // (A X)^i = a(i, j) X^j
  Mat g;
};

FirstOrder first_order(const Manifold& m, const Field& xi, const Point& p) {
  const int n = m.dim();
  const auto jets = xi.jet(p, 1);
  const auto gamma = christoffel_at(m, p);
  FirstOrder f{Vec(n), Mat(n, n), metric_at(m, p)};
  for (int i = 0; i < n; ++i) f.xi[i] = jets[i].value();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = jets[i].derivative({j});
      for (int k = 0; k < n; ++k) s += gamma(i, j, k) * f.xi[k];
      f.a(i, j) = -s;
    }
  if (std::abs(f.xi.dot(f.g * f.xi) - 1.0) > kUnitTolerance)
    throw Error(ErrorCode::NonUnitField, "field " + xi.name() + " is not unit at the given point");
  return f;
}

void require_orthogonal(const Mat& g, const Vec& xi, const Vec& n) {
  const double ip = xi.dot(g * n);
  if (std::abs(ip) > 1e-10 * std::max(1.0, std::sqrt(n.dot(g * n))))
    throw Error(ErrorCode::NotOrthogonalToXi, "<N, xi> = " + std::to_string(ip));
}

double sff_formula(const PointwiseField& f, const Vec& x, const Vec& y, const Vec& n) {
  require_orthogonal(f.geometry().metric(), f.xi(), n);
  return -f.inner(f.hess(x, y) + f.shape(f.hm(x, y)), n);
}

Vec span_vec(std::span<const double> p) { return Eigen::Map<const Vec>(p.data(), static_cast<Eigen::Index>(p.size())); }

}  // namespace

BundlePoint bundle_point(const Field& xi, const Point& p) { return BundlePoint{p, xi.at(p)}; }

Point bundle_chart_point(const BundlePoint& q) {
  const auto n = q.base.coords.size();
  Vec c(2 * n);
  c << q.base.coords, q.fiber;
  return Point{q.base.chart, c};
}

BundleVector lift(const Manifold& m, const BundlePoint& q, const Vec& x, LiftKind kind) {
  check_fiber(m, q);
  const int n = m.dim();
  BundleVector v{q, Vec::Zero(2 * n)};
  if (kind == LiftKind::Vertical) {
    v.components.tail(n) = x;
    return v;
  }
  v.components.head(n) = x;
  v.components.tail(n) = -contract(christoffel_at(m, q.base), q.fiber, x);
  return v;
}

LiftDecomposition decompose(const Manifold& m, const BundleVector& v) {
  check_fiber(m, v.at);
  const int n = m.dim();
  const Vec h = v.components.head(n);
  const Vec k = v.components.tail(n) + contract(christoffel_at(m, v.at.base), v.at.fiber, h);
  return LiftDecomposition{TangentVector{v.at.base, h}, TangentVector{v.at.base, k}};
}

BundleVector assemble(const Manifold& m, const BundlePoint& q, const Vec& horizontal, const Vec& vertical) {
  BundleVector v = lift(m, q, horizontal, LiftKind::Horizontal);
  v.components.tail(m.dim()) += vertical;
  return v;
}

Mat sasaki_metric_at(const Manifold& m, const BundlePoint& q) {
  check_fiber(m, q);
  const int n = m.dim();
  const Mat g = metric_at(m, q.base);
  const auto gamma = christoffel_at(m, q.base);
  // K U = U^w + M U^u with M^i_k = Gamma^i_{jk} w^j.
  Mat mm = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) mm(i, k) += gamma(i, j, k) * q.fiber[j];
  Mat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = g + mm.transpose() * g * mm;
  out.topRightCorner(n, n) = mm.transpose() * g;
  out.bottomLeftCorner(n, n) = g * mm;
  out.bottomRightCorner(n, n) = g;
  require_nonsingular(out, "sasaki_metric_at");
  return out;
}

double sasaki_inner(const Manifold& m, const BundleVector& u, const BundleVector& v) {
  return u.components.dot(sasaki_metric_at(m, u.at) * v.components);
}

Manifold tangent_bundle(const Manifold& m) {
  auto base = std::make_shared<const Manifold>(m);
  const int n = m.dim();
  std::vector<Chart> charts;
  for (const auto& c : m.charts()) {
    auto domain = c.domain().axes();
    auto sample = c.sample_box().axes();
    domain.resize(2 * static_cast<std::size_t>(n));
    sample.resize(2 * static_cast<std::size_t>(n), Interval{-1.0, 1.0});
    auto metric = [base, id = c.id(), n](std::span<const double> p, int order) {
      const JetMatrix g0 = base->chart(id).metric_jet(p.first(static_cast<std::size_t>(n)), order + 1);
      const auto gamma0 = christoffel_jet(g0);
      const auto& table = MonomialTable::get(2 * n, order);
      std::vector<int> vars(static_cast<std::size_t>(n));
      std::iota(vars.begin(), vars.end(), 0);
      std::vector<Jet> w;
      for (int j = 0; j < n; ++j) w.push_back(Jet::variable(2 * n, order, n + j, p[n + j]));

      JetMatrix g(n, n), mm(n, n);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          g(i, k) = g0(i, k).embedded(table, vars);
          Jet s = Jet::zero(2 * n, order);
          for (int j = 0; j < n; ++j) s += gamma0[(static_cast<std::size_t>(i) * n + j) * n + k].embedded(table, vars) * w[j];
          mm(i, k) = s;
        }
      const JetMatrix upper = g + transpose(mm) * g * mm;
      const JetMatrix cross = g * mm;
      JetMatrix out(2 * n, 2 * n);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          out(i, k) = upper(i, k);
          out(n + i, k) = cross(i, k);
          out(k, n + i) = cross(i, k);
          out(n + i, n + k) = g(i, k);
        }
      return out;
    };
    charts.emplace_back(c.id(), Box(std::move(domain)), Box(std::move(sample)), metric);
  }
  return Manifold("T" + m.name(), ManifoldKind::Generic, std::move(charts));
}

LiftDecomposition kowalski_derivative(const Manifold& m, const BundlePoint& q, LiftCombo combo, const Vec& x,
                                      const Vec& y) {
  check_fiber(m, q);
  const int n = m.dim();
  LiftDecomposition out{TangentVector{q.base, Vec::Zero(n)}, TangentVector{q.base, Vec::Zero(n)}};
  if (combo == LiftCombo::VV) return out;
  const LocalGeometry geo(m, q.base);
  const Vec& w = q.fiber;
  switch (combo) {
    case LiftCombo::HH:
      out.horizontal_part.components = geo.connection(x, y);
      out.vertical_part.components = -0.5 * geo.curvature(x, y, w);
      break;
    case LiftCombo::VH:
      out.horizontal_part.components = 0.5 * geo.curvature(w, x, y);
      break;
    case LiftCombo::HV:
      out.horizontal_part.components = 0.5 * geo.curvature(w, y, x);
      out.vertical_part.components = geo.connection(x, y);
      break;
    case LiftCombo::VV:
      break;
  }
  return out;
}

BundleVector bundle_connection(const Manifold& m, const BundlePoint& q, LiftCombo combo, const Vec& x,
                               const Vec& y) {
  check_fiber(m, q);
  const int n = m.dim();
  const BundleVector u = lift(m, q, x, horizontal_first(combo) ? LiftKind::Horizontal : LiftKind::Vertical);
  const BundleVector v = lift(m, q, y, horizontal_second(combo) ? LiftKind::Horizontal : LiftKind::Vertical);

  // Directional derivative of the lifted field Y^h along U; Y^v is constant.
  Vec dv = Vec::Zero(2 * n);
  if (horizontal_second(combo)) {
    const LocalGeometry geo(m, q.base);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double du = 0.0;
          for (int l = 0; l < n; ++l) du += geo.dgamma(i, j, k, l) * u.components[l];
          s += (du * q.fiber[j] + geo.gamma(i, j, k) * u.components[n + j]) * y[k];
        }
      dv[n + i] = -s;
    }
  }
  const auto tm_gamma = christoffel_at(tangent_bundle(m), bundle_chart_point(q));
  return BundleVector{q, dv + contract(tm_gamma, u.components, v.components)};
}

BundleVector pushforward(const Manifold& m, const Field& xi, const TangentVector& x) {
  const FirstOrder f = first_order(m, xi, x.at);
  const BundlePoint q{x.at, f.xi};
  return assemble(m, q, x.components, -(f.a * x.components));
}

BundleVector normal_field(const Manifold& m, const Field& xi, const TangentVector& n) {
  const FirstOrder f = first_order(m, xi, n.at);
  require_orthogonal(f.g, f.xi, n.components);
  const Mat at = f.g.inverse() * f.a.transpose() * f.g;
  return assemble(m, BundlePoint{n.at, f.xi}, at * n.components, n.components);
}

double sff_formula(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y, const Vec& n) {
  const PointwiseField f(m, xi, p);
  require_unit(f);
  return sff_formula(f, x, y, n);
}

double sff_oracle(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y, const Vec& n) {
  const int dim = m.dim();
  const auto jets = xi.jet(p, 2);
  Vec w(dim);
  Mat d1(dim, dim);
  for (int i = 0; i < dim; ++i) {
    w[i] = jets[i].value();
    for (int l = 0; l < dim; ++l) d1(i, l) = jets[i].derivative({l});
  }
  const JetMatrix g0 = m.chart(p.chart).metric_jet({p.coords.data(), static_cast<std::size_t>(dim)}, 1);
  const Mat g = g0.value();
  if (std::abs(w.dot(g * w) - 1.0) > kUnitTolerance)
    throw Error(ErrorCode::NonUnitField, "field " + xi.name() + " is not unit at the given point");
  require_orthogonal(g, w, n);

  const BundlePoint q{p, w};
  const Manifold tm = tangent_bundle(m);
  const Point qc = bundle_chart_point(q);
  const JetMatrix gj = tm.chart(p.chart).metric_jet({qc.coords.data(), static_cast<std::size_t>(2 * dim)}, 1);
  const Mat big = gj.value();
  ChristoffelSample tm_gamma{qc, 2 * dim, {}};
  for (const auto& c : christoffel_jet(gj)) tm_gamma.gamma.push_back(c.value());

  // Embedding u -> (u, xi(u)): F_* X = (X, dxi(X)).
  auto push = [&](const Vec& v) {
    Vec out(2 * dim);
    out << v, d1 * v;
    return out;
  };
  const Vec fx = push(x), fy = push(y);
  Vec d = contract(tm_gamma, fx, fy);
  for (int i = 0; i < dim; ++i)
    for (int l = 0; l < dim; ++l)
      for (int j = 0; j < dim; ++j) d[dim + i] += jets[i].derivative({l, j}) * x[l] * y[j];

  // T1M is the level set g_ij(u) w^i w^j = 1; drop the component along its unit normal.
  Vec df(2 * dim);
  for (int l = 0; l < dim; ++l) {
    const Mat dg = g0.partial(l).value();
    df[l] = w.dot(dg * w);
  }
  df.tail(dim) = 2.0 * g * w;
  Vec nu = big.ldlt().solve(df);
  nu /= std::sqrt(nu.dot(big * nu));
  d -= nu.dot(big * d) * nu;

  // Normal part with respect to xi(M).
  Mat t(2 * dim, dim);
  for (int i = 0; i < dim; ++i) t.col(i) = push(Vec::Unit(dim, i));
  const Mat gram = t.transpose() * big * t;
  d -= t * gram.ldlt().solve(t.transpose() * (big * d));

  const BundleVector nt = normal_field(m, xi, TangentVector{p, n});
  return nt.components.dot(big * d);
}

Mat sff_frame_matrix(const Manifold& m, const Field& xi, const Frame& frame, int sigma) {
  const PointwiseField f(m, xi, frame.at);
  require_unit(f);
  const auto n = frame.vectors.size();
  Mat out(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      out(a, b) = sff_formula(f, frame.vectors[a], frame.vectors[b], frame.vectors[sigma]);
  return out;
}

double pullback_metric(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y) {
  const FirstOrder f = first_order(m, xi, p);
  return x.dot(f.g * y) + (f.a * x).dot(f.g * (f.a * y));
}

Manifold pullback_manifold(const Manifold& m, const Field& xi, double scale) {
  auto base = std::make_shared<const Manifold>(m);
  const int n = m.dim();
  std::vector<Chart> charts;
  for (const auto& c : m.charts()) {
    auto metric = [base, xi, id = c.id(), n, scale](std::span<const double> p, int order) {
      const JetMatrix g = base->chart(id).metric_jet(p, order + 1);
      const auto gamma = christoffel_jet(g);
      const auto xj = xi.jet(Point{id, span_vec(p)}, order + 1);
      // dxi(a, i) = (nabla_i xi)^a
      JetMatrix dxi(n, n);
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) {
          Jet s = xj[a].partial(i);
          for (int b = 0; b < n; ++b) s += gamma[(static_cast<std::size_t>(a) * n + i) * n + b] * xj[b];
          dxi(a, i) = s;
        }
      const JetMatrix gt = g.truncated(order);
      return (gt + transpose(dxi) * gt * dxi).scaled(scale);
    };
    charts.emplace_back(c.id(), c.domain(), c.sample_box(), metric);
  }
  return Manifold(m.name() + "/" + xi.name(), ManifoldKind::Generic, std::move(charts));
}

std::string_view to_string(MetricScaling s) { return s == MetricScaling::Sasaki ? "sasaki" : "quarter"; }

double scale_factor(MetricScaling s) { return s == MetricScaling::Sasaki ? 1.0 : 0.25; }

double phi_sectional_curvature(const Manifold& m, const Field& xi, const Point& p, const Vec& x,
                               MetricScaling scaling) {
  const FirstOrder f = first_order(m, xi, p);
  require_orthogonal(f.g, f.xi, x);
  const Manifold pulled = pullback_manifold(m, xi, scale_factor(scaling));
  return sectional_curvature(pulled, p, x, f.a * x);
}

double phi_sectional_curvature(int m, const Point& p, const Vec& x, MetricScaling scaling) {
  return phi_sectional_curvature(make_sphere(2 * m + 1), hopf_field(m), p, x, scaling);
}

BundleVector almost_complex(const Manifold& m, const BundleVector& v) {
  const auto d = decompose(m, v);
  return assemble(m, v.at, -d.vertical_part.components, d.horizontal_part.components);
}

double almost_complex_defect(const Manifold& m, const BundlePoint& q) {
  const int n = m.dim();
  std::vector<BundleVector> basis;
  for (int i = 0; i < n; ++i) basis.push_back(lift(m, q, Vec::Unit(n, i), LiftKind::Horizontal));
  for (int i = 0; i < n; ++i) basis.push_back(lift(m, q, Vec::Unit(n, i), LiftKind::Vertical));
  const Mat g = sasaki_metric_at(m, q);
  std::vector<Vec> images;
  double defect = 0.0;
  for (const auto& b : basis) {
    const BundleVector jb = almost_complex(m, b);
    const BundleVector jjb = almost_complex(m, jb);
    defect = std::max(defect, (jjb.components + b.components).norm());
    images.push_back(jb.components);
  }
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b)
      defect = std::max(defect, std::abs(images[a].dot(g * images[b]) -
                                         basis[a].components.dot(g * basis[b].components)));
  return defect;
}

}  // namespace tgfield
