#include "tgfield/field_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tgfield {

namespace {

std::span<const double> as_span(const Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

PointwiseField::PointwiseField(const Manifold& m, const Field& xi, const Point& p) : geo_(m, p) {
  const int n = geo_.dim();
  const auto j = xi.jet(p, 2);
  if (static_cast<int>(j.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "field " + xi.name() + " has the wrong number of components");

  xi_.resize(n);
  Mat d1(n, n);
  std::vector<Mat> d2(static_cast<std::size_t>(n), Mat(n, n));  // d2[l](i, j) = d_l d_j xi^i
  for (int i = 0; i < n; ++i) {
    xi_[i] = j[i].value();
    for (int a = 0; a < n; ++a) {
      d1(i, a) = j[i].derivative({a});
      for (int l = 0; l < n; ++l) d2[l](i, a) = j[i].derivative({a, l});
    }
  }

  // nabla(i, a) = (nabla_{d_a} xi)^i
  Mat nabla = d1;
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < n; ++k) nabla(i, a) += geo_.gamma(i, a, k) * xi_[k];
  a_ = -nabla;

  nabla2_.assign(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) {
        double v = d2[l](i, a);
        for (int k = 0; k < n; ++k) v += geo_.dgamma(i, a, k, l) * xi_[k] + geo_.gamma(i, a, k) * d1(k, l);
        for (int q = 0; q < n; ++q) v += geo_.gamma(i, l, q) * nabla(q, a) - geo_.gamma(q, l, a) * nabla(i, q);
        nabla2_[l](i, a) = v;
      }
}

Vec PointwiseField::nabla_a(const Vec& x, const Vec& y) const {
  Vec r = Vec::Zero(dim());
  for (int l = 0; l < dim(); ++l)
    if (x[l] != 0.0) r -= x[l] * (nabla2_[l] * y);
  return r;
}

Vec PointwiseField::hess(const Vec& x, const Vec& y) const { return 0.5 * (nabla_a(y, x) + nabla_a(x, y)); }

Vec PointwiseField::hm(const Vec& x, const Vec& y) const {
  return 0.5 * (curvature(xi_, shape(x), y) + curvature(xi_, shape(y), x));
}

double PointwiseField::lie_metric(const Vec& x, const Vec& y) const {
  return inner(nabla_xi(x), y) + inner(x, nabla_xi(y));
}

Vec PointwiseField::tg_residual(const Vec& x, const Vec& y) const {
  return hess(x, y) + shape(hm(x, y)) - inner(shape(x), shape(y)) * xi_;
}

Vec PointwiseField::sphere_tg_residual(const Vec& x, const Vec& y) const {
  const Vec ax = shape(x);
  const Vec ay = shape(y);
  const Vec bracket = lie_metric(x, y) * shape(xi_) + inner(xi_, x) * (shape(ay) + y) + inner(xi_, y) * (shape(ax) - x);
  return nabla_a(x, y) - 0.5 * bracket - inner(ax, ay) * xi_;
}

double PointwiseField::grad_norm2() const {
  return (shape_adjoint_matrix() * a_).trace();
}

Vec PointwiseField::rough_laplacian(const Frame& frame) const {
  Vec r = Vec::Zero(dim());
  for (const auto& e : frame.vectors) r -= hess(e, e);
  return r;
}

Vec PointwiseField::rough_laplacian_trace() const {
  const Mat& ginv = geo_.inverse_metric();
  Vec r = Vec::Zero(dim());
  for (int l = 0; l < dim(); ++l)
    for (int a = 0; a < dim(); ++a) r += ginv(a, l) * nabla2_[l].col(a);
  return r;
}

void require_unit(const PointwiseField& f) {
  const double n2 = f.inner(f.xi(), f.xi());
  if (std::abs(n2 - 1.0) > kUnitTolerance)
    throw Error(ErrorCode::NonUnitField, "field is not unit at the sample point: |xi|^2 = " + std::to_string(n2));
}

namespace {

PointwiseField unit_field(const Manifold& m, const Field& xi, const Point& p) {
  PointwiseField f(m, xi, p);
  require_unit(f);
  return f;
}

VectorResidual residual(const PointwiseField& f, Vec v) {
  const double n = f.geometry().norm(v);
  return VectorResidual{std::move(v), n};
}

// Frame components of a (1,1)-tensor: entry (i, j) = <e_i, T e_j>.
Mat frame_matrix(const PointwiseField& f, const Frame& frame, const Mat& t) {
  const Mat e = frame.matrix();
  return e.transpose() * f.geometry().metric() * t * e;
}

}  // namespace

ShapeOperatorSample shape_operator(const Manifold& m, const Field& xi, const Point& p, const Frame& frame) {
  const auto f = unit_field(m, xi, p);
  const Mat a = frame_matrix(f, frame, f.shape_matrix());
  const Mat at = frame_matrix(f, frame, f.shape_adjoint_matrix());
  return ShapeOperatorSample{p, a, at};
}

Vec nabla_a(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y) {
  return unit_field(m, xi, p).nabla_a(x, y);
}

Vec nabla_a(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Field& y) {
  // -(nabla_X nabla_Y xi - nabla_{nabla_X Y} xi) with Y a genuine field.
  const auto f = unit_field(m, xi, p);
  const int n = m.dim();
  const auto jx = xi.jet(p, 2);
  const auto jy = y.jet(p, 2);
  const auto gamma = christoffel_jet(m.chart(p.chart).metric_jet(as_span(p.coords), 2));
  auto gam = [&](int i, int j, int k) -> const Jet& { return gamma[(static_cast<std::size_t>(i) * n + j) * n + k]; };

  // Z = nabla_Y xi as a jet field
  std::vector<Jet> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Jet v = Jet(0.0);
    for (int j = 0; j < n; ++j) {
      v += jy[j] * jx[i].partial(j);
      for (int k = 0; k < n; ++k) v += gam(i, j, k) * jy[j] * jx[k];
    }
    z[i] = v;
  }
  Vec nxz = Vec::Zero(n), nxy = Vec::Zero(n), yv(n), zv(n);
  for (int i = 0; i < n; ++i) {
    yv[i] = jy[i].value();
    zv[i] = z[i].value();
  }
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      nxz[i] += x[l] * z[i].derivative({l});
      nxy[i] += x[l] * jy[i].derivative({l});
    }
  nxz += f.geometry().connection(x, zv);
  nxy += f.geometry().connection(x, yv);
  return -(nxz - f.nabla_xi(nxy));
}

Vec hess(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y) {
  return unit_field(m, xi, p).hess(x, y);
}

Vec hm(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y) {
  return unit_field(m, xi, p).hm(x, y);
}

VectorResidual harmonic_residual(const Manifold& m, const Field& xi, const Point& p) {
  const auto f = unit_field(m, xi, p);
  const Frame frame = adapted_frame(m, xi, p);
  double g2 = 0.0;
  for (const auto& e : frame.vectors) {
    const Vec ae = f.shape(e);
    g2 += f.inner(ae, ae);
  }
  return residual(f, f.rough_laplacian(frame) + g2 * f.xi());
}

VectorResidual harmonic_map_residual(const PointwiseField& f, const Frame& frame) {
  Vec r = Vec::Zero(f.dim());
  for (const auto& e : frame.vectors) r += f.hm(e, e);
  return residual(f, r);
}

VectorResidual harmonic_map_residual(const Manifold& m, const Field& xi, const Point& p) {
  const auto f = unit_field(m, xi, p);
  return harmonic_map_residual(f, adapted_frame(m, xi, p));
}

VectorResidual tg_residual(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y) {
  const auto f = unit_field(m, xi, p);
  return residual(f, f.tg_residual(x, y));
}

VectorResidual sphere_tg_residual(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y) {
  if (m.kind() != ManifoldKind::UnitSphere)
    throw Error(ErrorCode::NotASphere, "sphere_tg_residual requires a built-in unit sphere, got " + m.name());
  const auto f = unit_field(m, xi, p);
  return residual(f, f.sphere_tg_residual(x, y));
}

GeodesicCurvatureSample geodesic_curvature(const Manifold& m, const Field& xi, const Point& p) {
  const PointwiseField f(m, xi, p);
  const Vec w = f.nabla_xi(f.xi());
  const double k = f.geometry().norm(w);
  GeodesicCurvatureSample s{p, k, std::nullopt};
  if (k > kGeodesicThreshold) s.nu = Vec(-w / k);
  return s;
}

MinimalityResidual minimality_residual(const Manifold& m, const Field& xi, const Point& p) {
  const PointwiseField f(m, xi, p);
  const int n = m.dim();
  const auto jx = xi.jet(p, 2);
  const JetMatrix g = m.chart(p.chart).metric_jet(as_span(p.coords), 2);
  const auto gamma = christoffel_jet(g);

  // W = nabla_xi xi to first order
  std::vector<Jet> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Jet v = Jet(0.0);
    for (int j = 0; j < n; ++j) {
      v += jx[j] * jx[i].partial(j);
      for (int k = 0; k < n; ++k) v += gamma[(static_cast<std::size_t>(i) * n + j) * n + k] * jx[j] * jx[k];
    }
    w[i] = v.truncated(1);
  }
  Jet k2 = Jet(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k2 += g(i, j) * w[i] * w[j];
  MinimalityResidual out{Vec::Zero(n), 0.0, std::sqrt(std::max(k2.value(), 0.0)), false};
  if (out.k < kGeodesicThreshold) {
    out.degenerate = true;
    return out;
  }

  const Jet k = sqrt(k2);
  const Jet inv_k = reciprocal(k);
  std::vector<Jet> nu(static_cast<std::size_t>(n));
  Vec nuv(n);
  for (int i = 0; i < n; ++i) {
    nu[i] = w[i] * inv_k;
    nuv[i] = nu[i].value();
  }
  const Vec& x = f.xi();
  double xik = 0.0;
  for (int j = 0; j < n; ++j) xik += x[j] * k.derivative({j});
  Vec bracket = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) bracket[i] += x[j] * nu[i].derivative({j}) - nuv[j] * jx[i].derivative({j});

  const double kv = k.value();
  out.vector = kv * bracket + xik * nuv - kv * f.shape(f.curvature(nuv, x, x)) + kv * kv * x;
  out.norm = f.geometry().norm(out.vector);
  return out;
}

std::map<std::string, double> classification_defects(const PointwiseField& f, const Frame& frame) {
  const int n = f.dim();
  const Mat af = frame_matrix(f, frame, f.shape_matrix());
  std::map<std::string, double> d;
  d["geodesic"] = af.col(0).norm();
  d["holonomic"] = (af - af.transpose()).norm();
  d["killing"] = (af + af.transpose()).norm();
  d["covariantly_normal"] = (af.transpose() * af - af * af.transpose()).norm();

  double strn = 0.0;
  for (int a = 1; a < n; ++a)
    for (int b = 1; b < n; ++b) {
      const Vec& x = frame.vectors[a];
      const Vec& y = frame.vectors[b];
      const Vec r = f.nabla_a(x, y) - f.inner(f.shape(x), f.shape(y)) * f.xi();
      strn = std::max(strn, f.geometry().norm(r));
    }
  d["strongly_normal"] = strn;

  // phi = A, eta = <., xi>; in the adapted frame xi = e_0.
  Mat eta_xi = Mat::Zero(n, n);
  eta_xi(0, 0) = 1.0;
  const double phi2 = (af * af + Mat::Identity(n, n) - eta_xi).norm();
  const double phi_xi = af.col(0).norm();
  const double eta_phi = af.row(0).norm();
  const double eta_of_xi = std::abs(f.inner(f.xi(), f.xi()) - 1.0);
  d["invariant"] = std::max({phi2, phi_xi, eta_phi, eta_of_xi});
  return d;
}

ClassificationRecord classify(const Manifold& m, const Field& xi, const std::vector<Point>& points, double tolerance) {
  ClassificationRecord rec;
  rec.sample_points = points;
  std::map<std::string, double> worst;
  for (const auto& p : points) {
    if (!m.chart(p.chart).contains(as_span(p.coords)))
      throw Error(ErrorCode::PointOutsideDomain, "classify: sample point outside chart " + p.chart);
    const auto f = unit_field(m, xi, p);
    const auto d = classification_defects(f, adapted_frame(m, xi, p));
    for (const auto& [name, v] : d) worst[name] = std::max(worst[name], v);
  }
  for (const auto& [name, v] : worst) rec.flags[name] = FlagResult{v < tolerance, v, tolerance};
  return rec;
}

double grad_norm2_at(const Manifold& m, const Field& xi, const Point& p) {
  const int n = m.dim();
  const JetMatrix gj = m.chart(p.chart).metric_jet(as_span(p.coords), 1);
  const Mat g = gj.value();
  require_nonsingular(g, "grad_norm2_at");
  const auto gamma = christoffel_jet(gj);
  const auto j = xi.jet(p, 1);
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) {
      double v = j[i].derivative({c});
      for (int k = 0; k < n; ++k) v += gamma[(static_cast<std::size_t>(i) * n + c) * n + k].value() * j[k].value();
      a(i, c) = -v;
    }
  return (g.inverse() * a.transpose() * g * a).trace();
}

double integrate(const Manifold& m, const QuadratureGrid& grid, const std::function<double(const Point&)>& f) {
  const Chart& chart = m.chart(grid.chart);
  const int n = chart.dim();
  if (grid.box.dim() != n || !grid.box.bounded())
    throw Error(ErrorCode::BadConfig, "quadrature box must be bounded with the chart dimension");
  static constexpr std::array<double, 3> nodes = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr std::array<double, 3> weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const int per_axis = 3 * grid.cells;

  std::vector<std::vector<double>> xs(static_cast<std::size_t>(n)), ws(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    const double lo = grid.box.axis(d).lo;
    const double h = (grid.box.axis(d).hi - lo) / grid.cells;
    for (int c = 0; c < grid.cells; ++c)
      for (int q = 0; q < 3; ++q) {
        xs[d].push_back(lo + h * (c + 0.5 * (nodes[q] + 1.0)));
        ws[d].push_back(0.5 * h * weights[q]);
      }
  }

  double total = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Point p{grid.chart, Vec(n)};
  while (true) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      p.coords[d] = xs[d][idx[d]];
      w *= ws[d][idx[d]];
    }
    const Mat g = chart.metric_jet(as_span(p.coords), 0).value();
    total += w * std::sqrt(g.determinant()) * f(p);
    int d = 0;
    while (d < n && ++idx[d] == per_axis) idx[d++] = 0;
    if (d == n) break;
  }
  return total;
}

double total_bending(const Manifold& m, const Field& xi, const QuadratureGrid& grid) {
  return integrate(m, grid, [&](const Point& p) { return grad_norm2_at(m, xi, p); });
}

}  // namespace tgfield
