// Chart-based Riemannian geometry: metrics, Levi-Civita connection, curvature.
//
// Every quantity is evaluated pointwise in a single chart. Derivatives come
// from truncated Taylor jets of the metric and of the fields; a central
// finite-difference path is provided for cross-checks.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tgfield/errors.hpp"
#include "tgfield/jet.hpp"
#include "tgfield/jet_matrix.hpp"

namespace tgfield {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lo && x < hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// Product of open intervals.
class Box {
public:
  Box() = default;
  explicit Box(std::vector<Interval> axes) : axes_(std::move(axes)) {}
  static Box unbounded(int dim) { return Box(std::vector<Interval>(static_cast<std::size_t>(dim))); }
  static Box cube(int dim, double lo, double hi) {
    return Box(std::vector<Interval>(static_cast<std::size_t>(dim), Interval{lo, hi}));
  }

  int dim() const { return static_cast<int>(axes_.size()); }
  const Interval& axis(int i) const { return axes_[i]; }
  const std::vector<Interval>& axes() const { return axes_; }
  bool contains(std::span<const double> x) const;
  bool bounded() const;
  double volume() const;
  /// Axis-wise intersection.
  Box intersect(const Box& other) const;

private:
  std::vector<Interval> axes_;
};

struct Point {
  std::string chart;
  Vec coords;
};

struct TangentVector {
  Point at;
  Vec components;
};

/// A coordinate chart with its metric components g_ij.
class Chart {
public:
  /// Metric Taylor expansion at a point, to the requested order.
  using MetricJetFn = std::function<JetMatrix(std::span<const double>, int)>;
  /// Metric written in jet arithmetic; it is evaluated on identity jets.
  using MetricFormula = std::function<JetMatrix(std::span<const Jet>)>;

  Chart(std::string id, Box domain, Box sample_box, MetricJetFn metric);
  static Chart from_formula(std::string id, Box domain, Box sample_box, MetricFormula formula);

  const std::string& id() const { return id_; }
  int dim() const { return domain_.dim(); }
  const Box& domain() const { return domain_; }
  /// Finite box inside the domain used for random sampling.
  const Box& sample_box() const { return sample_box_; }

  /// Throws PointOutsideDomain when p is not in the open domain.
  JetMatrix metric_jet(std::span<const double> p, int order) const;
  bool contains(std::span<const double> p) const { return domain_.contains(p); }

private:
  std::string id_;
  Box domain_;
  Box sample_box_;
  MetricJetFn metric_;
};

enum class ManifoldKind { Generic, Euclidean, UnitSphere, WarpedSurface };

struct ChartTransition {
  std::string from;
  std::string to;
  /// Empty when the point is not in the overlap.
  std::function<std::optional<Vec>(const Vec&)> map;
  /// d(to-coordinates)/d(from-coordinates).
  std::function<Mat(const Vec&)> jacobian;
};

class Manifold {
public:
  Manifold(std::string name, ManifoldKind kind, std::vector<Chart> charts,
           std::vector<ChartTransition> transitions = {});

  const std::string& name() const { return name_; }
  ManifoldKind kind() const { return kind_; }
  int dim() const { return charts_.front().dim(); }
  const std::vector<Chart>& charts() const { return charts_; }
  const Chart& chart(std::string_view id) const;
  const Chart& default_chart() const { return charts_.front(); }

  Point point(Vec coords) const { return Point{default_chart().id(), std::move(coords)}; }
  std::optional<Point> transition(const Point& p, std::string_view to) const;
  std::optional<TangentVector> transition(const TangentVector& v, std::string_view to) const;

private:
  const ChartTransition* find_transition(std::string_view from, std::string_view to) const;

  std::string name_;
  ManifoldKind kind_;
  std::vector<Chart> charts_;
  std::vector<ChartTransition> transitions_;
};

/// A vector field given chart-wise by its coordinate components.
class Field {
public:
  using Formula = std::function<std::vector<Jet>(const std::string& chart, std::span<const Jet>)>;

  /// `domain` restricts the field in the coordinates of `domain_chart`, or of every chart when that is empty.
  Field(std::string name, Formula formula, bool unit = true, std::optional<Box> domain = std::nullopt,
        std::string domain_chart = {});

  const std::string& name() const { return name_; }
  bool declared_unit() const { return unit_; }
  /// The restricting box for points of the given chart, if any.
  std::optional<Box> domain(std::string_view chart) const;
  bool defined_at(const Point& p) const;

  std::vector<Jet> jet(const Point& p, int order) const;
  Vec at(const Point& p) const;

private:
  std::string name_;
  Formula formula_;
  bool unit_;
  std::optional<Box> domain_;
  std::string domain_chart_;
};

struct ChristoffelSample {
  Point at;
  int dim = 0;
  std::vector<double> gamma;  // [i][j][k]

  double operator()(int i, int j, int k) const {
    return gamma[(static_cast<std::size_t>(i) * dim + j) * dim + k];
  }
};

struct Frame {
  Point at;
  std::vector<Vec> vectors;

  /// Columns are the frame vectors in coordinate components.
  Mat matrix() const;
};

/// Metric, connection and curvature at one point, from order-2 metric jets.
class LocalGeometry {
public:
  LocalGeometry(const Manifold& m, const Point& p);

  int dim() const { return n_; }
  const Point& point() const { return p_; }
  const Mat& metric() const { return g_; }
  const Mat& inverse_metric() const { return ginv_; }
  double gamma(int i, int j, int k) const { return gamma_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }
  /// d_l Gamma^i_{jk}
  double dgamma(int i, int j, int k, int l) const {
    return dgamma_[((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  /// R^i_{jkl}, defined by R(d_k, d_l) d_j = R^i_{jkl} d_i.
  double riemann(int i, int j, int k, int l) const {
    return riemann_[((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }

  double inner(const Vec& x, const Vec& y) const { return x.dot(g_ * y); }
  double norm(const Vec& x) const { return std::sqrt(inner(x, x)); }
  /// Gamma^i_{jk} x^j y^k, i.e. nabla_x y for coordinate-constant y.
  Vec connection(const Vec& x, const Vec& y) const;
  /// R(x, y) z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_[x,y] z
  Vec curvature(const Vec& x, const Vec& y, const Vec& z) const;
  /// Metric adjoint of a (1,1)-tensor given in coordinates.
  Mat adjoint(const Mat& a) const { return ginv_ * a.transpose() * g_; }

private:
  Point p_;
  int n_;
  Mat g_;
  Mat ginv_;
  std::vector<double> gamma_;
  std::vector<double> dgamma_;
  std::vector<double> riemann_;
};

/// Symmetric positive definite check used for SingularMetric reporting.
void require_nonsingular(const Mat& g, std::string_view where);

Mat metric_at(const Manifold& m, const Point& p);
ChristoffelSample christoffel_at(const Manifold& m, const Point& p);
TangentVector riemann_at(const Manifold& m, const Point& p, const Vec& x, const Vec& y, const Vec& z);
TangentVector covariant_derivative(const Manifold& m, const Field& v, const TangentVector& x);
TangentVector lie_bracket(const Manifold& m, const Field& v, const Field& w, const Point& p);
Frame adapted_frame(const Manifold& m, const Field& xi, const Point& p, const std::vector<Vec>& seed);
/// Coordinate seed d_1..d_n.
Frame adapted_frame(const Manifold& m, const Field& xi, const Point& p);
double sectional_curvature(const Manifold& m, const Point& p, const Vec& x, const Vec& y);
double sectional_curvature(const LocalGeometry& geo, const Vec& x, const Vec& y);

/// Finite-difference cross-check path.
ChristoffelSample christoffel_fd(const Manifold& m, const Point& p, double step = 1e-5);
/// R^i_{jkl} (flattened) from central differences of christoffel_fd.
std::vector<double> riemann_fd(const Manifold& m, const Point& p, double step = 3e-5);

}  // namespace tgfield
