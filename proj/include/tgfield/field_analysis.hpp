// Operator calculus of a unit vector field xi:
//
//   A X            = -nabla_X xi
//   (nabla_X A) Y  = -(nabla_X nabla_Y xi - nabla_{nabla_X Y} xi)
//   Hess(X, Y)     = 1/2 [(nabla_Y A) X + (nabla_X A) Y]
//   Hm(X, Y)       = 1/2 [R(xi, A X) Y + R(xi, A Y) X]
//
// and the pointwise residuals built from them. Vector arguments are extended as
// coordinate-constant fields; every reported quantity is tensorial.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "tgfield/manifold.hpp"

namespace tgfield {

/// Unit-norm contract tolerance for |xi|_g.
inline constexpr double kUnitTolerance = 1e-10;

/// xi and its first two covariant derivatives at one point.
class PointwiseField {
public:
  PointwiseField(const Manifold& m, const Field& xi, const Point& p);

  const LocalGeometry& geometry() const { return geo_; }
  int dim() const { return geo_.dim(); }
  const Point& point() const { return geo_.point(); }
  const Vec& xi() const { return xi_; }

  /// Matrix of A in coordinates: (A X)^i = A(i, j) X^j.
  const Mat& shape_matrix() const { return a_; }
  Mat shape_adjoint_matrix() const { return geo_.adjoint(a_); }
  Vec shape(const Vec& x) const { return a_ * x; }
  Vec shape_adjoint(const Vec& y) const { return shape_adjoint_matrix() * y; }
  /// nabla_X xi
  Vec nabla_xi(const Vec& x) const { return -(a_ * x); }

  Vec nabla_a(const Vec& x, const Vec& y) const;
  Vec hess(const Vec& x, const Vec& y) const;
  Vec hm(const Vec& x, const Vec& y) const;
  Vec curvature(const Vec& x, const Vec& y, const Vec& z) const { return geo_.curvature(x, y, z); }
  double inner(const Vec& x, const Vec& y) const { return geo_.inner(x, y); }
  /// (L_xi g)(X, Y) = <nabla_X xi, Y> + <X, nabla_Y xi>
  double lie_metric(const Vec& x, const Vec& y) const;

  /// Hess + A Hm - <A X, A Y> xi
  Vec tg_residual(const Vec& x, const Vec& y) const;
  /// Unit-sphere form of the totally geodesic condition (valid only on unit spheres).
  Vec sphere_tg_residual(const Vec& x, const Vec& y) const;

  /// |nabla xi|^2 = tr(A^t A)
  double grad_norm2() const;
  /// -sum_i Hess(e_i, e_i) over an orthonormal frame.
  Vec rough_laplacian(const Frame& frame) const;
  /// g^{jl} nabla^2_{l j} xi, computed from coordinates without a frame.
  Vec rough_laplacian_trace() const;

private:
  LocalGeometry geo_;
  Vec xi_;
  Mat a_;
  // nabla2_[l](i, j) = (nabla^2_{d_l, d_j} xi)^i
  std::vector<Mat> nabla2_;
};

struct ShapeOperatorSample {
  Point at;
  Mat matrix_a;   // in the given orthonormal frame
  Mat matrix_at;  // metric adjoint, same frame
};

struct VectorResidual {
  Vec vector;
  double norm = 0.0;
};

struct GeodesicCurvatureSample {
  Point at;
  double k = 0.0;
  /// Unit principal normal with nabla_xi xi = -k nu; absent when k <= 1e-8.
  std::optional<Vec> nu;
};

struct MinimalityResidual {
  Vec vector;
  double norm = 0.0;
  double k = 0.0;
  /// k below 1e-8: the geodesic branch returned zero without forming nu.
  bool degenerate = false;
};

struct FlagResult {
  bool holds = false;
  double max_defect = 0.0;
  double tolerance = 0.0;
};

struct ClassificationRecord {
  // Keys: geodesic, holonomic, killing, covariantly_normal, strongly_normal, invariant.
  std::map<std::string, FlagResult> flags;
  std::vector<Point> sample_points;
};

inline constexpr double kGeodesicThreshold = 1e-8;
inline constexpr double kClassifierTolerance = 1e-6;

/// Throws NonUnitField unless | |xi|_g^2 - 1 | <= 1e-10.
void require_unit(const PointwiseField& f);

ShapeOperatorSample shape_operator(const Manifold& m, const Field& xi, const Point& p, const Frame& frame);
Vec nabla_a(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y);
/// Same quantity with Y extended by an arbitrary smooth field (tensoriality check).
Vec nabla_a(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Field& y);
Vec hess(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y);
Vec hm(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y);

VectorResidual harmonic_residual(const Manifold& m, const Field& xi, const Point& p);
VectorResidual harmonic_map_residual(const Manifold& m, const Field& xi, const Point& p);
VectorResidual harmonic_map_residual(const PointwiseField& f, const Frame& frame);
VectorResidual tg_residual(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y);
/// Throws NotASphere unless m is a built-in unit sphere.
VectorResidual sphere_tg_residual(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y);

GeodesicCurvatureSample geodesic_curvature(const Manifold& m, const Field& xi, const Point& p);
/// k[xi, nu] + xi(k) nu - k A R(nu, xi) xi + k^2 xi with nu the principal
/// normal oriented so that nabla_xi xi = k nu.
MinimalityResidual minimality_residual(const Manifold& m, const Field& xi, const Point& p);

ClassificationRecord classify(const Manifold& m, const Field& xi, const std::vector<Point>& points,
                              double tolerance = kClassifierTolerance);

/// Defects of each classifier flag at one point.
std::map<std::string, double> classification_defects(const PointwiseField& f, const Frame& frame);

/// |nabla xi|^2 from first-order jets only.
double grad_norm2_at(const Manifold& m, const Field& xi, const Point& p);

struct QuadratureGrid {
  std::string chart;
  Box box;
  int cells = 8;  // per axis; three Gauss-Legendre nodes per cell
};

/// Riemannian-volume quadrature of the integrand over a chart box.
double integrate(const Manifold& m, const QuadratureGrid& grid, const std::function<double(const Point&)>& f);
/// c_n * integral of |nabla xi|^2 dVol with c_n = 1.
double total_bending(const Manifold& m, const Field& xi, const QuadratureGrid& grid);

}  // namespace tgfield
