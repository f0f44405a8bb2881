// Sasaki geometry of the tangent bundle and of the image xi(M) in T1M.
//
// Bundle points are (u, w) in natural coordinates; bundle vectors have 2n
// components (d/du, d/dw). The Sasaki metric is
//
//   <<U, V>> = <pi_* U, pi_* V> + <K U, K V>,   K U = U^w + Gamma(w, U^u)
//
// and the tangent bundle is also exposed as an ordinary 2n-manifold so that the
// generic kernel can compute its Levi-Civita connection directly.
#pragma once

#include "tgfield/field_analysis.hpp"
#include "tgfield/manifold.hpp"

namespace tgfield {

struct BundlePoint {
  Point base;
  Vec fiber;
};

struct BundleVector {
  BundlePoint at;
  Vec components;  // (d/du^1..d/du^n, d/dw^1..d/dw^n)
};

struct LiftDecomposition {
  TangentVector horizontal_part;  // pi_* U
  TangentVector vertical_part;    // K U
};

enum class LiftKind { Horizontal, Vertical };

/// Which lifts enter nabla~_{X^?} Y^?; the first letter belongs to X.
enum class LiftCombo { HH, HV, VH, VV };

/// (p, xi(p)).
BundlePoint bundle_point(const Field& xi, const Point& p);
/// Natural-coordinate point (u, w) of TM.
Point bundle_chart_point(const BundlePoint& q);

BundleVector lift(const Manifold& m, const BundlePoint& q, const Vec& x, LiftKind kind);
LiftDecomposition decompose(const Manifold& m, const BundleVector& v);
/// X^h + Y^v
BundleVector assemble(const Manifold& m, const BundlePoint& q, const Vec& horizontal, const Vec& vertical);

Mat sasaki_metric_at(const Manifold& m, const BundlePoint& q);
double sasaki_inner(const Manifold& m, const BundleVector& u, const BundleVector& v);

/// TM as a 2n-manifold, one chart per base chart with the same id.
Manifold tangent_bundle(const Manifold& m);

/// Kowalski's formulas, with X and Y extended as coordinate-constant fields.
LiftDecomposition kowalski_derivative(const Manifold& m, const BundlePoint& q, LiftCombo combo, const Vec& x,
                                      const Vec& y);
/// The same derivative from the Christoffel symbols of the Sasaki metric on TM.
BundleVector bundle_connection(const Manifold& m, const BundlePoint& q, LiftCombo combo, const Vec& x, const Vec& y);

/// xi_* X = X^h - (A X)^v
BundleVector pushforward(const Manifold& m, const Field& xi, const TangentVector& x);
/// N~ = (A^t N)^h + N^v for N orthogonal to xi.
BundleVector normal_field(const Manifold& m, const Field& xi, const TangentVector& n);

/// -<Hess(X, Y) + A Hm(X, Y), N>
double sff_formula(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y, const Vec& n);
/// <<nabla~_{xi_* X} xi_* Y, N~>> with nabla~ the T1M connection built from the
/// Christoffel symbols of TM and the unit-sphere constraint on the fiber.
double sff_oracle(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y, const Vec& n);
/// Omega_sigma(xi_* e_a, xi_* e_b) over an adapted frame, N = e_sigma.
Mat sff_frame_matrix(const Manifold& m, const Field& xi, const Frame& frame, int sigma);

/// <X, Y> + <A X, A Y>
double pullback_metric(const Manifold& m, const Field& xi, const Point& p, const Vec& x, const Vec& y);
/// The base charts carrying scale * (g + <A., A.>).
Manifold pullback_manifold(const Manifold& m, const Field& xi, double scale = 1.0);

enum class MetricScaling { Sasaki, Quarter };

std::string_view to_string(MetricScaling s);
double scale_factor(MetricScaling s);

/// Sectional curvature of the pulled-back metric on span{X, A X}, X orthogonal to xi.
double phi_sectional_curvature(const Manifold& m, const Field& xi, const Point& p, const Vec& x,
                               MetricScaling scaling);
/// Hopf field on S^{2m+1}.
double phi_sectional_curvature(int m, const Point& p, const Vec& x, MetricScaling scaling);

/// J X^h = X^v, J X^v = -X^h
BundleVector almost_complex(const Manifold& m, const BundleVector& v);
/// Largest of |J^2 + I| and the failure of J to preserve the Sasaki metric on lifted coordinate bases.
double almost_complex_defect(const Manifold& m, const BundlePoint& q);

}  // namespace tgfield
