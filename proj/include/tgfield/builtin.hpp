// The concrete manifolds and unit vector fields used by the verification suites.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tgfield/manifold.hpp"
#include "tgfield/ode.hpp"

namespace tgfield {

/// R^n with one Cartesian chart "cartesian".
Manifold make_flat(int n);

/// Unit sphere S^n with stereographic charts "north" (projection from the north
/// pole) and "south"; metric 4 delta_ij / (1 + |u|^2)^2 in both.
Manifold make_sphere(int n);

/// Stereographic parametrization x(u) in R^{n+1} for the given chart.
std::vector<Jet> sphere_embedding(std::string_view chart, std::span<const Jet> u);
Vec sphere_to_ambient(const Point& p);
Point ambient_to_sphere(const Vec& x, std::string_view chart);
/// Jacobian dx/du, an (n+1) x n matrix.
Mat sphere_embedding_jacobian(const Point& p);
Vec sphere_ambient_vector(const TangentVector& v);
/// Chart components of an ambient vector tangent at p.
Vec sphere_chart_vector(const Point& p, const Vec& ambient);

using AmbientMap = std::function<std::vector<Jet>(std::span<const Jet>)>;
/// Sphere field defined by an ambient vector map tangent to S^n, pulled into the charts.
/// An optional restriction is given in north-chart coordinates.
Field ambient_sphere_field(std::string name, int n, AmbientMap map, bool unit = true,
                           std::optional<Box> north_domain = std::nullopt);

/// Hopf field x -> (-x2, x1, -x4, x3, ...) on S^{2m+1}.
Field hopf_field(int m);

struct WarpedSurfaceSpec {
  double a;
  double alpha0;
  std::shared_ptr<const AlphaTable> alpha;
  Manifold manifold;
};

/// du^2 + sin^2(alpha(u)) dv^2 with alpha from the profile ODE; chart "uv".
WarpedSurfaceSpec make_warped_surface(double a, double alpha0, double step = 1e-3);

/// cos(a v + omega0) d_u + sin(a v + omega0) / sin(alpha(u)) d_v using the surface's a.
Field tg_field_2d(const WarpedSurfaceSpec& s, double omega0);
Field tg_field_2d(const WarpedSurfaceSpec& s, double a, double omega0);

/// (sin(a x + omega0), -cos(a x + omega0)) on the Euclidean plane.
Field flat_tg_field(double a, double omega0);
/// d_1 on R^n.
Field flat_parallel_field(int n);
/// x / |x| on R^n, restricted to the box [0.25, 2]^n.
Field flat_radial_field(int n);

/// Unit projection of the ambient e_1 onto S^n. North-chart points are restricted to
/// |u_1| < 0.6, where |x_1| <= 0.89 keeps them away from the zeros at x = +-e_1.
Field sphere_meridian_field(int n);

// Registry used by the command-line front end.

struct ManifoldEntry {
  std::string key;
  Manifold manifold;
  std::optional<WarpedSurfaceSpec> warped;
};

/// "sphere:n", "flat:n", "warped:a,alpha0".
ManifoldEntry resolve_manifold(std::string_view key);
/// "hopf:m", "flat-tg:a,omega0", "flat-parallel", "flat-radial", "tg2d:a,omega0", "meridian".
Field resolve_field(std::string_view key, const ManifoldEntry& on);

}  // namespace tgfield
