// Fixed-step RK4 integration: the warping-profile ODE and integral curves.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tgfield/jet.hpp"
#include "tgfield/manifold.hpp"

namespace tgfield {

/// Singularity margin for both |cos alpha| and |sin alpha|.
inline constexpr double kAlphaGuard = 0.05;

/// Right side of d(alpha)/du = 1 - (a + 1) / cos(alpha).
double alpha_rhs(double a, double alpha);

struct AlphaNode {
  double u;
  double alpha;
  double d1;  // alpha'
  double d2;  // alpha''
};

/// Dense RK4 solution of the profile ODE with quintic Hermite interpolation.
class AlphaTable {
public:
  AlphaTable(double a, double step, std::vector<AlphaNode> nodes);

  double a() const { return a_; }
  double step() const { return step_; }
  double u_min() const { return nodes_.front().u; }
  double u_max() const { return nodes_.back().u; }
  const std::vector<AlphaNode>& nodes() const { return nodes_; }

  /// C^2 interpolant evaluated in jet arithmetic; u.value() must lie in [u_min, u_max].
  Jet evaluate(const Jet& u) const;
  double value(double u) const { return evaluate(Jet(u)).value(); }

private:
  double a_;
  double step_;
  std::vector<AlphaNode> nodes_;
};

/// Integrates both ways from u = 0 until a singularity guard would be crossed
/// or |u| reaches max_extent. Throws ImmediateSingularity if alpha0 is inside the guard.
AlphaTable integrate_alpha(double a, double alpha0, double step = 1e-3, double max_extent = 10.0);

struct Trajectory {
  std::vector<double> t;
  std::vector<Point> samples;
  bool truncated = false;
};

/// RK4 on dp/dt = xi(p) in the chart of p0. Stops early (truncated = true)
/// when the next stage would leave the chart or the field's domain.
Trajectory integral_curve(const Manifold& m, const Field& xi, const Point& p0, double length, double step = 1e-3);

/// y(x) = -(1/a) ln|sin(a x)| + c. Throws ZeroParameter for a = 0 and
/// SingularAbscissa where sin(a x) vanishes.
double flat_trajectory_closed_form(double a, double c, double x);

void write_alpha_csv(std::ostream& os, const AlphaTable& table);
/// Header "t,x1,..,xn" plus optional extra columns supplied per sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& extra_names = {},
                          const std::vector<std::vector<double>>& extra = {});

}  // namespace tgfield
