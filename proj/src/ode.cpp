#include "tgfield/ode.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>

namespace tgfield {

double alpha_rhs(double a, double alpha) { return 1.0 - (a + 1.0) / std::cos(alpha); }

namespace {

bool inside_guard(double alpha) {
  return std::abs(std::cos(alpha)) >= kAlphaGuard && std::abs(std::sin(alpha)) >= kAlphaGuard;
}

AlphaNode make_node(double a, double u, double alpha) {
  const double d1 = alpha_rhs(a, alpha);
  const double c = std::cos(alpha);
  const double d2 = -(a + 1.0) * std::sin(alpha) / (c * c) * d1;
  return {u, alpha, d1, d2};
}

// One RK4 increment; empty if any stage leaves the guarded region or the step crosses a singular line.
std::optional<double> rk4_step(double a, double alpha, double h) {
  auto same_cell = [alpha](double x) {
    return inside_guard(x) && std::signbit(std::cos(x)) == std::signbit(std::cos(alpha)) &&
           std::signbit(std::sin(x)) == std::signbit(std::sin(alpha));
  };
  const double k1 = alpha_rhs(a, alpha);
  const double s2 = alpha + 0.5 * h * k1;
  if (!same_cell(s2)) return std::nullopt;
  const double k2 = alpha_rhs(a, s2);
  const double s3 = alpha + 0.5 * h * k2;
  if (!same_cell(s3)) return std::nullopt;
  const double k3 = alpha_rhs(a, s3);
  const double s4 = alpha + h * k3;
  if (!same_cell(s4)) return std::nullopt;
  const double k4 = alpha_rhs(a, s4);
  const double delta = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!std::isfinite(delta) || !same_cell(alpha + delta)) return std::nullopt;
  return delta;
}

// Kahan-compensated sum.
double compensated_add(double sum, double term, double& carry) {
  const double y = term - carry;
  const double t = sum + y;
  carry = (t - sum) - y;
  return t;
}

// Polynomial in jet arithmetic by Horner's rule; coefficients low to high.
Jet horner(const Jet& t, std::initializer_list<double> coeffs) {
  Jet r(0.0);
  for (auto it = std::rbegin(coeffs); it != std::rend(coeffs); ++it) r = r * t + Jet(*it);
  return r;
}

}  // namespace

AlphaTable::AlphaTable(double a, double step, std::vector<AlphaNode> nodes)
    : a_(a), step_(step), nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw Error(ErrorCode::ImmediateSingularity, "alpha table needs at least two nodes");
}

Jet AlphaTable::evaluate(const Jet& u) const {
  const double x = u.value();
  if (!(x >= u_min() - 1e-12 && x <= u_max() + 1e-12))
    throw Error(ErrorCode::PointOutsideDomain, "alpha table evaluated outside [" + std::to_string(u_min()) + ", " +
                                                   std::to_string(u_max()) + "]");
  const auto last = static_cast<std::ptrdiff_t>(nodes_.size()) - 2;
  const auto seg = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::floor((x - u_min()) / step_)), 0, last);
  const AlphaNode& n0 = nodes_[static_cast<std::size_t>(seg)];
  const AlphaNode& n1 = nodes_[static_cast<std::size_t>(seg) + 1];
  const double h = n1.u - n0.u;
  const Jet t = (u - Jet(n0.u)) * (1.0 / h);

  // Quintic Hermite basis matching value, first and second derivative at both ends.
  const Jet h0 = horner(t, {1, 0, 0, -10, 15, -6});
  const Jet h1 = horner(t, {0, 1, 0, -6, 8, -3});
  const Jet h2 = horner(t, {0, 0, 0.5, -1.5, 1.5, -0.5});
  const Jet h3 = horner(t, {0, 0, 0, 0.5, -1, 0.5});
  const Jet h4 = horner(t, {0, 0, 0, -4, 7, -3});
  const Jet h5 = horner(t, {0, 0, 0, 10, -15, 6});
  return h0 * n0.alpha + h1 * (h * n0.d1) + h2 * (h * h * n0.d2) + h3 * (h * h * n1.d2) + h4 * (h * n1.d1) +
         h5 * n1.alpha;
}

AlphaTable integrate_alpha(double a, double alpha0, double step, double max_extent) {
  if (!inside_guard(alpha0))
    throw Error(ErrorCode::ImmediateSingularity,
                "alpha0 = " + std::to_string(alpha0) + " is within the singularity margin of k*pi/2");
  if (!(step > 0.0)) throw Error(ErrorCode::BadConfig, "integrate_alpha: step must be positive");

  const auto max_steps = static_cast<long>(std::floor(max_extent / step + 1e-9));
  std::vector<AlphaNode> backward;
  std::vector<AlphaNode> forward{make_node(a, 0.0, alpha0)};

  double alpha = alpha0, carry = 0.0;
  for (long s = 1; s <= max_steps; ++s) {
    const auto next = rk4_step(a, alpha, step);
    if (!next) break;
    alpha = compensated_add(alpha, *next, carry);
    forward.push_back(make_node(a, static_cast<double>(s) * step, alpha));
  }
  alpha = alpha0;
  carry = 0.0;
  for (long s = 1; s <= max_steps; ++s) {
    const auto next = rk4_step(a, alpha, -step);
    if (!next) break;
    alpha = compensated_add(alpha, *next, carry);
    backward.push_back(make_node(a, -static_cast<double>(s) * step, alpha));
  }

  std::vector<AlphaNode> nodes(backward.rbegin(), backward.rend());
  nodes.insert(nodes.end(), forward.begin(), forward.end());
  if (nodes.size() < 2)
    throw Error(ErrorCode::ImmediateSingularity, "profile ODE reaches the singularity margin within one step");
  return AlphaTable(a, step, std::move(nodes));
}

// ---------------------------------------------------------------------------

Trajectory integral_curve(const Manifold& m, const Field& xi, const Point& p0, double length, double step) {
  const Chart& chart = m.chart(p0.chart);
  auto defined = [&](const Vec& x) {
    if (!chart.contains({x.data(), static_cast<std::size_t>(x.size())})) return false;
    return xi.defined_at(Point{p0.chart, x});
  };
  if (!defined(p0.coords)) throw Error(ErrorCode::PointOutsideDomain, "integral_curve: start point outside chart");

  auto velocity = [&](const Vec& x) { return xi.at(Point{p0.chart, x}); };

  Trajectory traj;
  traj.t.push_back(0.0);
  traj.samples.push_back(p0);
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(length / step - 1e-9)));
  step = length / static_cast<double>(steps);
  Vec x = p0.coords;
  for (long s = 1; s <= steps; ++s) {
    const Vec k1 = velocity(x);
    const Vec x2 = x + 0.5 * step * k1;
    if (!defined(x2)) { traj.truncated = true; break; }
    const Vec k2 = velocity(x2);
    const Vec x3 = x + 0.5 * step * k2;
    if (!defined(x3)) { traj.truncated = true; break; }
    const Vec k3 = velocity(x3);
    const Vec x4 = x + step * k3;
    if (!defined(x4)) { traj.truncated = true; break; }
    const Vec k4 = velocity(x4);
    const Vec next = x + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!defined(next)) { traj.truncated = true; break; }
    x = next;
    traj.t.push_back(static_cast<double>(s) * step);
    traj.samples.push_back(Point{p0.chart, x});
  }
  return traj;
}

double flat_trajectory_closed_form(double a, double c, double x) {
  if (a == 0.0) throw Error(ErrorCode::ZeroParameter, "a = 0 trajectories are the vertical lines x = c");
  const double s = std::sin(a * x);
  if (std::abs(s) < 1e-300) throw Error(ErrorCode::SingularAbscissa, "sin(a x) = 0 at x = " + std::to_string(x));
  return -std::log(std::abs(s)) / a + c;
}

// ---------------------------------------------------------------------------

void write_alpha_csv(std::ostream& os, const AlphaTable& table) {
  os << "u,alpha,dalpha,d2alpha\r\n";
  os << std::setprecision(17);
  for (const auto& n : table.nodes()) os << n.u << ',' << n.alpha << ',' << n.d1 << ',' << n.d2 << "\r\n";
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& extra_names,
                          const std::vector<std::vector<double>>& extra) {
  const auto dim = traj.samples.empty() ? 0 : traj.samples.front().coords.size();
  os << "t";
  for (Eigen::Index i = 0; i < dim; ++i) os << ",x" << (i + 1);
  for (const auto& name : extra_names) os << ',' << name;
  os << "\r\n" << std::setprecision(17);
  for (std::size_t s = 0; s < traj.samples.size(); ++s) {
    os << traj.t[s];
    for (Eigen::Index i = 0; i < dim; ++i) os << ',' << traj.samples[s].coords[i];
    if (s < extra.size())
      for (double v : extra[s]) os << ',' << v;
    os << "\r\n";
  }
}

}  // namespace tgfield
