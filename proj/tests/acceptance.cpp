// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "tgfield/builtin.hpp"
#include "tgfield/field_analysis.hpp"
#include "tgfield/ode.hpp"
#include "tgfield/sampling.hpp"
#include "tgfield/sasaki.hpp"

using namespace tgfield;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Case {
  std::string label;
  const Manifold* m;
  Field xi;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec orthogonal_to(const Manifold& m, const Point& p, const Vec& xi, const Vec& v) {
  return v - xi * xi.dot(metric_at(m, p) * v);
}

std::span<const double> span_of(const Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Field coordinate_field(int n) {
  return Field("coordinate", [n](const std::string&, std::span<const Jet> u) {
    std::vector<Jet> v;
    for (int i = 0; i < n; ++i) v.push_back(sin(u[i] * (1.0 + 0.3 * i) + 0.2) + 0.5 * u[(i + 1) % n] * u[i]);
    return v;
  }, false);
}

struct Builtins {
  Manifold plane = make_flat(2);
  Manifold space = make_flat(3);
  Manifold s2 = make_sphere(2);
  Manifold s3 = make_sphere(3);
  Manifold s5 = make_sphere(5);
  WarpedSurfaceSpec w1 = make_warped_surface(0.5, kPi / 4);
  WarpedSurfaceSpec w2 = make_warped_surface(-0.3, kPi / 3);
  WarpedSurfaceSpec w3 = make_warped_surface(-1.0, kPi / 4);

  std::vector<Case> pairs() const {
    return {
        {"hopf:1 on S3", &s3, hopf_field(1)},
        {"hopf:2 on S5", &s5, hopf_field(2)},
        {"meridian on S2", &s2, sphere_meridian_field(2)},
        {"meridian on S3", &s3, sphere_meridian_field(3)},
        {"tg2d (0.5,pi/4,0)", &w1.manifold, tg_field_2d(w1, 0.0)},
        {"tg2d (-0.3,pi/3,1)", &w2.manifold, tg_field_2d(w2, 1.0)},
        {"tg2d (-1,pi/4,0.5)", &w3.manifold, tg_field_2d(w3, 0.5)},
        {"flat-tg:1,0 on R2", &plane, flat_tg_field(1.0, 0.0)},
        {"flat-parallel on R3", &space, flat_parallel_field(3)},
        {"flat-radial on R3", &space, flat_radial_field(3)},
    };
  }
  std::vector<const Manifold*> manifolds() const { return {&plane, &space, &s2, &s3, &s5, &w1.manifold, &w2.manifold, &w3.manifold}; }
};

const Builtins& builtins() {
  static const Builtins b;
  return b;
}

Outcome hopf_totally_geodesic() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& s3 = builtins().s3;
  const auto xi = hopf_field(1);
  double worst = 0.0;
  for (const auto& p : sample_points(s3, &xi, 200, 101)) {
    const auto frame = adapted_frame(s3, xi, p);
    for (const auto& x : frame.vectors)
      for (const auto& y : frame.vectors) worst = std::max(worst, tg_residual(s3, xi, p, x, y).norm);
  }
  const double t = seconds_since(t0);
  return {worst < 1e-8 && t < 10.0, fmt("max residual %.3e over 200 points x 9 pairs, %.2f s", worst, t)};
}

Outcome hopf_operator_structure() {
  const auto& s3 = builtins().s3;
  const auto xi = hopf_field(1);
  double square = 0.0, skew = 0.0;
  for (const auto& p : sample_points(s3, &xi, 200, 102)) {
    const auto s = shape_operator(s3, xi, p, adapted_frame(s3, xi, p));
    const Mat block = s.matrix_a.bottomRightCorner(2, 2);
    square = std::max(square, (block * block + Mat::Identity(2, 2)).norm());
    skew = std::max(skew, (s.matrix_a + s.matrix_at).norm());
  }
  return {square < 1e-9 && skew < 1e-9, fmt("|A^2 + I| on xi-perp %.3e, |A + A^t| %.3e", square, skew)};
}

Outcome sff_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& b = builtins();
  const std::vector<Case> cases = {
      {"meridian S2", &b.s2, sphere_meridian_field(2)},
      {"hopf S3", &b.s3, hopf_field(1)},
      {"meridian S3", &b.s3, sphere_meridian_field(3)},
      {"tg2d", &b.w1.manifold, tg_field_2d(b.w1, 0.0)},
      {"tg2d off-parameter", &b.w2.manifold, tg_field_2d(b.w2, 1.4, 0.3)},
  };
  SampleRng rng(103);
  double worst = 0.0;
  int total = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& [label, m, xi] = cases[c];
    const int count = c + 1 < cases.size() ? 40 : 200 - 40 * static_cast<int>(cases.size() - 1);
    for (const auto& p : sample_points(*m, &xi, count, 104 + c)) {
      const int n = m->dim();
      const Vec x = rng.vector(n), y = rng.vector(n);
      const Vec nv = orthogonal_to(*m, p, xi.at(p), rng.vector(n));
      worst = std::max(worst, std::abs(sff_formula(*m, xi, p, x, y, nv) - sff_oracle(*m, xi, p, x, y, nv)));
      ++total;
    }
  }
  const double t = seconds_since(t0);
  return {total == 200 && worst < 1e-5 && t < 60.0,
          fmt("max |formula - oracle| %.3e over %d samples on S2, S3 and warped, %.2f s", worst, total, t)};
}

Outcome sphere_equivalence() {
  const auto& b = builtins();
  const std::vector<Case> cases = {
      {"meridian S2", &b.s2, sphere_meridian_field(2)},
      {"meridian S3", &b.s3, sphere_meridian_field(3)},
  };
  SampleRng rng(105);
  double worst = 0.0;
  int total = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& [label, m, xi] = cases[c];
    for (const auto& p : sample_points(*m, &xi, 100, 106 + c)) {
      const int n = m->dim();
      const Vec x = rng.vector(n), y = rng.vector(n);
      worst = std::max(worst, (sphere_tg_residual(*m, xi, p, x, y).vector - tg_residual(*m, xi, p, x, y).vector).norm());
      ++total;
    }
  }
  return {worst < 1e-9, fmt("max |sphere form - general form| %.3e over %d samples", worst, total)};
}

Outcome warped_reproduction() {
  struct Config {
    double a, alpha0, omega0;
  };
  std::string detail;
  bool pass = true;
  for (const auto [a, alpha0, omega0] : {Config{0.5, kPi / 4, 0.0}, Config{-0.3, kPi / 3, 1.0}, Config{-1.0, kPi / 4, 0.5}}) {
    const auto w = make_warped_surface(a, alpha0);
    const auto xi = tg_field_2d(w, omega0);
    const auto& chart = w.manifold.default_chart();
    Box box = chart.sample_box();
    if (const auto d = xi.domain(chart.id())) box = box.intersect(*d);
    double worst = 0.0;
    const int grid = 20;
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) {
        const double u = box.axis(0).lo + (i + 0.5) * (box.axis(0).hi - box.axis(0).lo) / grid;
        const double v = box.axis(1).lo + (j + 0.5) * (box.axis(1).hi - box.axis(1).lo) / grid;
        const Point p{chart.id(), Vec{{u, v}}};
        const auto frame = adapted_frame(w.manifold, xi, p);
        for (const auto& x : frame.vectors)
          for (const auto& y : frame.vectors) worst = std::max(worst, tg_residual(w.manifold, xi, p, x, y).norm);
      }
    pass = pass && worst < 1e-6;
    detail += fmt("%s(%g, %.4f, %g) %.3e", detail.empty() ? "" : "; ", a, alpha0, omega0, worst);
  }
  return {pass, "20x20 grid max residual " + detail};
}

Outcome flat_trajectories() {
  const auto& plane = builtins().plane;
  std::string detail;
  bool pass = true;
  for (const double a : {0.5, 1.0, 2.0}) {
    const auto xi = flat_tg_field(a, 0.0);
    // Phase a x runs from 0.05 to pi - 0.05 across the branch (0, pi / a).
    const double length = 2.0 * std::log(1.0 / std::tan(0.025)) / a;
    const Point p0 = plane.point(Vec{{0.05 / a, 0.0}});
    const auto tr = integral_curve(plane, xi, p0, length);
    const double c = std::log(std::sin(0.05)) / a;
    double worst = 0.0, phase_hi = 0.0;
    for (const auto& q : tr.samples) {
      worst = std::max(worst, std::abs(q.coords[1] - flat_trajectory_closed_form(a, c, q.coords[0])));
      phase_hi = std::max(phase_hi, a * q.coords[0]);
    }
    const bool ok = !tr.truncated && worst < 1e-6 && phase_hi > kPi - 0.06;
    pass = pass && ok;
    detail += fmt("%sa=%g %.3e (phase 0.05..%.4f)", detail.empty() ? "" : "; ", a, worst, phase_hi);
  }
  return {pass, "max |y - closed form| " + detail};
}

Outcome hopf_block_structure() {
  const auto& s3 = builtins().s3;
  const auto xi = hopf_field(1);
  double worst = 0.0;
  for (const auto& p : sample_points(s3, &xi, 200, 107)) {
    const auto frame = adapted_frame(s3, xi, p);
    for (int sigma = 1; sigma < 3; ++sigma)
      worst = std::max(worst, sff_frame_matrix(s3, xi, frame, sigma).bottomRightCorner(2, 2).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-6, fmt("max |Omega_sigma(a, b)| for a, b, sigma >= 2: %.3e", worst)};
}

Outcome minimality() {
  const auto& s3 = builtins().s3;
  const auto hopf = hopf_field(1);
  int degenerate = 0;
  double hopf_norm = 0.0;
  for (const auto& p : sample_points(s3, &hopf, 200, 108)) {
    const auto r = minimality_residual(s3, hopf, p);
    degenerate += r.degenerate ? 1 : 0;
    hopf_norm = std::max(hopf_norm, r.vector.norm());
  }

  const auto& plane = builtins().plane;
  const double th = 0.7, a = 1.3, w0 = 0.2;
  Mat rot(2, 2);
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const Vec shift{{0.3, -1.1}};
  const auto xi = flat_tg_field(a, w0);
  // The same field in the coordinates s = R x + b.
  const Field moved("helical-moved", [=](const std::string&, std::span<const Jet> s) {
    const Jet x0 = rot(0, 0) * (s[0] - shift[0]) + rot(1, 0) * (s[1] - shift[1]);
    const Jet c0 = sin(a * x0 + w0), c1 = -cos(a * x0 + w0);
    return std::vector<Jet>{rot(0, 0) * c0 + rot(0, 1) * c1, rot(1, 0) * c0 + rot(1, 1) * c1};
  });
  bool finite = true;
  int nondegenerate = 0;
  double consistency = 0.0;
  for (const auto& p : sample_points(plane, &xi, 200, 109)) {
    const auto r = minimality_residual(plane, xi, p);
    const auto rq = minimality_residual(plane, moved, plane.point(rot * p.coords + shift));
    finite = finite && std::isfinite(r.norm) && r.vector.allFinite();
    nondegenerate += r.degenerate ? 0 : 1;
    consistency = std::max(consistency, (rot * r.vector - rq.vector).norm());
  }
  const bool pass = degenerate == 200 && hopf_norm == 0.0 && finite && consistency < 1e-8;
  return {pass, fmt("hopf degenerate %d/200 with max residual %.1e; helical finite=%s, non-degenerate %d/200, "
                    "frame consistency %.3e",
                    degenerate, hopf_norm, finite ? "yes" : "no", nondegenerate, consistency)};
}

Outcome phi_curvature() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& s3 = builtins().s3;
  const auto hopf = hopf_field(1);
  SampleRng rng(110);
  const MetricScaling scalings[] = {MetricScaling::Sasaki, MetricScaling::Quarter};
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (const auto& p : sample_points(s3, &hopf, 50, 111)) {
    const Vec x = orthogonal_to(s3, p, hopf.at(p), rng.vector(3));
    for (int i = 0; i < 2; ++i) {
      const double k = phi_sectional_curvature(1, p, x, scalings[i]);
      lo[i] = std::min(lo[i], k);
      hi[i] = std::max(hi[i], k);
    }
  }
  const double t = seconds_since(t0);
  std::vector<std::string> hits;
  for (int i = 0; i < 2; ++i)
    if (std::abs(lo[i] - 1.25) < 1e-5 && std::abs(hi[i] - 1.25) < 1e-5) hits.emplace_back(to_string(scalings[i]));
  const bool constant = hi[0] - lo[0] < 1e-6 && hi[1] - lo[1] < 1e-6;
  return {constant && hits.size() == 1 && t < 30.0,
          fmt("sasaki %.9f (spread %.1e), quarter %.9f (spread %.1e); 5/4 under: %s; %.2f s", lo[0], hi[0] - lo[0], lo[1],
              hi[1] - lo[1], hits.size() == 1 ? hits.front().c_str() : "ambiguous", t)};
}

Outcome property_suites() {
  const auto& b = builtins();
  SampleRng rng(112);
  double codazzi = 0.0, bianchi = 0.0, compat = 0.0, christoffel = 0.0, overlap = 0.0;

  for (const auto& [label, m, xi] : b.pairs()) {
    const int n = m->dim();
    const Field w = coordinate_field(n);
    for (const auto& p : sample_points(*m, &xi, 20, 113)) {
      const PointwiseField f(*m, xi, p);
      const Vec x = rng.vector(n), y = rng.vector(n);
      codazzi = std::max(codazzi, (f.nabla_a(y, x) - f.nabla_a(x, y) - f.curvature(x, y, f.xi())).norm());

      // X <xi, W> = <nabla_X xi, W> + <xi, nabla_X W>
      const JetMatrix g = m->chart(p.chart).metric_jet(span_of(p.coords), 1);
      const auto jx = xi.jet(p, 1), jw = w.jet(p, 1);
      Jet pairing(0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pairing += g(i, j) * jx[i] * jw[j];
      double lhs = 0.0;
      for (int l = 0; l < n; ++l) lhs += x[l] * pairing.derivative({l});
      const Vec nw = covariant_derivative(*m, w, TangentVector{p, x}).components;
      const double rhs = f.inner(f.nabla_xi(x), w.at(p)) + f.inner(f.xi(), nw);
      compat = std::max(compat, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));

      if (m->charts().size() > 1) {
        const std::string other = p.chart == "north" ? "south" : "north";
        if (p.coords.norm() < 0.3) continue;
        const auto q = m->transition(p, other);
        if (!q || !xi.defined_at(*q)) continue;
        const Vec xq = m->transition(TangentVector{p, x}, other)->components;
        const Vec yq = m->transition(TangentVector{p, y}, other)->components;
        const auto rel = [](double u, double v) { return std::abs(u - v) / std::max(1.0, std::abs(u)); };
        overlap = std::max({overlap, rel(tg_residual(*m, xi, p, x, y).norm, tg_residual(*m, xi, *q, xq, yq).norm),
                            rel(harmonic_residual(*m, xi, p).norm, harmonic_residual(*m, xi, *q).norm),
                            rel(f.grad_norm2(), PointwiseField(*m, xi, *q).grad_norm2()),
                            rel(geodesic_curvature(*m, xi, p).k, geodesic_curvature(*m, xi, *q).k)});
      }
    }
  }

  for (const Manifold* m : b.manifolds()) {
    const int n = m->dim();
    for (const auto& p : sample_points(*m, nullptr, 10, 114)) {
      const LocalGeometry geo(*m, p);
      const Vec x = rng.vector(n), y = rng.vector(n), z = rng.vector(n);
      bianchi = std::max(bianchi, (geo.curvature(x, y, z) + geo.curvature(y, z, x) + geo.curvature(z, x, y)).norm());
      const auto jet = christoffel_at(*m, p);
      const auto fd = christoffel_fd(*m, p);
      for (std::size_t i = 0; i < jet.gamma.size(); ++i) christoffel = std::max(christoffel, std::abs(jet.gamma[i] - fd.gamma[i]));
    }
  }

  // Step halving on fixed intervals.
  std::vector<double> ratios;
  int exact = 0;
  for (const auto& w : {&b.w1, &b.w2, &b.w3}) {
    const double a = w->a, a0 = w->alpha0;
    const auto ref = integrate_alpha(a, a0, 5e-6);
    const auto coarse = integrate_alpha(a, a0, 0.02);
    const double lo = coarse.u_min(), hi = coarse.u_max();
    auto deviation = [&](double h) {
      const auto t = integrate_alpha(a, a0, h);
      double e = 0.0;
      for (int i = 0; i <= 400; ++i) {
        const double u = lo + (hi - lo) * i / 400.0;
        e = std::max(e, std::abs(t.value(u) - ref.value(u)));
      }
      return e;
    };
    const double e1 = deviation(0.004), e2 = deviation(0.002);
    // a = -1 gives alpha' = 1, which RK4 integrates exactly.
    if (e1 < 1e-12) {
      ++exact;
      continue;
    }
    ratios.push_back(e1 / e2);
  }
  {
    const auto xi = tg_field_2d(b.w3, 0.5);
    const Point p0{b.w3.manifold.default_chart().id(), Vec{{0.1, 0.2}}};
    auto end = [&](double h) { return integral_curve(b.w3.manifold, xi, p0, 0.5, h).samples.back().coords; };
    const Vec ref = end(0.05 / 32);
    ratios.push_back((end(0.05) - ref).norm() / (end(0.025) - ref).norm());
  }
  {
    const auto xi = flat_tg_field(1.0, 0.0);
    const Point p0 = b.plane.point(Vec{{0.5, 0.0}});
    auto end = [&](double h) { return integral_curve(b.plane, xi, p0, 2.0, h).samples.back().coords; };
    const Vec ref = end(0.1 / 32);
    ratios.push_back((end(0.1) - ref).norm() / (end(0.05) - ref).norm());
  }
  {
    const auto xi = hopf_field(1);
    const Point p0{"north", Vec{{0.9, 0.3, 0.2}}};
    auto end = [&](double h) { return integral_curve(b.s3, xi, p0, 2.0, h).samples.back().coords; };
    const Vec ref = end(0.1 / 32);
    ratios.push_back((end(0.1) - ref).norm() / (end(0.05) - ref).norm());
  }
  const bool rk4 = std::all_of(ratios.begin(), ratios.end(), [](double r) { return r >= 12.0 && r <= 20.0; });
  std::string rs;
  for (const double r : ratios) rs += fmt("%s%.2f", rs.empty() ? "" : ",", r);

  const bool pass = codazzi < 1e-8 && bianchi < 1e-9 && compat < 1e-8 && christoffel < 1e-5 && overlap < 1e-7 && rk4;
  return {pass, fmt("Codazzi %.2e, Bianchi %.2e, compatibility %.2e, Christoffel jet-FD %.2e, chart overlap %.2e, "
                    "RK4 ratios [%s], %d profile(s) exact to roundoff",
                    codazzi, bianchi, compat, christoffel, overlap, rs.c_str(), exact)};
}

Outcome classifier_truth_table() {
  const auto& b = builtins();
  struct Expect {
    std::string label;
    const Manifold* m;
    Field xi;
    std::vector<std::pair<std::string, bool>> flags;
  };
  const std::vector<Expect> table = {
      {"hopf", &b.s3, hopf_field(1),
       {{"geodesic", true}, {"killing", true}, {"covariantly_normal", true}, {"strongly_normal", true},
        {"invariant", true}, {"holonomic", false}}},
      {"flat parallel", &b.space, flat_parallel_field(3),
       {{"geodesic", true}, {"killing", true}, {"covariantly_normal", true}, {"strongly_normal", true},
        {"holonomic", true}, {"invariant", false}}},
      {"flat radial", &b.space, flat_radial_field(3), {{"holonomic", true}, {"killing", false}}},
  };
  bool pass = true;
  std::string wrong;
  for (const auto& e : table) {
    const auto rec = classify(*e.m, e.xi, sample_points(*e.m, &e.xi, 200, 115), 1e-6);
    for (const auto& [name, expected] : e.flags)
      if (rec.flags.at(name).holds != expected) {
        pass = false;
        wrong += " " + e.label + ":" + name;
      }
  }
  return {pass, pass ? "all 14 expected flags match at threshold 1e-6 over 200 samples" : "mismatched:" + wrong};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"hopf field is totally geodesic", hopf_totally_geodesic},
      {"hopf shape operator structure", hopf_operator_structure},
      {"second fundamental form matches the oracle", sff_agreement},
      {"sphere form of the main equation", sphere_equivalence},
      {"warped surface fields are totally geodesic", warped_reproduction},
      {"flat trajectories follow the closed form", flat_trajectories},
      {"hopf second fundamental form block structure", hopf_block_structure},
      {"minimality residual", minimality},
      {"phi-sectional curvature of the hopf image", phi_curvature},
      {"property suites over built-in pairs", property_suites},
      {"classifier truth table", classifier_truth_table},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
