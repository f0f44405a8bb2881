#include <cmath>

#include "doctest.h"
#include "tgfield/builtin.hpp"
#include "tgfield/sampling.hpp"

using namespace tgfield;

namespace {

Field smooth_field(int n, double c) {
  return Field("smooth", [n, c](const std::string&, std::span<const Jet> u) {
    std::vector<Jet> v;
    for (int i = 0; i < n; ++i) v.push_back(sin(u[i] * (1.0 + 0.3 * i) + c) + 0.5 * u[(i + 1) % n] * u[i]);
    return v;
  }, false);
}

std::span<const double> span_of(const Vec& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

TEST_CASE("flat metric and connection") {
  const auto m = make_flat(2);
  const Point p = m.point(Vec{{0.3, -1.2}});
  CHECK((metric_at(m, p) - Mat::Identity(2, 2)).norm() == 0.0);
  for (double g : christoffel_at(m, p).gamma) CHECK(g == 0.0);
  const auto r = riemann_at(m, p, Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}}, Vec{{0.0, 1.0}});
  CHECK(r.components.norm() == 0.0);
  CHECK(sectional_curvature(m, p, Vec{{1.0, 0.2}}, Vec{{0.1, 1.0}}) == 0.0);
}

TEST_CASE("sphere metric at the chart origin") {
  const auto s2 = make_sphere(2);
  const Mat g = metric_at(s2, Point{"north", Vec::Zero(2)});
  CHECK((g - 4.0 * Mat::Identity(2, 2)).norm() < 1e-15);
  const Mat gs = metric_at(s2, Point{"south", Vec{{0.5, 0.0}}});
  CHECK(gs(0, 0) == doctest::Approx(4.0 / (1.25 * 1.25)));
}

TEST_CASE("round sphere curvature identities") {
  for (int n : {2, 3, 4}) {
    const auto s = make_sphere(n);
    SampleRng rng(11 + n);
    for (const auto& p : sample_points(s, nullptr, 40, 5 + n)) {
      const LocalGeometry geo(s, p);
      const Vec x = rng.vector(n), y = rng.vector(n), z = rng.vector(n);
      CHECK(sectional_curvature(geo, x, y) == doctest::Approx(1.0).epsilon(1e-9));
      const Vec expected = geo.inner(z, y) * x - geo.inner(z, x) * y;
      CHECK((geo.curvature(x, y, z) - expected).norm() < 1e-9);
      CHECK((geo.curvature(x, y, z) + geo.curvature(y, x, z)).norm() < 1e-10);
      const Vec bianchi = geo.curvature(x, y, z) + geo.curvature(y, z, x) + geo.curvature(z, x, y);
      CHECK(bianchi.norm() < 1e-9);

      // R(X, Y) Y = X for orthonormal X, Y
      const Vec e1 = x / geo.norm(x);
      Vec e2 = y - geo.inner(y, e1) * e1;
      e2 /= geo.norm(e2);
      CHECK((geo.curvature(e1, e2, e2) - e1).norm() < 1e-9);
    }
  }
}

TEST_CASE("christoffel symbols are symmetric and match finite differences") {
  const auto s3 = make_sphere(3);
  const auto w = make_warped_surface(0.5, 0.6);
  for (const Manifold* m : {&s3, &w.manifold}) {
    const int n = m->dim();
    for (const auto& p : sample_points(*m, nullptr, 10, 3)) {
      const auto jet = christoffel_at(*m, p);
      const auto fd = christoffel_fd(*m, p);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            CHECK(std::abs(jet(i, j, k) - jet(i, k, j)) <= 1e-12);
            CHECK(std::abs(jet(i, j, k) - fd(i, j, k)) < 1e-6);
          }
      const LocalGeometry geo(*m, p);
      const auto rfd = riemann_fd(*m, p);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
              CHECK(std::abs(geo.riemann(i, j, k, l) - rfd[((i * n + j) * n + k) * n + l]) < 1e-5);
    }
  }
}

TEST_CASE("warped metric matches hand formulas") {
  const auto w = make_warped_surface(0.5, 0.6);
  for (const auto& p : sample_points(w.manifold, nullptr, 25, 17)) {
    const Jet u = Jet::variable(1, 2, 0, p.coords[0]);
    const Jet al = w.alpha->evaluate(u);
    const double a = al.value(), da = al.derivative({0});
    const Mat g = metric_at(w.manifold, p);
    CHECK(g(0, 0) == doctest::Approx(1.0));
    CHECK(g(0, 1) == 0.0);
    CHECK(g(1, 1) == doctest::Approx(std::sin(a) * std::sin(a)).epsilon(1e-14));

    const auto gam = christoffel_at(w.manifold, p);
    CHECK(gam(0, 1, 1) == doctest::Approx(-std::sin(a) * std::cos(a) * da).epsilon(1e-12));
    CHECK(gam(1, 0, 1) == doctest::Approx(std::cos(a) / std::sin(a) * da).epsilon(1e-12));
    CHECK(gam(0, 0, 0) == 0.0);
    CHECK(gam(1, 1, 1) == 0.0);

    const Jet f = sin(al);
    const double gauss = -f.derivative({0, 0}) / f.value();
    CHECK(sectional_curvature(w.manifold, p, Vec::Unit(2, 0), Vec::Unit(2, 1)) == doctest::Approx(gauss).epsilon(1e-7));
  }
}

TEST_CASE("metric compatibility and Leibniz rule") {
  const auto s3 = make_sphere(3);
  const Field v = smooth_field(3, 0.2), w = smooth_field(3, -0.7);
  SampleRng rng(3);
  for (const auto& p : sample_points(s3, nullptr, 20, 23)) {
    const Vec x = rng.vector(3);
    const JetMatrix g = s3.chart(p.chart).metric_jet(span_of(p.coords), 1);
    const auto jv = v.jet(p, 1), jw = w.jet(p, 1);
    Jet vw = Jet(0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) vw += g(i, j) * jv[i] * jw[j];
    double lhs = 0.0;
    for (int l = 0; l < 3; ++l) lhs += x[l] * vw.derivative({l});
    const LocalGeometry geo(s3, p);
    const Vec nv = covariant_derivative(s3, v, TangentVector{p, x}).components;
    const Vec nw = covariant_derivative(s3, w, TangentVector{p, x}).components;
    CHECK(lhs == doctest::Approx(geo.inner(nv, w.at(p)) + geo.inner(v.at(p), nw)).epsilon(1e-8));

    // Leibniz with f = exp(u1) cos(u2)
    const Field fv("fv", [](const std::string&, std::span<const Jet> u) {
      const Jet f = exp(u[0]) * cos(u[1]);
      std::vector<Jet> out;
      for (int i = 0; i < 3; ++i) out.push_back(f * (sin(u[i] * (1.0 + 0.3 * i) + 0.2) + 0.5 * u[(i + 1) % 3] * u[i]));
      return out;
    }, false);
    const double fval = std::exp(p.coords[0]) * std::cos(p.coords[1]);
    const double xf = x[0] * fval - x[1] * std::exp(p.coords[0]) * std::sin(p.coords[1]);
    const Vec lhs2 = covariant_derivative(s3, fv, TangentVector{p, x}).components;
    CHECK((lhs2 - (xf * v.at(p) + fval * nv)).norm() < 1e-8);

    // torsion-free consistency of the bracket
    const Vec br = lie_bracket(s3, v, w, p).components;
    const Vec nvw = covariant_derivative(s3, w, TangentVector{p, v.at(p)}).components;
    const Vec nwv = covariant_derivative(s3, v, TangentVector{p, w.at(p)}).components;
    CHECK((br - (nvw - nwv)).norm() < 1e-10);
  }
}

TEST_CASE("hopf field is unit, tangent and has a unit-orthogonal derivative") {
  const auto s3 = make_sphere(3);
  const auto xi = hopf_field(1);
  SampleRng rng(8);
  for (const auto& p : sample_points(s3, &xi, 1000, 99)) {
    const Mat g = metric_at(s3, p);
    const Vec v = xi.at(p);
    CHECK(std::abs(v.dot(g * v) - 1.0) < 1e-10);
    const Vec amb = sphere_ambient_vector(TangentVector{p, v});
    CHECK(std::abs(amb.dot(sphere_to_ambient(p))) < 1e-12);
    CHECK((sphere_chart_vector(p, amb) - v).norm() < 1e-10);
  }
  for (const auto& p : sample_points(s3, &xi, 30, 7)) {
    const Vec x = rng.vector(3);
    const Vec d = covariant_derivative(s3, xi, TangentVector{p, x}).components;
    CHECK(std::abs(d.dot(metric_at(s3, p) * xi.at(p))) < 1e-10);
  }
}

TEST_CASE("adapted frames") {
  SUBCASE("coordinate field on the plane") {
    const auto m = make_flat(2);
    const auto f = adapted_frame(m, flat_parallel_field(2), m.point(Vec{{0.1, 0.2}}));
    CHECK((f.vectors[0] - Vec::Unit(2, 0)).norm() == 0.0);
    CHECK((f.vectors[1] - Vec::Unit(2, 1)).norm() < 1e-15);
  }
  SUBCASE("hopf frame is orthonormal") {
    const auto s3 = make_sphere(3);
    const auto xi = hopf_field(1);
    for (const auto& p : sample_points(s3, &xi, 20, 4)) {
      const auto f = adapted_frame(s3, xi, p);
      const Mat e = f.matrix();
      CHECK((e.transpose() * metric_at(s3, p) * e - Mat::Identity(3, 3)).norm() < 1e-12);
      CHECK((f.vectors[0] - xi.at(p)).norm() == 0.0);
    }
  }
  SUBCASE("warped surface") {
    const auto w = make_warped_surface(0.5, 0.6);
    const auto xi = tg_field_2d(w, 0.3);
    for (const auto& p : sample_points(w.manifold, &xi, 20, 4)) {
      const auto f = adapted_frame(w.manifold, xi, p);
      const Mat g = metric_at(w.manifold, p);
      CHECK(std::abs(f.vectors[1].dot(g * xi.at(p))) < 1e-12);
      CHECK(std::abs(f.vectors[1].dot(g * f.vectors[1]) - 1.0) < 1e-12);
    }
  }
  SUBCASE("degenerate seed") {
    const auto m = make_flat(3);
    const auto xi = flat_parallel_field(3);
    const std::vector<Vec> seed = {Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 1) * 2.0};
    CHECK_THROWS_AS(adapted_frame(m, xi, m.point(Vec::Zero(3)), seed), Error);
    try {
      adapted_frame(m, xi, m.point(Vec::Zero(3)), seed);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateSeed);
    }
  }
}

TEST_CASE("error reporting") {
  const auto m = make_flat(2);
  const Point p = m.point(Vec{{0.0, 0.0}});
  try {
    sectional_curvature(m, p, Vec{{1.0, 2.0}}, Vec{{2.0, 4.0}});
    FAIL("expected DegeneratePlane");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegeneratePlane);
  }
  const auto w = make_warped_surface(0.5, 0.6);
  try {
    metric_at(w.manifold, Point{"uv", Vec{{w.alpha->u_max() + 1.0, 0.0}}});
    FAIL("expected PointOutsideDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PointOutsideDomain);
  }
  const auto bad = Manifold("degenerate", ManifoldKind::Generic,
                            {Chart::from_formula("c", Box::unbounded(2), Box::cube(2, -1, 1),
                                                 [](std::span<const Jet> u) {
                                                   JetMatrix g(2, 2);
                                                   g(0, 0) = u[0] * u[0];
                                                   g(1, 1) = Jet(1.0);
                                                   return g;
                                                 })});
  try {
    christoffel_at(bad, Point{"c", Vec{{0.0, 0.3}}});
    FAIL("expected SingularMetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMetric);
  }
}

TEST_CASE("stereographic charts agree on the overlap") {
  for (int n : {2, 3}) {
    const auto s = make_sphere(n);
    SampleRng rng(n);
    for (const auto& p : sample_points(s, nullptr, 30, 40 + n)) {
      if (p.coords.norm() < 0.2) continue;
      const auto q = s.transition(p, "south");
      REQUIRE(q);
      const auto back = s.transition(*q, "north");
      REQUIRE(back);
      CHECK((back->coords - p.coords).norm() < 1e-12);
      CHECK((sphere_to_ambient(p) - sphere_to_ambient(*q)).norm() < 1e-12);

      const Vec x = rng.vector(n), y = rng.vector(n);
      const auto xq = s.transition(TangentVector{p, x}, "south");
      const auto yq = s.transition(TangentVector{p, y}, "south");
      REQUIRE(xq);
      REQUIRE(yq);
      CHECK(x.dot(metric_at(s, p) * y) == doctest::Approx(xq->components.dot(metric_at(s, *q) * yq->components)).epsilon(1e-12));
      CHECK(sectional_curvature(s, p, x, y) == doctest::Approx(sectional_curvature(s, *q, xq->components, yq->components)).epsilon(1e-7));
    }
  }
}
