#include "tgfield/sampling.hpp"

namespace tgfield {

Vec SampleRng::vector(int n, double lo, double hi) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

std::vector<Point> sample_points(const Manifold& m, const Field* xi, int count, std::uint64_t seed,
                                 const std::string& chart) {
  const Chart& c = chart.empty() ? m.default_chart() : m.chart(chart);
  Box box = c.sample_box();
  if (xi)
    if (const auto d = xi->domain(c.id())) box = box.intersect(*d);
  SampleRng rng(seed);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    Point p{c.id(), Vec(c.dim())};
    for (int i = 0; i < c.dim(); ++i) p.coords[i] = rng.uniform(box.axis(i).lo, box.axis(i).hi);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace tgfield
