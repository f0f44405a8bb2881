// Reproducible sample points and random vectors.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tgfield/manifold.hpp"

namespace tgfield {

inline constexpr const char* kRngName = "mt19937_64";

/// Uniform doubles in [0, 1) from the top 53 bits, identical on every platform.
class SampleRng {
public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Vec vector(int n, double lo = -1.0, double hi = 1.0);

private:
  std::mt19937_64 engine_;
};

/// Points drawn uniformly from the chart's sample box, restricted to the field domain when given.
std::vector<Point> sample_points(const Manifold& m, const Field* xi, int count, std::uint64_t seed,
                                 const std::string& chart = {});

}  // namespace tgfield
