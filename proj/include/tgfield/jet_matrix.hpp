#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tgfield/jet.hpp"

namespace tgfield {

/// Dense row-major matrix of jets.
struct JetMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Jet> data;

  JetMatrix() = default;
  JetMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, Jet(0.0)) {}

  Jet& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const Jet& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  /// Highest order among the entries (constants count as order 0).
  int order() const;
  Eigen::MatrixXd value() const;
  JetMatrix partial(int var) const;
  JetMatrix truncated(int order) const;
  JetMatrix scaled(double s) const;
};

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b);
JetMatrix operator+(const JetMatrix& a, const JetMatrix& b);
JetMatrix operator-(const JetMatrix& a, const JetMatrix& b);
JetMatrix transpose(const JetMatrix& a);
JetMatrix from_constant(const Eigen::MatrixXd& m);

/// Taylor expansion of the inverse, valid whenever value() is invertible.
JetMatrix inverse(const JetMatrix& m);

/// Levi-Civita symbols Gamma^i_{jk} (flattened [i][j][k]) as jets of one lower order
/// than the metric jets; derivatives are taken in variables 0..n-1.
std::vector<Jet> christoffel_jet(const JetMatrix& metric);

}  // namespace tgfield
