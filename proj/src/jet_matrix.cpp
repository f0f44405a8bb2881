#include "tgfield/jet_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace tgfield {

int JetMatrix::order() const {
  int k = 0;
  for (const auto& j : data) k = std::max(k, j.order());
  return k;
}

Eigen::MatrixXd JetMatrix::value() const {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = (*this)(i, j).value();
  return m;
}

JetMatrix JetMatrix::partial(int var) const {
  JetMatrix r(rows, cols);
  for (std::size_t i = 0; i < data.size(); ++i) r.data[i] = data[i].partial(var);
  return r;
}

JetMatrix JetMatrix::truncated(int order) const {
  JetMatrix r(rows, cols);
  for (std::size_t i = 0; i < data.size(); ++i) r.data[i] = data[i].truncated(order);
  return r;
}

JetMatrix JetMatrix::scaled(double s) const {
  JetMatrix r = *this;
  for (auto& j : r.data) j *= s;
  return r;
}

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("JetMatrix: shape mismatch in product");
  JetMatrix r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < b.cols; ++j) {
      Jet s(0.0);
      for (int k = 0; k < a.cols; ++k) s += a(i, k) * b(k, j);
      r(i, j) = std::move(s);
    }
  return r;
}

JetMatrix operator+(const JetMatrix& a, const JetMatrix& b) {
  JetMatrix r = a;
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] += b.data[i];
  return r;
}

JetMatrix operator-(const JetMatrix& a, const JetMatrix& b) {
  JetMatrix r = a;
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] -= b.data[i];
  return r;
}

JetMatrix transpose(const JetMatrix& a) {
  JetMatrix r(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) r(j, i) = a(i, j);
  return r;
}

JetMatrix from_constant(const Eigen::MatrixXd& m) {
  JetMatrix r(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < r.rows; ++i)
    for (int j = 0; j < r.cols; ++j) r(i, j) = Jet(m(i, j));
  return r;
}

JetMatrix inverse(const JetMatrix& m) {
  const Eigen::MatrixXd m0 = m.value();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m0);
  if (!lu.isInvertible()) throw std::domain_error("JetMatrix: singular value in inverse");
  const Eigen::MatrixXd inv0 = lu.inverse();
  const int k = m.order();
  const JetMatrix inv0_jet = from_constant(inv0);
  if (k == 0) return inv0_jet;

  // m = m0 + d with d nilpotent, so m^-1 = sum_p (-m0^-1 d)^p m0^-1 terminates at p = k.
  JetMatrix d = m;
  for (auto& j : d.data) j -= Jet(j.value());
  const JetMatrix step = from_constant(-inv0) * d;
  JetMatrix term = inv0_jet;
  JetMatrix result = inv0_jet;
  for (int p = 1; p <= k; ++p) {
    term = step * term;
    result = result + term;
  }
  return result;
}

std::vector<Jet> christoffel_jet(const JetMatrix& metric) {
  const int n = metric.rows;
  const int k = metric.order();
  if (k < 1) {
    // Constant metric: all symbols vanish.
    return std::vector<Jet>(static_cast<std::size_t>(n) * n * n, Jet(0.0));
  }
  const JetMatrix ginv = inverse(metric).truncated(k - 1);
  std::vector<JetMatrix> dg;
  dg.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) dg.push_back(metric.partial(l));

  std::vector<Jet> gamma(static_cast<std::size_t>(n) * n * n, Jet(0.0));
  for (int j = 0; j < n; ++j)
    for (int kk = j; kk < n; ++kk) {
      std::vector<Jet> lowered(static_cast<std::size_t>(n));
      for (int l = 0; l < n; ++l) lowered[l] = (dg[j](l, kk) + dg[kk](l, j) - dg[l](j, kk)) * 0.5;
      for (int i = 0; i < n; ++i) {
        Jet s(0.0);
        for (int l = 0; l < n; ++l) s += ginv(i, l) * lowered[l];
        gamma[(static_cast<std::size_t>(i) * n + j) * n + kk] = s;
        gamma[(static_cast<std::size_t>(i) * n + kk) * n + j] = s;
      }
    }
  return gamma;
}

}  // namespace tgfield
