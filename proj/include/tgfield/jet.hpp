// Truncated multivariate Taylor arithmetic.
//
// A Jet holds the Taylor coefficients of a smooth function of `nvars`
// variables around a base point, up to total degree `order`:
//
//     f(p + d) = sum_{|alpha| <= order} c_alpha d^alpha
//
// Coefficients are stored in graded order, so the coefficient list of an
// order-(k-1) jet is a prefix of the order-k list for the same variable count.
// Taking a partial derivative lowers the order by one.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace tgfield {

class MonomialTable {
public:
  struct Product {
    std::uint16_t lhs;
    std::uint16_t rhs;
    std::uint16_t out;
  };

  /// Shared, immutable table for the given variable count and order.
  static const MonomialTable& get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(degree_.size()); }
  int degree(int idx) const { return degree_[idx]; }
  std::span<const std::uint8_t> exponents(int idx) const {
    return {exps_.data() + static_cast<std::size_t>(idx) * nvars_, static_cast<std::size_t>(nvars_)};
  }
  /// Index of the monomial with exponent `idx + e_var`, or -1 if it exceeds the order.
  int raise(int idx, int var) const { return raise_[static_cast<std::size_t>(idx) * nvars_ + var]; }
  /// Index of the monomial with the given exponents, or -1.
  int index_of(std::span<const int> exps) const;
  std::span<const Product> products() const { return products_; }
  /// Number of monomials of degree <= k.
  int prefix_size(int k) const { return prefix_[k]; }

private:
  MonomialTable(int nvars, int order);

  int nvars_;
  int order_;
  std::vector<std::uint8_t> exps_;
  std::vector<int> degree_;
  std::vector<int> raise_;
  std::vector<int> prefix_;
  std::vector<Product> products_;
};

class Jet {
public:
  /// Constant with no variable dependence; combines with jets of any shape.
  Jet(double value = 0.0) : table_(nullptr), c_{value} {}  // NOLINT(google-explicit-constructor)

  static Jet variable(int nvars, int order, int var, double value);
  static Jet zero(int nvars, int order);
  static Jet constant(int nvars, int order, double value);

  bool is_constant() const { return table_ == nullptr; }
  int nvars() const { return table_ ? table_->nvars() : 0; }
  int order() const { return table_ ? table_->order() : 0; }
  const MonomialTable* table() const { return table_; }

  double value() const { return c_[0]; }
  std::span<const double> coefficients() const { return c_; }
  /// Mixed partial derivative d^k f / (d x_{vars[0]} ... d x_{vars[k-1]}) at the base point.
  double derivative(std::initializer_list<int> vars) const;
  double derivative(std::span<const int> vars) const;

  /// Exact partial derivative as a jet of one lower order.
  Jet partial(int var) const;
  Jet truncated(int order) const;
  /// Re-expresses this jet in `target`, mapping local variable i to target variable var_map[i].
  Jet embedded(const MonomialTable& target, std::span<const int> var_map) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator*=(double s);

  friend Jet operator-(const Jet& x);
  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(const Jet& lhs, const Jet& rhs);
  friend Jet operator/(const Jet& lhs, const Jet& rhs);
  friend Jet operator*(Jet lhs, double s) { return lhs *= s; }
  friend Jet operator*(double s, Jet rhs) { return rhs *= s; }

  /// f(x) where taylor[k] = f^(k)(x0) / k! at x0 = value().
  Jet compose(std::span<const double> taylor) const;

private:
  Jet(const MonomialTable* table, std::vector<double> c) : table_(table), c_(std::move(c)) {}
  void promote_to(const MonomialTable* table);
  static const MonomialTable* common(const Jet& a, const Jet& b);

  const MonomialTable* table_;
  std::vector<double> c_;
};

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double r);
Jet reciprocal(const Jet& x);
Jet square(const Jet& x);

/// Identity jets x_i = p_i + d_i.
std::vector<Jet> identity_jets(std::span<const double> point, int order);

}  // namespace tgfield
