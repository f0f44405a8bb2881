#include "tgfield/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace tgfield {

namespace {

void enumerate_degree(int nvars, int degree, int var, std::vector<std::uint8_t>& current,
                      std::vector<std::uint8_t>& out) {
  if (var == nvars - 1) {
    current[var] = static_cast<std::uint8_t>(degree);
    out.insert(out.end(), current.begin(), current.end());
    current[var] = 0;
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[var] = static_cast<std::uint8_t>(e);
    enumerate_degree(nvars, degree - e, var + 1, current, out);
  }
  current[var] = 0;
}

}  // namespace

MonomialTable::MonomialTable(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1 || order < 0 || order > 8) throw std::invalid_argument("MonomialTable: bad shape");
  std::vector<std::uint8_t> current(static_cast<std::size_t>(nvars), 0);
  prefix_.assign(static_cast<std::size_t>(order) + 1, 0);
  for (int d = 0; d <= order; ++d) {
    const std::size_t before = exps_.size() / nvars;
    enumerate_degree(nvars, d, 0, current, exps_);
    const std::size_t after = exps_.size() / nvars;
    degree_.insert(degree_.end(), after - before, d);
    prefix_[d] = static_cast<int>(after);
  }
  if (size() > 65535) throw std::invalid_argument("MonomialTable: too many monomials");

  std::map<std::vector<std::uint8_t>, int> lookup;
  for (int i = 0; i < size(); ++i) {
    auto e = exponents(i);
    lookup.emplace(std::vector<std::uint8_t>(e.begin(), e.end()), i);
  }

  raise_.assign(static_cast<std::size_t>(size()) * nvars, -1);
  for (int i = 0; i < size(); ++i) {
    if (degree_[i] == order) continue;
    auto e = exponents(i);
    std::vector<std::uint8_t> key(e.begin(), e.end());
    for (int v = 0; v < nvars; ++v) {
      ++key[v];
      raise_[static_cast<std::size_t>(i) * nvars + v] = lookup.at(key);
      --key[v];
    }
  }

  std::vector<std::uint8_t> key(static_cast<std::size_t>(nvars));
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (degree_[i] + degree_[j] > order) continue;
      auto a = exponents(i);
      auto b = exponents(j);
      for (int v = 0; v < nvars; ++v) key[v] = static_cast<std::uint8_t>(a[v] + b[v]);
      products_.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                           static_cast<std::uint16_t>(lookup.at(key))});
    }
  }
}

const MonomialTable& MonomialTable::get(int nvars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<MonomialTable>> tables;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = tables[{nvars, order}];
  if (!slot) slot.reset(new MonomialTable(nvars, order));
  return *slot;
}

int MonomialTable::index_of(std::span<const int> exps) const {
  if (static_cast<int>(exps.size()) != nvars_) return -1;
  int idx = 0;
  int total = 0;
  for (int v = 0; v < nvars_; ++v) {
    if (exps[v] < 0) return -1;
    total += exps[v];
  }
  if (total > order_) return -1;
  // Walk up from the constant monomial one variable at a time.
  for (int v = 0; v < nvars_; ++v) {
    for (int k = 0; k < exps[v]; ++k) idx = raise(idx, v);
  }
  return idx;
}

// ---------------------------------------------------------------------------

Jet Jet::variable(int nvars, int order, int var, double value) {
  const auto& t = MonomialTable::get(nvars, order);
  std::vector<double> c(static_cast<std::size_t>(t.size()), 0.0);
  c[0] = value;
  if (order >= 1) c[t.raise(0, var)] = 1.0;
  return Jet(&t, std::move(c));
}

Jet Jet::zero(int nvars, int order) {
  const auto& t = MonomialTable::get(nvars, order);
  return Jet(&t, std::vector<double>(static_cast<std::size_t>(t.size()), 0.0));
}

Jet Jet::constant(int nvars, int order, double value) {
  Jet j = zero(nvars, order);
  j.c_[0] = value;
  return j;
}

double Jet::derivative(std::initializer_list<int> vars) const {
  return derivative(std::span<const int>(vars.begin(), vars.size()));
}

double Jet::derivative(std::span<const int> vars) const {
  if (vars.empty()) return c_[0];
  if (!table_) return 0.0;
  if (static_cast<int>(vars.size()) > table_->order())
    throw std::out_of_range("Jet::derivative: order exceeds jet order");
  int idx = 0;
  std::vector<int> count(static_cast<std::size_t>(table_->nvars()), 0);
  for (int v : vars) {
    idx = table_->raise(idx, v);
    ++count[v];
  }
  double factorial = 1.0;
  for (int k : count)
    for (int i = 2; i <= k; ++i) factorial *= i;
  return factorial * c_[idx];
}

Jet Jet::partial(int var) const {
  if (!table_) return Jet(0.0);
  if (table_->order() == 0) throw std::logic_error("Jet::partial: order-0 jet has no derivatives");
  const auto& lower = MonomialTable::get(table_->nvars(), table_->order() - 1);
  std::vector<double> out(static_cast<std::size_t>(lower.size()), 0.0);
  for (int i = 0; i < lower.size(); ++i) {
    const int up = table_->raise(i, var);
    out[i] = (lower.exponents(i)[var] + 1) * c_[up];
  }
  return Jet(&lower, std::move(out));
}

Jet Jet::truncated(int order) const {
  if (!table_ || order >= table_->order()) return *this;
  const auto& lower = MonomialTable::get(table_->nvars(), order);
  return Jet(&lower, std::vector<double>(c_.begin(), c_.begin() + lower.size()));
}

Jet Jet::embedded(const MonomialTable& target, std::span<const int> var_map) const {
  std::vector<double> out(static_cast<std::size_t>(target.size()), 0.0);
  if (!table_) {
    out[0] = c_[0];
    return Jet(&target, std::move(out));
  }
  std::vector<int> exps(static_cast<std::size_t>(target.nvars()), 0);
  for (int i = 0; i < table_->size(); ++i) {
    if (table_->degree(i) > target.order()) break;
    std::fill(exps.begin(), exps.end(), 0);
    auto e = table_->exponents(i);
    for (int v = 0; v < table_->nvars(); ++v) exps[var_map[v]] += e[v];
    out[target.index_of(exps)] += c_[i];
  }
  return Jet(&target, std::move(out));
}

const MonomialTable* Jet::common(const Jet& a, const Jet& b) {
  if (!a.table_) return b.table_;
  if (!b.table_) return a.table_;
  if (a.table_->nvars() != b.table_->nvars())
    throw std::invalid_argument("Jet: mixing jets with different variable counts");
  return a.table_->order() <= b.table_->order() ? a.table_ : b.table_;
}

void Jet::promote_to(const MonomialTable* table) {
  if (table == table_) return;
  if (!table_) {
    std::vector<double> c(static_cast<std::size_t>(table->size()), 0.0);
    c[0] = c_[0];
    c_ = std::move(c);
  } else {
    c_.resize(static_cast<std::size_t>(table->size()));
  }
  table_ = table;
}

Jet& Jet::operator+=(const Jet& rhs) {
  const auto* t = common(*this, rhs);
  promote_to(t);
  if (rhs.table_ == nullptr) {
    c_[0] += rhs.c_[0];
  } else {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  }
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  const auto* t = common(*this, rhs);
  promote_to(t);
  if (rhs.table_ == nullptr) {
    c_[0] -= rhs.c_[0];
  } else {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  }
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet operator-(const Jet& x) {
  Jet r = x;
  for (auto& c : r.c_) c = -c;
  return r;
}

Jet operator*(const Jet& lhs, const Jet& rhs) {
  if (!lhs.table_) return rhs * lhs.c_[0];
  if (!rhs.table_) return lhs * rhs.c_[0];
  const auto* t = Jet::common(lhs, rhs);
  std::vector<double> out(static_cast<std::size_t>(t->size()), 0.0);
  for (const auto& p : t->products()) out[p.out] += lhs.c_[p.lhs] * rhs.c_[p.rhs];
  return Jet(t, std::move(out));
}

Jet operator/(const Jet& lhs, const Jet& rhs) {
  if (!rhs.table_) return lhs * (1.0 / rhs.c_[0]);
  return lhs * reciprocal(rhs);
}

Jet Jet::compose(std::span<const double> taylor) const {
  if (!table_) return Jet(taylor[0]);
  const int k = std::min<int>(table_->order(), static_cast<int>(taylor.size()) - 1);
  Jet h = *this;
  h.c_[0] = 0.0;
  Jet r = Jet::constant(table_->nvars(), table_->order(), taylor[k]);
  for (int i = k - 1; i >= 0; --i) {
    r = r * h;
    r.c_[0] += taylor[i];
  }
  return r;
}

// ---------------------------------------------------------------------------

Jet sin(const Jet& x) {
  const double a = x.value();
  const double s = std::sin(a), c = std::cos(a);
  std::vector<double> t(static_cast<std::size_t>(x.order()) + 1);
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    const double cycle[4] = {s, c, -s, -c};
    t[k] = cycle[k % 4] / fact;
  }
  return x.compose(t);
}

Jet cos(const Jet& x) {
  const double a = x.value();
  const double s = std::sin(a), c = std::cos(a);
  std::vector<double> t(static_cast<std::size_t>(x.order()) + 1);
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    const double cycle[4] = {c, -s, -c, s};
    t[k] = cycle[k % 4] / fact;
  }
  return x.compose(t);
}

Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  std::vector<double> t(static_cast<std::size_t>(x.order()) + 1);
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    t[k] = e / fact;
  }
  return x.compose(t);
}

Jet log(const Jet& x) {
  const double a = x.value();
  std::vector<double> t(static_cast<std::size_t>(x.order()) + 1);
  t[0] = std::log(a);
  for (std::size_t k = 1; k < t.size(); ++k)
    t[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (static_cast<double>(k) * std::pow(a, static_cast<double>(k)));
  return x.compose(t);
}

Jet pow(const Jet& x, double r) {
  const double a = x.value();
  std::vector<double> t(static_cast<std::size_t>(x.order()) + 1);
  double binom = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) binom *= (r - static_cast<double>(k - 1)) / static_cast<double>(k);
    t[k] = binom * std::pow(a, r - static_cast<double>(k));
  }
  return x.compose(t);
}

Jet sqrt(const Jet& x) { return pow(x, 0.5); }

Jet reciprocal(const Jet& x) {
  const double inv = 1.0 / x.value();
  std::vector<double> t(static_cast<std::size_t>(x.order()) + 1);
  double p = inv;
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = (k % 2 == 0) ? p : -p;
    p *= inv;
  }
  return x.compose(t);
}

Jet square(const Jet& x) { return x * x; }

std::vector<Jet> identity_jets(std::span<const double> point, int order) {
  const int n = static_cast<int>(point.size());
  std::vector<Jet> out;
  out.reserve(point.size());
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(n, order, i, point[i]));
  return out;
}

}  // namespace tgfield
