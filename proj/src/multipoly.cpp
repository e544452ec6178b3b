#include "wkstab/multipoly.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace wkstab {

MultiPoly MultiPoly::constant(int n, const Rational& c) {
  MultiPoly p(n);
  p.add_term(Exponent(n, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(int n, int i) {
  Exponent e(n, 0);
  e[i] = 1;
  return monomial(e);
}

MultiPoly MultiPoly::affine(const AffineFunctional& l) {
  const int n = l.dim();
  MultiPoly p = constant(n, l.c);
  for (int i = 0; i < n; ++i) {
    Exponent e(n, 0);
    e[i] = 1;
    p.add_term(e, l.u[i]);
  }
  return p;
}

MultiPoly MultiPoly::monomial(const Exponent& e, const Rational& c) {
  MultiPoly p(static_cast<int>(e.size()));
  p.add_term(e, c);
  return p;
}

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

int MultiPoly::max_partial_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_)
    for (int k : e) d = std::max(d, k);
  return d;
}

void MultiPoly::add_term(const Exponent& e, const Rational& c) {
  assert(static_cast<int>(e.size()) == n_);
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational MultiPoly::operator()(const RVec& x) const {
  // Per-variable power tables keep evaluation cheap for dense terms.
  const int maxd = max_partial_degree();
  std::vector<std::vector<Rational>> powers(n_);
  for (int i = 0; i < n_; ++i) {
    powers[i].resize(maxd + 1);
    powers[i][0] = 1;
    for (int k = 1; k <= maxd; ++k) powers[i][k] = powers[i][k - 1] * x[i];
  }
  Rational s = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < n_; ++i)
      if (e[i]) t *= powers[i][e[i]];
    s += t;
  }
  return s;
}

double MultiPoly::operator()(std::span<const double> x) const { return DoublePoly(*this).value(x); }

MultiPoly MultiPoly::partial(int i) const {
  MultiPoly r(n_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent f = e;
    --f[i];
    r.add_term(f, c * e[i]);
  }
  return r;
}

MultiPoly MultiPoly::pow(int k) const {
  MultiPoly r = constant(n_, 1);
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

MultiPoly MultiPoly::compose(const std::vector<MultiPoly>& substitution) const {
  assert(static_cast<int>(substitution.size()) == n_);
  const int m = substitution.empty() ? 0 : substitution.front().dim();
  const int maxd = max_partial_degree();
  std::vector<std::vector<MultiPoly>> powers(n_);
  for (int i = 0; i < n_; ++i) {
    powers[i].reserve(maxd + 1);
    powers[i].push_back(constant(m, 1));
    for (int k = 1; k <= maxd; ++k) powers[i].push_back(powers[i].back() * substitution[i]);
  }
  MultiPoly r(m);
  for (const auto& [e, c] : terms_) {
    MultiPoly t = constant(m, c);
    for (int i = 0; i < n_; ++i)
      if (e[i]) t = t * powers[i][e[i]];
    r += t;
  }
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r(a.n_);
  Exponent e(a.n_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

DoublePoly::DoublePoly(const MultiPoly& p) : n_(p.dim()) {
  max_exp_ = p.max_partial_degree();
  for (const auto& [e, c] : p.terms()) {
    exps_.insert(exps_.end(), e.begin(), e.end());
    coefs_.push_back(c.get_d());
  }
}

namespace {

// powers[i * (maxd + 1) + k] = x_i^k
void power_table(std::span<const double> x, int n, int maxd, std::vector<double>& powers) {
  powers.assign(static_cast<std::size_t>(n) * (maxd + 1), 1.0);
  for (int i = 0; i < n; ++i)
    for (int k = 1; k <= maxd; ++k) powers[i * (maxd + 1) + k] = powers[i * (maxd + 1) + k - 1] * x[i];
}

}  // namespace

double DoublePoly::value(std::span<const double> x) const {
  thread_local std::vector<double> powers;
  power_table(x, n_, max_exp_, powers);
  double s = 0;
  const std::size_t terms = coefs_.size();
  for (std::size_t t = 0; t < terms; ++t) {
    double v = coefs_[t];
    const int* e = &exps_[t * n_];
    for (int i = 0; i < n_; ++i) v *= powers[i * (max_exp_ + 1) + e[i]];
    s += v;
  }
  return s;
}

void DoublePoly::jet(std::span<const double> x, double& value, std::span<double> grad,
                     std::span<double> hess) const {
  thread_local std::vector<double> powers;
  power_table(x, n_, max_exp_, powers);
  const int stride = max_exp_ + 1;
  auto pw = [&](int i, int k) { return k < 0 ? 0.0 : powers[i * stride + k]; };
  value = 0;
  std::fill(grad.begin(), grad.end(), 0.0);
  std::fill(hess.begin(), hess.end(), 0.0);
  const std::size_t terms = coefs_.size();
  for (std::size_t t = 0; t < terms; ++t) {
    const int* e = &exps_[t * n_];
    const double c = coefs_[t];
    double v = c;
    for (int i = 0; i < n_; ++i) v *= pw(i, e[i]);
    value += v;
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      double gi = c * e[i];
      for (int k = 0; k < n_; ++k) gi *= (k == i) ? pw(k, e[k] - 1) : pw(k, e[k]);
      grad[i] += gi;
      for (int j = 0; j < n_; ++j) {
        double hij;
        if (j == i) {
          if (e[i] < 2) continue;
          hij = c * e[i] * (e[i] - 1);
          for (int k = 0; k < n_; ++k) hij *= (k == i) ? pw(k, e[k] - 2) : pw(k, e[k]);
        } else {
          if (e[j] == 0) continue;
          hij = c * e[i] * e[j];
          for (int k = 0; k < n_; ++k)
            hij *= (k == i || k == j) ? pw(k, e[k] - 1) : pw(k, e[k]);
        }
        hess[i * n_ + j] += hij;
      }
    }
  }
}

}  // namespace wkstab
