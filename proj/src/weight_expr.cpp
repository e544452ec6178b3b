#include "wkstab/weight_expr.hpp"

#include <cmath>

#include "wkstab/error.hpp"

namespace wkstab {

struct WeightExpr::Node {
  Kind kind = Kind::scalar;
  MultiPoly poly;
  DoublePoly dpoly;
  AffineFunctional aff;
  Rational exponent;
  bool exponent_exact = true;
  double exponent_d = 0;
  Rational scalar;
  std::vector<WeightExpr> args;
};

namespace {

bool is_nonneg_integer(const Rational& q) { return q.get_den() == 1 && q >= 0; }

[[noreturn]] void domain_error(const char* what) { throw Error("DomainError", what); }

}  // namespace

WeightExpr WeightExpr::scalar(const Rational& value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::scalar;
  n->scalar = value;
  return WeightExpr(std::move(n));
}

WeightExpr WeightExpr::poly(MultiPoly p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::poly;
  n->dpoly = DoublePoly(p);
  n->poly = std::move(p);
  return WeightExpr(std::move(n));
}

WeightExpr WeightExpr::affpow(AffineFunctional base, Rational exponent) {
  if (exponent == 0) return scalar(1);
  auto n = std::make_shared<Node>();
  n->kind = Kind::affpow;
  n->aff = std::move(base);
  n->exponent_d = exponent.get_d();
  n->exponent = std::move(exponent);
  return WeightExpr(std::move(n));
}

WeightExpr WeightExpr::affpow_real(AffineFunctional base, double exponent) {
  if (!std::isfinite(exponent)) throw Error("input", "affine power exponent must be finite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::affpow;
  n->aff = std::move(base);
  n->exponent = from_double(exponent);
  n->exponent_d = exponent;
  n->exponent_exact = false;
  return WeightExpr(std::move(n));
}

WeightExpr WeightExpr::expaff(AffineFunctional l) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::expaff;
  n->aff = std::move(l);
  return WeightExpr(std::move(n));
}

WeightExpr WeightExpr::sum(std::vector<WeightExpr> terms) {
  std::vector<WeightExpr> flat;
  Rational constant = 0;
  for (auto& t : terms) {
    if (t.kind() == Kind::scalar) {
      constant += t.scalar_value();
    } else if (t.kind() == Kind::sum) {
      for (const auto& s : t.args()) {
        if (s.kind() == Kind::scalar) constant += s.scalar_value();
        else flat.push_back(s);
      }
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (constant != 0 || flat.empty()) flat.push_back(scalar(constant));
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::sum;
  n->args = std::move(flat);
  return WeightExpr(std::move(n));
}

WeightExpr WeightExpr::product(std::vector<WeightExpr> factors) {
  std::vector<WeightExpr> flat;
  Rational constant = 1;
  for (auto& f : factors) {
    if (f.kind() == Kind::scalar) {
      constant *= f.scalar_value();
    } else if (f.kind() == Kind::product) {
      for (const auto& s : f.args()) {
        if (s.kind() == Kind::scalar) constant *= s.scalar_value();
        else flat.push_back(s);
      }
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (constant == 0) return scalar(0);
  if (constant != 1 || flat.empty()) flat.insert(flat.begin(), scalar(constant));
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  n->args = std::move(flat);
  return WeightExpr(std::move(n));
}

WeightExpr WeightExpr::quotient(WeightExpr numerator, WeightExpr denominator) {
  if (numerator.is_scalar(0)) return scalar(0);
  if (denominator.kind() == Kind::scalar) {
    if (denominator.scalar_value() == 0) domain_error("division by the zero scalar");
    return product({scalar(1 / denominator.scalar_value()), std::move(numerator)});
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::quotient;
  n->args = {std::move(numerator), std::move(denominator)};
  return WeightExpr(std::move(n));
}

WeightExpr::Kind WeightExpr::kind() const { return node_->kind; }
const MultiPoly& WeightExpr::poly_data() const { return node_->poly; }
const AffineFunctional& WeightExpr::affine_data() const { return node_->aff; }
const Rational& WeightExpr::exponent() const { return node_->exponent; }
bool WeightExpr::exponent_exact() const { return node_->exponent_exact; }
double WeightExpr::exponent_value() const { return node_->exponent_d; }
const Rational& WeightExpr::scalar_value() const { return node_->scalar; }
const std::vector<WeightExpr>& WeightExpr::args() const { return node_->args; }

bool WeightExpr::is_scalar(const Rational& value) const {
  return kind() == Kind::scalar && scalar_value() == value;
}

bool WeightExpr::has_inexact_exponent() const {
  if (kind() == Kind::affpow) return !exponent_exact();
  for (const auto& a : args())
    if (a.has_inexact_exponent()) return true;
  return false;
}

std::optional<int> WeightExpr::dim() const {
  switch (kind()) {
    case Kind::scalar: return std::nullopt;
    case Kind::poly: return poly_data().dim();
    case Kind::affpow:
    case Kind::expaff: return affine_data().dim();
    default:
      for (const auto& a : args())
        if (auto d = a.dim()) return d;
      return std::nullopt;
  }
}

double WeightExpr::operator()(std::span<const double> x) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::scalar: return n.scalar.get_d();
    case Kind::poly: return n.dpoly.value(x);
    case Kind::affpow: {
      const double b = n.aff(x);
      if (n.exponent_exact && is_nonneg_integer(n.exponent))
        return std::pow(b, static_cast<int>(n.exponent.get_num().get_si()));
      if (b <= 0) domain_error("affine power base is not positive");
      return std::pow(b, n.exponent_d);
    }
    case Kind::expaff: return std::exp(n.aff(x));
    case Kind::sum: {
      double s = 0;
      for (const auto& a : n.args) s += a(x);
      return s;
    }
    case Kind::product: {
      double p = 1;
      for (const auto& a : n.args) p *= a(x);
      return p;
    }
    case Kind::quotient: {
      const double den = n.args[1](x);
      if (den == 0) domain_error("quotient denominator vanishes");
      return n.args[0](x) / den;
    }
  }
  return 0;
}

Jet WeightExpr::jet(std::span<const double> x) const {
  Jet j;
  jet_into(x, j);
  return j;
}

void WeightExpr::jet_into(std::span<const double> x, Jet& out) const {
  const Node& n = *node_;
  const std::size_t d = x.size();
  out.grad.assign(d, 0.0);
  out.hess.assign(d * d, 0.0);
  switch (n.kind) {
    case Kind::scalar:
      out.value = n.scalar.get_d();
      return;
    case Kind::poly:
      n.dpoly.jet(x, out.value, out.grad, out.hess);
      return;
    case Kind::affpow: {
      const double b = n.aff(x);
      const double m = n.exponent_d;
      const bool integral = n.exponent_exact && is_nonneg_integer(n.exponent);
      if (!integral && b <= 0) domain_error("affine power base is not positive");
      double f, f1, f2;  // b^m, m b^(m-1), m(m-1) b^(m-2)
      if (integral) {
        const int k = static_cast<int>(n.exponent.get_num().get_si());
        f = std::pow(b, k);
        f1 = k >= 1 ? k * std::pow(b, k - 1) : 0.0;
        f2 = k >= 2 ? k * (k - 1) * std::pow(b, k - 2) : 0.0;
      } else {
        f = std::pow(b, m);
        f1 = m * std::pow(b, m - 1);
        f2 = m * (m - 1) * std::pow(b, m - 2);
      }
      out.value = f;
      std::vector<double> u = to_double(n.aff.u);
      for (std::size_t i = 0; i < d; ++i) {
        out.grad[i] = f1 * u[i];
        for (std::size_t k = 0; k < d; ++k) out.hess[i * d + k] = f2 * u[i] * u[k];
      }
      return;
    }
    case Kind::expaff: {
      const double f = std::exp(n.aff(x));
      std::vector<double> u = to_double(n.aff.u);
      out.value = f;
      for (std::size_t i = 0; i < d; ++i) {
        out.grad[i] = f * u[i];
        for (std::size_t k = 0; k < d; ++k) out.hess[i * d + k] = f * u[i] * u[k];
      }
      return;
    }
    case Kind::sum: {
      out.value = 0;
      Jet t;
      for (const auto& a : n.args) {
        a.jet_into(x, t);
        out.value += t.value;
        for (std::size_t i = 0; i < d; ++i) out.grad[i] += t.grad[i];
        for (std::size_t i = 0; i < d * d; ++i) out.hess[i] += t.hess[i];
      }
      return;
    }
    case Kind::product: {
      out.value = 1;
      Jet t;
      for (const auto& a : n.args) {
        a.jet_into(x, t);
        // (fg)'' = f g'' + g f'' + f' g'^T + g' f'^T, using the old f.
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t k = 0; k < d; ++k)
            out.hess[i * d + k] = out.value * t.hess[i * d + k] + t.value * out.hess[i * d + k] +
                                  out.grad[i] * t.grad[k] + t.grad[i] * out.grad[k];
        for (std::size_t i = 0; i < d; ++i) out.grad[i] = out.value * t.grad[i] + t.value * out.grad[i];
        out.value *= t.value;
      }
      return;
    }
    case Kind::quotient: {
      Jet a, b;
      n.args[0].jet_into(x, a);
      n.args[1].jet_into(x, b);
      if (b.value == 0) domain_error("quotient denominator vanishes");
      const double q = a.value / b.value;
      out.value = q;
      for (std::size_t i = 0; i < d; ++i) out.grad[i] = (a.grad[i] - q * b.grad[i]) / b.value;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k)
          out.hess[i * d + k] = (a.hess[i * d + k] - q * b.hess[i * d + k] -
                                 b.grad[i] * out.grad[k] - out.grad[i] * b.grad[k]) /
                                b.value;
      return;
    }
  }
}

std::optional<MultiPoly> WeightExpr::to_poly(int dim) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::scalar: return MultiPoly::constant(dim, n.scalar);
    case Kind::poly:
      if (n.poly.dim() != dim) return std::nullopt;
      return n.poly;
    case Kind::affpow:
      if (!n.exponent_exact || !is_nonneg_integer(n.exponent) || n.aff.dim() != dim)
        return std::nullopt;
      return MultiPoly::affine(n.aff).pow(static_cast<int>(n.exponent.get_num().get_si()));
    case Kind::expaff: return std::nullopt;
    case Kind::sum: {
      MultiPoly s(dim);
      for (const auto& a : n.args) {
        auto p = a.to_poly(dim);
        if (!p) return std::nullopt;
        s += *p;
      }
      return s;
    }
    case Kind::product: {
      MultiPoly s = MultiPoly::constant(dim, 1);
      for (const auto& a : n.args) {
        auto p = a.to_poly(dim);
        if (!p) return std::nullopt;
        s = s * *p;
      }
      return s;
    }
    case Kind::quotient: {
      auto num = n.args[0].to_poly(dim);
      auto den = n.args[1].to_poly(dim);
      if (!num || !den || den->degree() != 0) return std::nullopt;
      return (1 / den->terms().begin()->second) * *num;
    }
  }
  return std::nullopt;
}

WeightExpr WeightExpr::partial(int i, int dim) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::scalar: return scalar(0);
    case Kind::poly: {
      MultiPoly p = n.poly.partial(i);
      if (p.is_zero()) return scalar(0);
      return poly(std::move(p));
    }
    case Kind::affpow: {
      const Rational& ui = n.aff.u[i];
      if (ui == 0) return scalar(0);
      if (!n.exponent_exact) {
        return product({scalar(ui * from_double(n.exponent_d)),
                        affpow_real(n.aff, n.exponent_d - 1)});
      }
      return product({scalar(ui * n.exponent), affpow(n.aff, n.exponent - 1)});
    }
    case Kind::expaff: {
      const Rational& ui = n.aff.u[i];
      if (ui == 0) return scalar(0);
      return product({scalar(ui), *this});
    }
    case Kind::sum: {
      std::vector<WeightExpr> terms;
      for (const auto& a : n.args) terms.push_back(a.partial(i, dim));
      return sum(std::move(terms));
    }
    case Kind::product: {
      std::vector<WeightExpr> terms;
      for (std::size_t k = 0; k < n.args.size(); ++k) {
        WeightExpr dk = n.args[k].partial(i, dim);
        if (dk.is_scalar(0)) continue;
        std::vector<WeightExpr> factors;
        for (std::size_t m = 0; m < n.args.size(); ++m) factors.push_back(m == k ? dk : n.args[m]);
        terms.push_back(product(std::move(factors)));
      }
      return sum(std::move(terms));
    }
    case Kind::quotient: {
      const WeightExpr& a = n.args[0];
      const WeightExpr& b = n.args[1];
      WeightExpr num = a.partial(i, dim) * b - a * b.partial(i, dim);
      return quotient(num, b * b);
    }
  }
  return scalar(0);
}

WeightExpr WeightExpr::euler(int dim) const {
  std::vector<WeightExpr> terms;
  for (int i = 0; i < dim; ++i) {
    WeightExpr d = partial(i, dim);
    if (d.is_scalar(0)) continue;
    terms.push_back(product({poly(MultiPoly::variable(dim, i)), d}));
  }
  return sum(std::move(terms));
}

}  // namespace wkstab
