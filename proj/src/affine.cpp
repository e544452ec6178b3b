#include "wkstab/affine.hpp"

#include <sstream>

namespace wkstab {

AffineFunctional AffineFunctional::constant(int n, const Rational& value) {
  return {RVec(n, Rational(0)), value};
}

AffineFunctional AffineFunctional::coordinate(int n, int i) {
  RVec u(n, Rational(0));
  u[i] = 1;
  return {std::move(u), Rational(0)};
}

double AffineFunctional::operator()(std::span<const double> x) const {
  double s = c.get_d();
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i].get_d() * x[i];
  return s;
}

bool AffineFunctional::is_constant() const {
  for (const auto& ui : u)
    if (ui != 0) return false;
  return true;
}

bool AffineFunctional::is_primitive_integer() const {
  mpz_class g = 0;
  for (const auto& ui : u) {
    if (ui.get_den() != 1) return false;
    mpz_class a = abs(ui.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  }
  return g == 1;
}

AffineFunctional AffineFunctional::operator-() const {
  AffineFunctional r = *this;
  for (auto& ui : r.u) ui = -ui;
  r.c = -r.c;
  return r;
}

AffineFunctional operator+(const AffineFunctional& a, const AffineFunctional& b) {
  AffineFunctional r = a;
  for (std::size_t i = 0; i < r.u.size(); ++i) r.u[i] += b.u[i];
  r.c += b.c;
  return r;
}

AffineFunctional operator-(const AffineFunctional& a, const AffineFunctional& b) { return a + (-b); }

AffineFunctional operator*(const Rational& s, const AffineFunctional& a) {
  AffineFunctional r = a;
  for (auto& ui : r.u) ui *= s;
  r.c *= s;
  return r;
}

std::string AffineFunctional::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0) continue;
    if (!first) os << (u[i] > 0 ? " + " : " - ");
    else if (u[i] < 0) os << "-";
    Rational a = abs(u[i]);
    if (a != 1) os << a.get_str() << "*";
    os << "x" << (i + 1);
    first = false;
  }
  if (first) return c.get_str();
  if (c != 0) os << (c > 0 ? " + " : " - ") << Rational(abs(c)).get_str();
  return os.str();
}

}  // namespace wkstab
