#include "wkstab/rational.hpp"

#include <cctype>
#include <cmath>
#include <utility>

#include "wkstab/error.hpp"

namespace wkstab {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0) return Rational(p);
  return Rational(mpz_class(1), p);
}

[[noreturn]] void bad(std::string_view text) {
  throw Error("parse", "malformed rational '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad(text);

  bool negative = false;
  std::string_view body = s;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad(text);
    mpz_class n{std::string(num), 10}, d{std::string(den), 10};
    if (d == 0) throw Error("parse", "zero denominator in '" + std::string(text) + "'");
    result = Rational(n, d);
    result.canonicalize();
  } else {
    std::string_view mantissa = body;
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = body.substr(0, e);
      auto exp_text = body.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6) bad(text);
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    long frac_digits = 0;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      auto ip = mantissa.substr(0, dot);
      auto fp = mantissa.substr(dot + 1);
      if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
          (!fp.empty() && !all_digits(fp)))
        bad(text);
      digits = std::string(ip) + std::string(fp);
      frac_digits = static_cast<long>(fp.size());
    } else {
      if (!all_digits(mantissa)) bad(text);
      digits = std::string(mantissa);
    }
    result = Rational(mpz_class(digits, 10)) * pow10(exponent - frac_digits);
  }
  return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw Error("DomainError", "non-finite value cannot be made exact");
  return Rational(x);
}

std::vector<double> to_double(const RVec& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

Rational dot(const RVec& a, const RVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational determinant(RMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

int rank(RMatrix a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t pivot = r;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][col] == 0) continue;
      Rational f = a[i][col] / a[r][col];
      for (std::size_t c = col; c < cols; ++c) a[i][c] -= f * a[r][c];
    }
    ++r;
  }
  return static_cast<int>(r);
}

std::optional<RVec> solve(RMatrix a, RVec b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  RVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

std::optional<RVec> kernel_vector(const RMatrix& rows, int n) {
  // Reduced row echelon form, then read off the single free column.
  RMatrix a = rows;
  const std::size_t m = a.size();
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    std::size_t pivot = r;
    while (pivot < m && a[pivot][col] == 0) ++pivot;
    if (pivot == m) continue;
    std::swap(a[pivot], a[r]);
    Rational inv = 1 / a[r][col];
    for (int c = 0; c < n; ++c) a[r][c] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (int c = 0; c < n; ++c) a[i][c] -= f * a[r][c];
    }
    pivot_col.push_back(col);
    ++r;
  }
  if (static_cast<int>(pivot_col.size()) != n - 1) return std::nullopt;
  int free_col = 0;
  for (int c : pivot_col) {
    if (c != free_col) break;
    ++free_col;
  }
  RVec k(n, Rational(0));
  k[free_col] = 1;
  for (std::size_t i = 0; i < pivot_col.size(); ++i) k[pivot_col[i]] = -a[i][free_col];
  return k;
}

int affine_dimension(const std::vector<RVec>& points) {
  if (points.empty()) return -1;
  RMatrix diffs;
  diffs.reserve(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) {
    RVec d(points[i].size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = points[i][k] - points[0][k];
    diffs.push_back(std::move(d));
  }
  return rank(std::move(diffs));
}

Rational factorial(int k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
  return Rational(f);
}

}  // namespace wkstab
