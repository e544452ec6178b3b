#include "wkstab/grid.hpp"

#include <cmath>
#include <set>

#include "wkstab/error.hpp"

namespace wkstab {

namespace {

// Calls f(a) for every composition a_0 + ... + a_k = m, a_i >= 0.
template <class F>
void compositions(int parts, int m, std::vector<int>& a, int pos, F&& f) {
  if (pos == parts - 1) {
    a[pos] = m;
    f(a);
    return;
  }
  for (int v = m; v >= 0; --v) {
    a[pos] = v;
    compositions(parts, m - v, a, pos + 1, f);
  }
}

}  // namespace

SampleGrid barycentric_grid(const std::vector<Simplex>& simplices, int depth) {
  if (depth < 0 || depth > 12) throw Error("input", "grid depth must lie in [0, 12]");
  SampleGrid grid;
  grid.depth = depth;
  const int m = 1 << depth;
  std::set<RVec> seen;
  for (const auto& s : simplices) {
    const int parts = static_cast<int>(s.points.size());
    const std::size_t n = s.points.front().size();
    for (int i = 0; i < parts; ++i)
      for (int j = i + 1; j < parts; ++j) {
        double len2 = 0;
        for (std::size_t k = 0; k < n; ++k) {
          double d = Rational(s.points[i][k] - s.points[j][k]).get_d();
          len2 += d * d;
        }
        grid.mesh = std::max(grid.mesh, std::sqrt(len2) / m);
      }
    std::vector<int> a(parts);
    compositions(parts, m, a, 0, [&](const std::vector<int>& c) {
      RVec x(n, Rational(0));
      for (int i = 0; i < parts; ++i) {
        if (c[i] == 0) continue;
        for (std::size_t k = 0; k < n; ++k) x[k] += c[i] * s.points[i][k];
      }
      for (auto& xk : x) xk /= m;
      if (seen.insert(x).second) {
        grid.points.push_back(to_double(x));
        grid.exact.push_back(std::move(x));
      }
    });
  }
  return grid;
}

}  // namespace wkstab
