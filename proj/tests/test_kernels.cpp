#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wkstab/kernels.hpp"

using namespace wkstab;

TEST_CASE("map keeps index order on both paths") {
  auto f = [](std::size_t i) { return std::sin(0.37 * static_cast<double>(i)) * 1e3; };
  auto a = kernels::map<double>(5000, f, Exec::serial);
  auto b = kernels::map<double>(5000, f, Exec::parallel);
  CHECK(a == b);
  CHECK(a[17] == f(17));
}

TEST_CASE("map rethrows the lowest failing index") {
  auto f = [](std::size_t i) -> int {
    if (i == 700 || i == 300) throw std::runtime_error(std::to_string(i));
    return static_cast<int>(i);
  };
  for (Exec e : {Exec::serial, Exec::parallel}) {
    try {
      kernels::map<int>(1000, f, e);
      FAIL("expected an exception");
    } catch (const std::runtime_error& err) {
      CHECK(std::string(err.what()) == "300");
    }
  }
}

TEST_CASE("scan_min resolves ties to the lowest index") {
  auto f = [](std::size_t i) { return (i % 7 == 3) ? -1.0 : static_cast<double>(i); };
  for (Exec e : {Exec::serial, Exec::parallel}) {
    auto m = kernels::scan_min(100, f, e);
    CHECK(m.value == -1.0);
    CHECK(m.index == 3);
  }
  auto empty = kernels::scan_min(0, f, Exec::parallel);
  CHECK(std::isinf(empty.value));
}

TEST_CASE("compensated sum") {
  std::vector<double> v = {1.0, 1e100, 1.0, -1e100};
  CHECK(kernels::compensated_sum(v) == 2.0);
  std::vector<double> tenths(10, 0.1);
  CHECK(kernels::compensated_sum(tenths) == 1.0);
  CHECK(kernels::compensated_sum({}) == 0.0);
}

TEST_CASE("thread count control") {
  const int before = max_threads();
  set_threads(2);
  CHECK(max_threads() == 2);
  set_threads(before);
  CHECK(max_threads() == before);
}
