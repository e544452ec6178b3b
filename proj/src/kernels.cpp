#include "wkstab/kernels.hpp"

#include <cmath>

namespace wkstab {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

namespace kernels {

double compensated_sum(const std::vector<double>& values) {
  double sum = 0, comp = 0;
  for (double v : values) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace kernels
}  // namespace wkstab
