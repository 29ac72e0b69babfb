#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace satqkd::detail {

struct Integral {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
  int status = 0;  // GSL status code, 0 on success
};

// Adaptive Gauss-Kronrod quadrature over [points.front(), points.back()] with
// interior breakpoints. Points must be sorted ascending; duplicates are
// dropped. Never throws; callers inspect `status`.
Integral integrate(const std::function<double(double)>& f, std::vector<double> points,
                   double rel_tolerance, std::size_t max_intervals = 2000);

}  // namespace satqkd::detail
