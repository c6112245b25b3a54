#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace har {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double mx = a > b ? a : b;
  const double mn = a > b ? b : a;
  return mx + std::log1p(std::exp(mn - mx));
}

inline double log_sum_exp(std::span<const double> vals) {
  double mx = kNegInf;
  for (double v : vals) mx = std::max(mx, v);
  if (mx == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : vals) sum += std::exp(v - mx);
  return mx + std::log(sum);
}

}  // namespace har
