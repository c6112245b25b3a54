#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "har/error.hpp"

namespace har {

// Central-difference check of an analytic gradient. For each coordinate,
// numeric = (f(p+h) - f(p-h)) / 2h and the reported error is
//   |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
// Returns the max over coordinates.
inline double grad_check(const std::function<double(std::span<const double>)>& f,
                         std::span<const double> params,
                         std::span<const double> analytic, double h) {
  if (params.size() != analytic.size())
    throw Error("grad_check: analytic gradient length mismatch");
  std::vector<double> p(params.begin(), params.end());
  double worst = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double saved = p[i];
    p[i] = saved + h;
    const double fp = f(p);
    p[i] = saved - h;
    const double fm = f(p);
    p[i] = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NumericError("grad_check: non-finite loss at coordinate " + std::to_string(i));
    const double numeric = (fp - fm) / (2.0 * h);
    const double denom = std::max({std::fabs(analytic[i]), std::fabs(numeric), 1e-8});
    worst = std::max(worst, std::fabs(analytic[i] - numeric) / denom);
  }
  return worst;
}

}  // namespace har
