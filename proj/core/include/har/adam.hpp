#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "har/error.hpp"

namespace har {

// First/second moment state for Adam. beta1/beta2/epsilon default to the
// usual 0.9 / 0.999 / 1e-8.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  explicit AdamState(size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam update, in place:
//   m = b1*m + (1-b1)*g;  v = b2*v + (1-b2)*g^2;  t += 1
//   p -= lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
inline void adam_step(std::span<double> params, std::span<const double> grads,
                      AdamState& state, double lr) {
  if (params.size() != grads.size() || params.size() != state.m.size() ||
      params.size() != state.v.size()) {
    throw Error("adam_step: length mismatch, params=" + std::to_string(params.size()) +
                " grads=" + std::to_string(grads.size()) +
                " state=" + std::to_string(state.m.size()));
  }
  state.t += 1;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + state.epsilon);
  }
}

}  // namespace har
