#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "har/error.hpp"

namespace har {

// Logistic function, evaluated without large exp() arguments so finite
// input never produces NaN.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double tanh_act(double x) { return std::tanh(x); }

inline void sigmoid_inplace(std::span<double> v) {
  for (double& x : v) x = sigmoid(x);
}

inline void tanh_inplace(std::span<double> v) {
  for (double& x : v) x = std::tanh(x);
}

struct SoftmaxXent {
  std::vector<double> probs;
  double loss = 0.0;
  std::vector<double> dlogits;  // probs - onehot(target)
};

// Softmax + cross-entropy against one target class, max-subtracted for
// stability. loss = -ln probs[target].
inline SoftmaxXent softmax_xent(std::span<const double> logits, size_t target) {
  if (logits.empty()) throw Error("softmax_xent: empty logits");
  if (target >= logits.size())
    throw Error("softmax_xent: target " + std::to_string(target) +
                " out of range for " + std::to_string(logits.size()) + " classes");
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  SoftmaxXent out;
  out.probs.resize(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out.probs[i] = std::exp(logits[i] - mx);
    sum += out.probs[i];
  }
  for (double& p : out.probs) p /= sum;
  // -ln p[target] via the shifted logit so saturated cases stay finite.
  out.loss = -(logits[target] - mx - std::log(sum));
  out.dlogits = out.probs;
  out.dlogits[target] -= 1.0;
  return out;
}

}  // namespace har
