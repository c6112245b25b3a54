#include "har/chain.hpp"

#include <algorithm>

#include "har/error.hpp"
#include "har/logsumexp.hpp"

namespace har {

namespace {

void check_shapes(const Matrix& node, const Matrix& trans, const std::vector<double>& init) {
  const size_t L = node.cols();
  if (node.rows() == 0 || L == 0) throw Error("chain: empty node potentials");
  if (trans.rows() != L || trans.cols() != L || init.size() != L)
    throw Error("chain: inconsistent label counts");
}

}  // namespace

std::vector<int> chain_viterbi(const Matrix& node, const Matrix& trans,
                               const std::vector<double>& init) {
  check_shapes(node, trans, init);
  const size_t T = node.rows(), L = node.cols();

  // value[t][j]: best score of a suffix starting at t in state j
  Matrix value(T, L);
  for (size_t j = 0; j < L; ++j) value(T - 1, j) = node(T - 1, j);
  for (size_t t = T - 1; t-- > 0;) {
    for (size_t j = 0; j < L; ++j) {
      double best = trans(j, 0) + value(t + 1, 0);
      for (size_t k = 1; k < L; ++k)
        best = std::max(best, trans(j, k) + value(t + 1, k));
      value(t, j) = node(t, j) + best;
    }
  }

  // greedy forward pass; first argmax gives the lexicographically
  // smallest optimal sequence
  std::vector<int> path(T);
  size_t prev = 0;
  {
    double best = init[0] + value(0, 0);
    for (size_t j = 1; j < L; ++j) {
      const double s = init[j] + value(0, j);
      if (s > best) {
        best = s;
        prev = j;
      }
    }
  }
  path[0] = static_cast<int>(prev);
  for (size_t t = 1; t < T; ++t) {
    size_t pick = 0;
    double best = trans(prev, 0) + value(t, 0);
    for (size_t j = 1; j < L; ++j) {
      const double s = trans(prev, j) + value(t, j);
      if (s > best) {
        best = s;
        pick = j;
      }
    }
    path[t] = static_cast<int>(pick);
    prev = pick;
  }
  return path;
}

double chain_log_forward(const Matrix& node, const Matrix& trans,
                         const std::vector<double>& init) {
  check_shapes(node, trans, init);
  const size_t T = node.rows(), L = node.cols();
  std::vector<double> alpha(L), next(L), terms(L);
  for (size_t j = 0; j < L; ++j) alpha[j] = init[j] + node(0, j);
  for (size_t t = 1; t < T; ++t) {
    for (size_t j = 0; j < L; ++j) {
      for (size_t i = 0; i < L; ++i) terms[i] = alpha[i] + trans(i, j);
      next[j] = node(t, j) + log_sum_exp(terms);
    }
    alpha.swap(next);
  }
  return log_sum_exp(alpha);
}

}  // namespace har
