#pragma once

#include <vector>

#include "har/matrix.hpp"

namespace har {

// Log-space dynamic programming over a linear chain of labels. A sequence
// y scores init[y0] + node(0,y0) + sum_{t>=1} trans(y_{t-1},y_t) + node(t,y_t).
// HMM and CRF both decode through these with their own potentials.

// MAP sequence; among equal-scoring optima returns the lexicographically
// smallest (backward values, then greedy forward reconstruction).
std::vector<int> chain_viterbi(const Matrix& node, const Matrix& trans,
                               const std::vector<double>& init);

// log sum over all label sequences of exp(score), computed stably.
double chain_log_forward(const Matrix& node, const Matrix& trans,
                         const std::vector<double>& init);

}  // namespace har
