#pragma once

#include <vector>

#include "har/dataset.hpp"
#include "har/matrix.hpp"

namespace har {

// Discrete-state HMM with factorized Bernoulli emissions per sensor.
struct HmmModel {
  std::vector<double> pi;  // initial distribution, length L
  Matrix trans;            // L x L, rows sum to 1
  Matrix theta;            // L x N Bernoulli emissions
};

// Supervised maximum likelihood with add-alpha smoothing: pi from
// day-initial labels, transitions from adjacent-slice bigrams within each
// day, emissions counted as in nb_train.
HmmModel hmm_train(const std::vector<const DayGrid*>& days, size_t num_classes,
                   double alpha = 0.01);
HmmModel hmm_train(const std::vector<DayGrid>& days, size_t num_classes,
                   double alpha = 0.01);

// Exact MAP sequence in log space; ties resolve to the lexicographically
// smallest sequence.
std::vector<int> hmm_viterbi(const HmmModel& model, const FeatureWindow& X);
std::vector<int> hmm_viterbi(const HmmModel& model, const DayGrid& day);

// log P(X) summed over all label sequences (log-space forward pass).
double hmm_log_likelihood(const HmmModel& model, const FeatureWindow& X);

}  // namespace har
