#pragma once

#include <cstdint>
#include <vector>

#include "har/dataset.hpp"
#include "har/matrix.hpp"

namespace har {

// Bernoulli Naive Bayes over the binary sensor vector of one slice.
struct NbModel {
  std::vector<double> prior;  // length L, sums to 1
  Matrix theta;               // L x N, P(sensor s active | class l), in (0,1)
};

// Add-alpha counting:
//   prior[l] = (count_l + a) / (total + a L)
//   theta[l][s] = (count of x_s=1 under l + a) / (count_l + 2a)
NbModel nb_train(const std::vector<const DayGrid*>& days, size_t num_classes,
                 double alpha = 0.01);
NbModel nb_train(const std::vector<DayGrid>& days, size_t num_classes,
                 double alpha = 0.01);

// Shared with the HMM's emission model.
Matrix bernoulli_emissions(const std::vector<const DayGrid*>& days, size_t num_classes,
                           double alpha);

// log P(x | l) for a binary slice under factorized Bernoulli emissions,
// given precomputed log(theta) and log(1-theta).
double bernoulli_log_prob(const Matrix& log_theta, const Matrix& log_1m_theta, size_t l,
                          const uint8_t* x);

// argmax_l log prior[l] + log P(x|l); ties break to the lowest index.
int nb_predict(const NbModel& model, const uint8_t* x, size_t n_sensors);

std::vector<int> nb_predict_day(const NbModel& model, const DayGrid& day);

}  // namespace har
