#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "har/dataset.hpp"
#include "har/matrix.hpp"

namespace har {

// Linear-chain CRF. Features: per-step label/sensor indicators (L x N),
// a label bias (L), and label-pair transitions (L x L). All weights live
// in one flat vector, ordered trans | emit | bias.
class CrfModel {
 public:
  CrfModel() = default;
  CrfModel(size_t num_classes, size_t num_sensors);
  CrfModel(size_t num_classes, size_t num_sensors, std::vector<double> flat);

  size_t classes() const { return classes_; }
  size_t sensors() const { return sensors_; }
  std::vector<double>& flat() { return flat_; }
  const std::vector<double>& flat() const { return flat_; }
  size_t size() const { return flat_.size(); }

  double trans(size_t i, size_t j) const { return flat_[i * classes_ + j]; }
  double& trans(size_t i, size_t j) { return flat_[i * classes_ + j]; }
  double emit(size_t l, size_t s) const { return flat_[classes_ * classes_ + l * sensors_ + s]; }
  double& emit(size_t l, size_t s) { return flat_[classes_ * classes_ + l * sensors_ + s]; }
  double bias(size_t l) const { return flat_[classes_ * (classes_ + sensors_) + l]; }
  double& bias(size_t l) { return flat_[classes_ * (classes_ + sensors_) + l]; }

  static size_t flat_size(size_t classes, size_t sensors) {
    return classes * classes + classes * sensors + classes;
  }

 private:
  size_t classes_ = 0;
  size_t sensors_ = 0;
  std::vector<double> flat_;
};

struct CrfLoglik {
  double loglik = 0.0;
  std::vector<double> grad;  // d loglik / d weights, same layout as the model
};

// log P(y | X) by the log-space forward pass; gradient = empirical minus
// expected feature counts via forward-backward.
CrfLoglik crf_loglik_grad(const CrfModel& model, const FeatureWindow& X,
                          std::span<const int> y);
CrfLoglik crf_loglik_grad(const CrfModel& model, const DayGrid& day);

struct CrfTrainConfig {
  double learning_rate = 0.01;
  size_t epochs = 100;
  double l2 = 1e-4;  // lambda in loglik - lambda*||w||^2
  uint64_t seed = 0; // weights start at zero; kept for interface symmetry
};

struct CrfTrained {
  CrfModel model;
  std::vector<double> objective_trace;  // regularized objective per epoch
};

// Maximizes sum of day logliks minus the L2 penalty with full-dataset
// Adam steps, one per epoch. The objective is convex; weights start at 0.
CrfTrained crf_train(const std::vector<const DayGrid*>& days, size_t num_classes,
                     const CrfTrainConfig& cfg = {});
CrfTrained crf_train(const std::vector<DayGrid>& days, size_t num_classes,
                     const CrfTrainConfig& cfg = {});

// Viterbi over the CRF potentials; ties resolve to the lexicographically
// smallest sequence.
std::vector<int> crf_predict(const CrfModel& model, const FeatureWindow& X);
std::vector<int> crf_predict(const CrfModel& model, const DayGrid& day);

}  // namespace har
