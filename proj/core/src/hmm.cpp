#include "har/hmm.hpp"

#include <cmath>

#include "har/chain.hpp"
#include "har/error.hpp"
#include "har/nb.hpp"

namespace har {

HmmModel hmm_train(const std::vector<const DayGrid*>& days, size_t num_classes,
                   double alpha) {
  if (days.empty()) throw InputError("hmm_train: empty training set");
  const double aL = alpha * static_cast<double>(num_classes);

  std::vector<double> start_count(num_classes, 0.0);
  Matrix bigram(num_classes, num_classes);
  std::vector<double> from_count(num_classes, 0.0);
  for (const DayGrid* d : days) {
    start_count[d->labels[0]] += 1.0;
    for (int t = 1; t < kMinutesPerDay; ++t) {
      bigram(d->labels[t - 1], d->labels[t]) += 1.0;
      from_count[d->labels[t - 1]] += 1.0;
    }
  }

  HmmModel model;
  model.pi.assign(num_classes, 0.0);
  for (size_t l = 0; l < num_classes; ++l)
    model.pi[l] = (start_count[l] + alpha) / (static_cast<double>(days.size()) + aL);
  model.trans = Matrix(num_classes, num_classes);
  for (size_t i = 0; i < num_classes; ++i)
    for (size_t j = 0; j < num_classes; ++j)
      model.trans(i, j) = (bigram(i, j) + alpha) / (from_count[i] + aL);
  model.theta = bernoulli_emissions(days, num_classes, alpha);
  return model;
}

HmmModel hmm_train(const std::vector<DayGrid>& days, size_t num_classes, double alpha) {
  std::vector<const DayGrid*> ptrs;
  for (const DayGrid& d : days) ptrs.push_back(&d);
  return hmm_train(ptrs, num_classes, alpha);
}

namespace {

// node(t,l) = log P(x_t | l); init[l] = log pi[l]; trans in log space
void hmm_potentials(const HmmModel& model, const FeatureWindow& X, Matrix& node,
                    Matrix& log_trans, std::vector<double>& init) {
  const size_t L = model.pi.size();
  if (X.sensors != model.theta.cols()) throw Error("hmm: sensor count mismatch");
  Matrix lt(L, model.theta.cols()), l1t(L, model.theta.cols());
  for (size_t l = 0; l < L; ++l)
    for (size_t s = 0; s < model.theta.cols(); ++s) {
      lt(l, s) = std::log(model.theta(l, s));
      l1t(l, s) = std::log1p(-model.theta(l, s));
    }
  node = Matrix(X.steps, L);
  for (size_t t = 0; t < X.steps; ++t)
    for (size_t l = 0; l < L; ++l)
      node(t, l) = bernoulli_log_prob(lt, l1t, l, X.slice(t));
  log_trans = Matrix(L, L);
  for (size_t i = 0; i < L; ++i)
    for (size_t j = 0; j < L; ++j) log_trans(i, j) = std::log(model.trans(i, j));
  init.assign(L, 0.0);
  for (size_t l = 0; l < L; ++l) init[l] = std::log(model.pi[l]);
}

}  // namespace

std::vector<int> hmm_viterbi(const HmmModel& model, const FeatureWindow& X) {
  Matrix node, log_trans;
  std::vector<double> init;
  hmm_potentials(model, X, node, log_trans, init);
  return chain_viterbi(node, log_trans, init);
}

std::vector<int> hmm_viterbi(const HmmModel& model, const DayGrid& day) {
  return hmm_viterbi(model, window_of(day));
}

double hmm_log_likelihood(const HmmModel& model, const FeatureWindow& X) {
  Matrix node, log_trans;
  std::vector<double> init;
  hmm_potentials(model, X, node, log_trans, init);
  return chain_log_forward(node, log_trans, init);
}

}  // namespace har
