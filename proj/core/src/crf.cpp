#include "har/crf.hpp"

#include <cmath>

#include "har/adam.hpp"
#include "har/chain.hpp"
#include "har/error.hpp"
#include "har/logsumexp.hpp"

namespace har {

CrfModel::CrfModel(size_t num_classes, size_t num_sensors)
    : classes_(num_classes), sensors_(num_sensors),
      flat_(flat_size(num_classes, num_sensors), 0.0) {}

CrfModel::CrfModel(size_t num_classes, size_t num_sensors, std::vector<double> flat)
    : classes_(num_classes), sensors_(num_sensors), flat_(std::move(flat)) {
  if (flat_.size() != flat_size(num_classes, num_sensors))
    throw Error("CrfModel: flat vector size mismatch");
}

namespace {

// node(t,l) = bias[l] + sum of emit[l][s] over active sensors
Matrix node_scores(const CrfModel& m, const FeatureWindow& X) {
  Matrix node(X.steps, m.classes());
  for (size_t t = 0; t < X.steps; ++t) {
    const uint8_t* x = X.slice(t);
    for (size_t l = 0; l < m.classes(); ++l) {
      double s = m.bias(l);
      for (size_t n = 0; n < m.sensors(); ++n)
        if (x[n]) s += m.emit(l, n);
      node(t, l) = s;
    }
  }
  return node;
}

Matrix trans_matrix(const CrfModel& m) {
  Matrix tr(m.classes(), m.classes());
  for (size_t i = 0; i < m.classes(); ++i)
    for (size_t j = 0; j < m.classes(); ++j) tr(i, j) = m.trans(i, j);
  return tr;
}

}  // namespace

CrfLoglik crf_loglik_grad(const CrfModel& model, const FeatureWindow& X,
                          std::span<const int> y) {
  const size_t L = model.classes(), T = X.steps;
  if (y.size() != T) throw Error("crf_loglik_grad: feature/label length mismatch");
  if (X.sensors != model.sensors()) throw Error("crf_loglik_grad: sensor count mismatch");

  const Matrix node = node_scores(model, X);

  // log-space forward and backward tables
  Matrix alpha(T, L), beta(T, L);
  std::vector<double> terms(L);
  for (size_t l = 0; l < L; ++l) alpha(0, l) = node(0, l);
  for (size_t t = 1; t < T; ++t)
    for (size_t j = 0; j < L; ++j) {
      for (size_t i = 0; i < L; ++i) terms[i] = alpha(t - 1, i) + model.trans(i, j);
      alpha(t, j) = node(t, j) + log_sum_exp(terms);
    }
  for (size_t l = 0; l < L; ++l) beta(T - 1, l) = 0.0;
  for (size_t t = T - 1; t-- > 0;)
    for (size_t i = 0; i < L; ++i) {
      for (size_t j = 0; j < L; ++j)
        terms[j] = model.trans(i, j) + node(t + 1, j) + beta(t + 1, j);
      beta(t, i) = log_sum_exp(terms);
    }
  std::vector<double> last(L);
  for (size_t l = 0; l < L; ++l) last[l] = alpha(T - 1, l);
  const double log_z = log_sum_exp(last);
  if (!std::isfinite(log_z))
    throw NumericError("crf_loglik_grad: non-finite partition function");

  CrfLoglik out;
  out.grad.assign(model.size(), 0.0);
  CrfModel grad(L, model.sensors(), std::move(out.grad));

  // score of the labeled path
  double path = node(0, y[0]);
  for (size_t t = 1; t < T; ++t) path += model.trans(y[t - 1], y[t]) + node(t, y[t]);
  out.loglik = path - log_z;

  // empirical minus expected feature counts
  for (size_t t = 0; t < T; ++t) {
    const uint8_t* x = X.slice(t);
    const size_t yt = static_cast<size_t>(y[t]);
    grad.bias(yt) += 1.0;
    for (size_t n = 0; n < model.sensors(); ++n)
      if (x[n]) grad.emit(yt, n) += 1.0;
    for (size_t l = 0; l < L; ++l) {
      const double marginal = std::exp(alpha(t, l) + beta(t, l) - log_z);
      grad.bias(l) -= marginal;
      for (size_t n = 0; n < model.sensors(); ++n)
        if (x[n]) grad.emit(l, n) -= marginal;
    }
  }
  for (size_t t = 1; t < T; ++t) {
    grad.trans(y[t - 1], y[t]) += 1.0;
    for (size_t i = 0; i < L; ++i)
      for (size_t j = 0; j < L; ++j)
        grad.trans(i, j) -= std::exp(alpha(t - 1, i) + model.trans(i, j) + node(t, j) +
                                     beta(t, j) - log_z);
  }

  out.grad = std::move(grad.flat());
  return out;
}

CrfLoglik crf_loglik_grad(const CrfModel& model, const DayGrid& day) {
  return crf_loglik_grad(model, window_of(day), day.labels);
}

CrfTrained crf_train(const std::vector<const DayGrid*>& days, size_t num_classes,
                     const CrfTrainConfig& cfg) {
  if (days.empty()) throw InputError("crf_train: empty training set");
  const size_t N = days[0]->n_sensors;
  for (const DayGrid* d : days)
    if (d->n_sensors != N) throw InputError("crf_train: days disagree on sensor count");

  CrfTrained out{CrfModel(num_classes, N), {}};
  AdamState adam(out.model.size());
  std::vector<double> step_grad(out.model.size());

  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double objective = 0.0;
    std::fill(step_grad.begin(), step_grad.end(), 0.0);
    for (const DayGrid* d : days) {
      CrfLoglik ll = crf_loglik_grad(out.model, *d);
      objective += ll.loglik;
      for (size_t k = 0; k < step_grad.size(); ++k) step_grad[k] += ll.grad[k];
    }
    // Adam minimizes: negate the regularized ascent direction
    const std::vector<double>& w = out.model.flat();
    for (size_t k = 0; k < step_grad.size(); ++k) {
      objective -= cfg.l2 * w[k] * w[k];
      step_grad[k] = -(step_grad[k] - 2.0 * cfg.l2 * w[k]);
    }
    adam_step(out.model.flat(), step_grad, adam, cfg.learning_rate);
    out.objective_trace.push_back(objective);
  }
  return out;
}

CrfTrained crf_train(const std::vector<DayGrid>& days, size_t num_classes,
                     const CrfTrainConfig& cfg) {
  std::vector<const DayGrid*> ptrs;
  for (const DayGrid& d : days) ptrs.push_back(&d);
  return crf_train(ptrs, num_classes, cfg);
}

std::vector<int> crf_predict(const CrfModel& model, const FeatureWindow& X) {
  if (X.sensors != model.sensors()) throw Error("crf_predict: sensor count mismatch");
  const Matrix node = node_scores(model, X);
  const Matrix tr = trans_matrix(model);
  const std::vector<double> init(model.classes(), 0.0);
  return chain_viterbi(node, tr, init);
}

std::vector<int> crf_predict(const CrfModel& model, const DayGrid& day) {
  return crf_predict(model, window_of(day));
}

}  // namespace har
