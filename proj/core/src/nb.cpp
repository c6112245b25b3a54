#include "har/nb.hpp"

#include <cmath>

#include "har/error.hpp"

namespace har {

namespace {

void check_training_input(const std::vector<const DayGrid*>& days, size_t num_classes) {
  if (days.empty()) throw InputError("baseline training: empty training set");
  if (num_classes < 1) throw InputError("baseline training: need at least one class");
  const size_t N = days[0]->n_sensors;
  for (const DayGrid* d : days) {
    if (d->n_sensors != N)
      throw InputError("baseline training: days disagree on sensor count");
    for (int lbl : d->labels)
      if (lbl < 0 || static_cast<size_t>(lbl) >= num_classes)
        throw InputError("baseline training: label " + std::to_string(lbl) +
                         " out of range");
  }
}

}  // namespace

Matrix bernoulli_emissions(const std::vector<const DayGrid*>& days, size_t num_classes,
                           double alpha) {
  const size_t N = days[0]->n_sensors;
  std::vector<double> class_count(num_classes, 0.0);
  Matrix on_count(num_classes, N);
  for (const DayGrid* d : days) {
    for (int t = 0; t < kMinutesPerDay; ++t) {
      const int l = d->labels[t];
      class_count[l] += 1.0;
      const uint8_t* x = d->slice(t);
      for (size_t s = 0; s < N; ++s)
        if (x[s]) on_count(l, s) += 1.0;
    }
  }
  Matrix theta(num_classes, N);
  for (size_t l = 0; l < num_classes; ++l)
    for (size_t s = 0; s < N; ++s)
      theta(l, s) = (on_count(l, s) + alpha) / (class_count[l] + 2.0 * alpha);
  return theta;
}

NbModel nb_train(const std::vector<const DayGrid*>& days, size_t num_classes,
                 double alpha) {
  check_training_input(days, num_classes);
  NbModel model;
  model.prior.assign(num_classes, 0.0);
  double total = 0.0;
  for (const DayGrid* d : days)
    for (int t = 0; t < kMinutesPerDay; ++t) {
      model.prior[d->labels[t]] += 1.0;
      total += 1.0;
    }
  for (double& p : model.prior)
    p = (p + alpha) / (total + alpha * static_cast<double>(num_classes));
  model.theta = bernoulli_emissions(days, num_classes, alpha);
  return model;
}

NbModel nb_train(const std::vector<DayGrid>& days, size_t num_classes, double alpha) {
  std::vector<const DayGrid*> ptrs;
  for (const DayGrid& d : days) ptrs.push_back(&d);
  return nb_train(ptrs, num_classes, alpha);
}

double bernoulli_log_prob(const Matrix& log_theta, const Matrix& log_1m_theta, size_t l,
                          const uint8_t* x) {
  double s = 0.0;
  for (size_t n = 0; n < log_theta.cols(); ++n)
    s += x[n] ? log_theta(l, n) : log_1m_theta(l, n);
  return s;
}

namespace {

void log_tables(const Matrix& theta, Matrix& log_theta, Matrix& log_1m_theta) {
  log_theta = Matrix(theta.rows(), theta.cols());
  log_1m_theta = Matrix(theta.rows(), theta.cols());
  for (size_t l = 0; l < theta.rows(); ++l)
    for (size_t s = 0; s < theta.cols(); ++s) {
      log_theta(l, s) = std::log(theta(l, s));
      log_1m_theta(l, s) = std::log1p(-theta(l, s));
    }
}

}  // namespace

int nb_predict(const NbModel& model, const uint8_t* x, size_t n_sensors) {
  if (n_sensors != model.theta.cols())
    throw Error("nb_predict: sensor count mismatch");
  Matrix lt, l1t;
  log_tables(model.theta, lt, l1t);
  size_t best = 0;
  double best_score = 0.0;
  for (size_t l = 0; l < model.prior.size(); ++l) {
    const double score = std::log(model.prior[l]) + bernoulli_log_prob(lt, l1t, l, x);
    if (l == 0 || score > best_score) {
      best = l;
      best_score = score;
    }
  }
  return static_cast<int>(best);
}

std::vector<int> nb_predict_day(const NbModel& model, const DayGrid& day) {
  if (day.n_sensors != model.theta.cols())
    throw Error("nb_predict_day: sensor count mismatch");
  Matrix lt, l1t;
  log_tables(model.theta, lt, l1t);
  std::vector<double> log_prior(model.prior.size());
  for (size_t l = 0; l < model.prior.size(); ++l) log_prior[l] = std::log(model.prior[l]);
  std::vector<int> out(kMinutesPerDay);
  for (int t = 0; t < kMinutesPerDay; ++t) {
    const uint8_t* x = day.slice(t);
    size_t best = 0;
    double best_score = 0.0;
    for (size_t l = 0; l < model.prior.size(); ++l) {
      const double score = log_prior[l] + bernoulli_log_prob(lt, l1t, l, x);
      if (l == 0 || score > best_score) {
        best = l;
        best_score = score;
      }
    }
    out[t] = static_cast<int>(best);
  }
  return out;
}

}  // namespace har
