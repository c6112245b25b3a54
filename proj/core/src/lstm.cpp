#include "har/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "har/adam.hpp"
#include "har/error.hpp"
#include "har/nonlin.hpp"
#include "har/rng.hpp"

namespace har {

size_t LstmParams::flat_size(const LstmDims& d) {
  return 4 * d.hidden * d.inputs + 4 * d.hidden * d.hidden + 3 * d.peephole_size() +
         4 * d.hidden + d.classes * d.hidden + d.classes;
}

LstmParams::LstmParams(const LstmDims& dims) : LstmParams(dims, {}) {
  flat_.assign(flat_size(dims), 0.0);
}

LstmParams::LstmParams(const LstmDims& dims, std::vector<double> flat)
    : dims_(dims), flat_(std::move(flat)) {
  wx_off_ = 0;
  wh_off_ = wx_off_ + 4 * dims.hidden * dims.inputs;
  wc_off_ = wh_off_ + 4 * dims.hidden * dims.hidden;
  b_off_ = wc_off_ + 3 * dims.peephole_size();
  wy_off_ = b_off_ + 4 * dims.hidden;
  by_off_ = wy_off_ + dims.classes * dims.hidden;
  if (!flat_.empty() && flat_.size() != flat_size(dims))
    throw Error("LstmParams: flat vector has " + std::to_string(flat_.size()) +
                " entries, layout needs " + std::to_string(flat_size(dims)));
}

namespace {

// y[h] += sum over active inputs of W[h][n]
void add_active_cols(const double* W, size_t n_cols, const std::vector<size_t>& active,
                     double* y, size_t H) {
  for (size_t h = 0; h < H; ++h) {
    const double* row = W + h * n_cols;
    double s = 0.0;
    for (size_t n : active) s += row[n];
    y[h] += s;
  }
}

// y[h] += dot(W.row(h), v)
void add_matvec(const double* W, const double* v, size_t K, double* y, size_t H) {
  for (size_t h = 0; h < H; ++h) {
    const double* row = W + h * K;
    double s = 0.0;
    for (size_t k = 0; k < K; ++k) s += row[k] * v[k];
    y[h] += s;
  }
}

// y[k] += sum_h W[h][k] * a[h]
void add_matvec_t(const double* W, const double* a, size_t H, double* y, size_t K) {
  for (size_t h = 0; h < H; ++h) {
    const double ah = a[h];
    const double* row = W + h * K;
    for (size_t k = 0; k < K; ++k) y[k] += row[k] * ah;
  }
}

// W[h][k] += a[h] * v[k]
void add_outer(double* W, const double* a, const double* v, size_t H, size_t K) {
  for (size_t h = 0; h < H; ++h) {
    const double ah = a[h];
    double* row = W + h * K;
    for (size_t k = 0; k < K; ++k) row[k] += ah * v[k];
  }
}

void clip_global_norm(std::vector<double>& g, double max_norm) {
  double sq = 0.0;
  for (double v : g) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (double& v : g) v *= scale;
  }
}

std::vector<size_t> active_inputs(const uint8_t* x, size_t n) {
  std::vector<size_t> active;
  for (size_t i = 0; i < n; ++i)
    if (x[i]) active.push_back(i);
  return active;
}

// logits[l] = by[l] + dot(Wy.row(l), h)
void project_output(const LstmParams& p, const double* h, double* logits) {
  const size_t H = p.dims().hidden, L = p.dims().classes;
  for (size_t l = 0; l < L; ++l) {
    const double* row = p.wy() + l * H;
    double s = p.by()[l];
    for (size_t k = 0; k < H; ++k) s += row[k] * h[k];
    logits[l] = s;
  }
}

}  // namespace

void cell_forward(const uint8_t* x, const LstmState& prev, const LstmParams& p,
                  LstmState& next, StepCache* cache) {
  const LstmDims& d = p.dims();
  const size_t H = d.hidden, N = d.inputs;
  if (prev.h.size() != H || prev.c.size() != H)
    throw Error("cell_forward: state size " + std::to_string(prev.h.size()) +
                " does not match hidden size " + std::to_string(H));
  const bool vec_peep = d.peephole == PeepholeKind::Vector;

  StepCache local;
  StepCache& S = cache ? *cache : local;
  S.active = active_inputs(x, N);
  S.i.assign(H, 0.0);
  S.f.assign(H, 0.0);
  S.g.assign(H, 0.0);
  S.c.assign(H, 0.0);

  // input and forget gates read the previous cell
  for (size_t h = 0; h < H; ++h) {
    S.i[h] = p.b(kGateI)[h];
    S.f[h] = p.b(kGateF)[h];
    S.g[h] = p.b(kGateC)[h];
  }
  add_active_cols(p.wx(kGateI), N, S.active, S.i.data(), H);
  add_active_cols(p.wx(kGateF), N, S.active, S.f.data(), H);
  add_active_cols(p.wx(kGateC), N, S.active, S.g.data(), H);
  add_matvec(p.wh(kGateI), prev.h.data(), H, S.i.data(), H);
  add_matvec(p.wh(kGateF), prev.h.data(), H, S.f.data(), H);
  add_matvec(p.wh(kGateC), prev.h.data(), H, S.g.data(), H);
  if (vec_peep) {
    for (size_t h = 0; h < H; ++h) {
      S.i[h] += p.wc(kGateI)[h] * prev.c[h];
      S.f[h] += p.wc(kGateF)[h] * prev.c[h];
    }
  } else {
    add_matvec(p.wc(kGateI), prev.c.data(), H, S.i.data(), H);
    add_matvec(p.wc(kGateF), prev.c.data(), H, S.f.data(), H);
  }
  sigmoid_inplace(S.i);
  sigmoid_inplace(S.f);
  tanh_inplace(S.g);

  for (size_t h = 0; h < H; ++h) S.c[h] = S.f[h] * prev.c[h] + S.i[h] * S.g[h];

  // output gate peephole reads the new cell
  S.o.assign(H, 0.0);
  for (size_t h = 0; h < H; ++h) S.o[h] = p.b(kGateO)[h];
  add_active_cols(p.wx(kGateO), N, S.active, S.o.data(), H);
  add_matvec(p.wh(kGateO), prev.h.data(), H, S.o.data(), H);
  if (vec_peep) {
    for (size_t h = 0; h < H; ++h) S.o[h] += p.wc(kGateO)[h] * S.c[h];
  } else {
    add_matvec(p.wc(kGateO), S.c.data(), H, S.o.data(), H);
  }
  sigmoid_inplace(S.o);

  S.tanh_c.assign(H, 0.0);
  S.h.assign(H, 0.0);
  for (size_t h = 0; h < H; ++h) {
    S.tanh_c[h] = std::tanh(S.c[h]);
    S.h[h] = S.o[h] * S.tanh_c[h];
  }
  next.h = S.h;
  next.c = S.c;
}

ForwardDayResult forward_day(const FeatureWindow& X, const LstmParams& p,
                             const LstmState& initial) {
  const size_t H = p.dims().hidden, L = p.dims().classes;
  if (X.sensors != p.dims().inputs)
    throw Error("forward_day: " + std::to_string(X.sensors) + " sensors vs model " +
                std::to_string(p.dims().inputs));
  ForwardDayResult out{Matrix(X.steps, L), LstmState(H)};
  LstmState state = initial;
  for (size_t t = 0; t < X.steps; ++t) {
    cell_forward(X.slice(t), state, p, state, nullptr);
    project_output(p, state.h.data(), out.logits.row(t));
  }
  out.final_state = std::move(state);
  return out;
}

BpttResult bptt_window(const FeatureWindow& X, std::span<const int> y,
                       const LstmParams& p, const LstmState& initial) {
  const LstmDims& d = p.dims();
  const size_t H = d.hidden, N = d.inputs, L = d.classes, T = X.steps;
  if (y.size() != T)
    throw Error("bptt_window: " + std::to_string(T) + " steps vs " +
                std::to_string(y.size()) + " labels");
  const bool vec_peep = d.peephole == PeepholeKind::Vector;

  // forward with caches
  std::vector<StepCache> caches(T);
  Matrix dlogits(T, L);
  LstmState state = initial;
  double loss_sum = 0.0;
  std::vector<double> logits(L);
  for (size_t t = 0; t < T; ++t) {
    cell_forward(X.slice(t), state, p, state, &caches[t]);
    project_output(p, state.h.data(), logits.data());
    SoftmaxXent sx = softmax_xent(logits, static_cast<size_t>(y[t]));
    loss_sum += sx.loss;
    for (size_t l = 0; l < L; ++l) dlogits(t, l) = sx.dlogits[l] / static_cast<double>(T);
  }

  BpttResult out;
  out.loss = loss_sum / static_cast<double>(T);
  out.final_state = std::move(state);

  LstmParams grads(d);
  std::vector<double> dh(H), dc(H), dh_next(H, 0.0), dc_next(H, 0.0);
  std::vector<double> da_i(H), da_f(H), da_o(H), da_g(H);

  for (size_t t = T; t-- > 0;) {
    const StepCache& S = caches[t];
    const double* h_prev = t ? caches[t - 1].h.data() : initial.h.data();
    const double* c_prev = t ? caches[t - 1].c.data() : initial.c.data();
    const double* dl = dlogits.row(t);

    // output layer
    for (size_t l = 0; l < L; ++l) grads.by()[l] += dl[l];
    add_outer(grads.wy(), dl, S.h.data(), L, H);
    std::copy(dh_next.begin(), dh_next.end(), dh.begin());
    add_matvec_t(p.wy(), dl, L, dh.data(), H);

    // output gate, then cell delta (the o-peephole feeds back into c_t)
    for (size_t h = 0; h < H; ++h)
      da_o[h] = dh[h] * S.tanh_c[h] * S.o[h] * (1.0 - S.o[h]);
    for (size_t h = 0; h < H; ++h)
      dc[h] = dh[h] * S.o[h] * (1.0 - S.tanh_c[h] * S.tanh_c[h]) + dc_next[h];
    if (vec_peep) {
      for (size_t h = 0; h < H; ++h) dc[h] += p.wc(kGateO)[h] * da_o[h];
    } else {
      add_matvec_t(p.wc(kGateO), da_o.data(), H, dc.data(), H);
    }

    for (size_t h = 0; h < H; ++h) {
      da_i[h] = dc[h] * S.g[h] * S.i[h] * (1.0 - S.i[h]);
      da_f[h] = dc[h] * c_prev[h] * S.f[h] * (1.0 - S.f[h]);
      da_g[h] = dc[h] * S.i[h] * (1.0 - S.g[h] * S.g[h]);
    }

    const double* das[4] = {da_i.data(), da_f.data(), da_o.data(), da_g.data()};
    const Gate gates[4] = {kGateI, kGateF, kGateO, kGateC};
    for (int k = 0; k < 4; ++k) {
      const Gate g = gates[k];
      const double* da = das[k];
      double* gwx = grads.wx(g);
      for (size_t h = 0; h < H; ++h)
        for (size_t n : S.active) gwx[h * N + n] += da[h];
      add_outer(grads.wh(g), da, h_prev, H, H);
      for (size_t h = 0; h < H; ++h) grads.b(g)[h] += da[h];
    }

    // peephole gradients: i/f read c_prev, o reads c_t
    if (vec_peep) {
      for (size_t h = 0; h < H; ++h) {
        grads.wc(kGateI)[h] += da_i[h] * c_prev[h];
        grads.wc(kGateF)[h] += da_f[h] * c_prev[h];
        grads.wc(kGateO)[h] += da_o[h] * S.c[h];
      }
    } else {
      add_outer(grads.wc(kGateI), da_i.data(), c_prev, H, H);
      add_outer(grads.wc(kGateF), da_f.data(), c_prev, H, H);
      add_outer(grads.wc(kGateO), da_o.data(), S.c.data(), H, H);
    }

    // carry into step t-1
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (int k = 0; k < 4; ++k)
      add_matvec_t(p.wh(gates[k]), das[k], H, dh_next.data(), H);
    for (size_t h = 0; h < H; ++h) dc_next[h] = dc[h] * S.f[h];
    if (vec_peep) {
      for (size_t h = 0; h < H; ++h)
        dc_next[h] += p.wc(kGateI)[h] * da_i[h] + p.wc(kGateF)[h] * da_f[h];
    } else {
      add_matvec_t(p.wc(kGateI), da_i.data(), H, dc_next.data(), H);
      add_matvec_t(p.wc(kGateF), da_f.data(), H, dc_next.data(), H);
    }
  }

  out.grads = std::move(grads.flat());
  return out;
}

LstmParams init_lstm_params(const LstmDims& dims, const TrainConfig& cfg, Rng& rng) {
  LstmParams p(dims);
  const double sx = 1.0 / std::sqrt(static_cast<double>(dims.inputs));
  const double sh = 1.0 / std::sqrt(static_cast<double>(dims.hidden));
  const Gate gates[4] = {kGateI, kGateF, kGateO, kGateC};
  for (Gate g : gates)
    for (size_t k = 0; k < dims.hidden * dims.inputs; ++k)
      p.wx(g)[k] = rng.uniform(-sx, sx);
  for (Gate g : gates)
    for (size_t k = 0; k < dims.hidden * dims.hidden; ++k)
      p.wh(g)[k] = rng.uniform(-sh, sh);
  for (Gate g : {kGateI, kGateF, kGateO})
    for (size_t k = 0; k < dims.peephole_size(); ++k)
      p.wc(g)[k] = rng.uniform(-sh, sh);
  for (size_t h = 0; h < dims.hidden; ++h) p.b(kGateF)[h] = cfg.forget_bias_init;
  for (size_t k = 0; k < dims.classes * dims.hidden; ++k)
    p.wy()[k] = rng.uniform(-sh, sh);
  return p;
}

LstmModel lstm_train(const std::vector<const DayGrid*>& days, size_t num_classes,
                     const TrainConfig& cfg) {
  if (days.empty()) throw InputError("lstm_train: empty training set");
  if (cfg.hidden_size < 1 || cfg.unroll_len < 1 || cfg.learning_rate <= 0.0)
    throw InputError("lstm_train: bad config (hidden/unroll/lr)");
  const size_t N = days[0]->n_sensors;
  for (const DayGrid* d : days) {
    if (d->n_sensors != N) throw InputError("lstm_train: days disagree on sensor count");
    for (int lbl : d->labels)
      if (lbl < 0 || static_cast<size_t>(lbl) >= num_classes)
        throw InputError("lstm_train: label " + std::to_string(lbl) +
                         " out of range for " + std::to_string(num_classes) + " classes");
  }

  LstmDims dims{N, cfg.hidden_size, num_classes, cfg.peephole};
  Rng rng(cfg.seed);
  LstmModel model{init_lstm_params(dims, cfg, rng), cfg, EncodingKind::Raw, {}};
  AdamState adam(model.params.size());

  std::vector<size_t> order(days.size());
  std::iota(order.begin(), order.end(), 0);

  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    size_t n_windows = 0;
    for (size_t idx : order) {
      const DayGrid& day = *days[idx];
      LstmState state(cfg.hidden_size);
      for (size_t t0 = 0; t0 < kMinutesPerDay; t0 += cfg.unroll_len) {
        const size_t t1 = std::min<size_t>(t0 + cfg.unroll_len, kMinutesPerDay);
        BpttResult res =
            bptt_window(window_of(day, t0, t1),
                        std::span<const int>(day.labels).subspan(t0, t1 - t0),
                        model.params, state);
        if (!std::isfinite(res.loss))
          throw NumericError("lstm_train: non-finite loss at epoch " +
                             std::to_string(epoch) + ", day " + format_date(day.date) +
                             ", window starting at minute " + std::to_string(t0));
        clip_global_norm(res.grads, cfg.grad_clip);
        adam_step(model.params.flat(), res.grads, adam, cfg.learning_rate);
        state = cfg.carry_state_across_windows ? std::move(res.final_state)
                                               : LstmState(cfg.hidden_size);
        loss_sum += res.loss;
        ++n_windows;
      }
    }
    model.loss_trace.push_back(loss_sum / static_cast<double>(n_windows));
  }
  return model;
}

LstmModel lstm_train(const std::vector<DayGrid>& days, size_t num_classes,
                     const TrainConfig& cfg) {
  return lstm_train(day_ptrs(days), num_classes, cfg);
}

std::vector<int> lstm_predict(const LstmModel& model, const DayGrid& day) {
  const FeatureWindow X = window_of(day);
  ForwardDayResult fwd =
      forward_day(X, model.params, LstmState(model.params.dims().hidden));
  std::vector<int> labels(X.steps);
  const size_t L = model.params.dims().classes;
  for (size_t t = 0; t < X.steps; ++t) {
    const double* row = fwd.logits.row(t);
    size_t best = 0;
    for (size_t l = 1; l < L; ++l)
      if (row[l] > row[best]) best = l;
    labels[t] = static_cast<int>(best);
  }
  return labels;
}

}  // namespace har
