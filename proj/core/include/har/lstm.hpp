#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "har/dataset.hpp"
#include "har/matrix.hpp"

namespace har {

// Peephole connections as elementwise vectors (the default) or as full
// HxH matrices (sensitivity switch).
enum class PeepholeKind : uint8_t { Vector = 0, Matrix = 1 };

struct LstmDims {
  size_t inputs = 0;   // N, sensor count
  size_t hidden = 0;   // H
  size_t classes = 0;  // L, activity count including Idle
  PeepholeKind peephole = PeepholeKind::Vector;

  size_t peephole_size() const {
    return peephole == PeepholeKind::Vector ? hidden : hidden * hidden;
  }
  bool operator==(const LstmDims&) const = default;
};

// Gate index into the wx/wh/bias blocks.
enum Gate : size_t { kGateI = 0, kGateF = 1, kGateO = 2, kGateC = 3 };

// All weights in one flat vector so the optimizer and the serializer see
// a single array. Block order: Wxi Wxf Wxo Wxc | Whi Whf Who Whc |
// wci wcf wco | bi bf bo bc | Wy | by.
class LstmParams {
 public:
  LstmParams() = default;
  explicit LstmParams(const LstmDims& dims);
  LstmParams(const LstmDims& dims, std::vector<double> flat);

  const LstmDims& dims() const { return dims_; }
  std::vector<double>& flat() { return flat_; }
  const std::vector<double>& flat() const { return flat_; }
  size_t size() const { return flat_.size(); }

  // H x N input weights for one gate (row-major)
  double* wx(Gate g) { return flat_.data() + wx_off_ + g * dims_.hidden * dims_.inputs; }
  // H x H recurrent weights
  double* wh(Gate g) { return flat_.data() + wh_off_ + g * dims_.hidden * dims_.hidden; }
  // peephole block for gates i/f/o (length H, or HxH row-major)
  double* wc(Gate g) { return flat_.data() + wc_off_ + g * dims_.peephole_size(); }
  // length-H bias
  double* b(Gate g) { return flat_.data() + b_off_ + g * dims_.hidden; }
  // L x H output projection and length-L output bias
  double* wy() { return flat_.data() + wy_off_; }
  double* by() { return flat_.data() + by_off_; }

  const double* wx(Gate g) const { return const_cast<LstmParams*>(this)->wx(g); }
  const double* wh(Gate g) const { return const_cast<LstmParams*>(this)->wh(g); }
  const double* wc(Gate g) const { return const_cast<LstmParams*>(this)->wc(g); }
  const double* b(Gate g) const { return const_cast<LstmParams*>(this)->b(g); }
  const double* wy() const { return const_cast<LstmParams*>(this)->wy(); }
  const double* by() const { return const_cast<LstmParams*>(this)->by(); }

  static size_t flat_size(const LstmDims& dims);

 private:
  LstmDims dims_;
  size_t wx_off_ = 0, wh_off_ = 0, wc_off_ = 0, b_off_ = 0, wy_off_ = 0, by_off_ = 0;
  std::vector<double> flat_;
};

struct LstmState {
  std::vector<double> h;
  std::vector<double> c;

  LstmState() = default;
  explicit LstmState(size_t hidden) : h(hidden, 0.0), c(hidden, 0.0) {}
  bool operator==(const LstmState&) const = default;
};

// Everything the backward pass needs from one forward step.
struct StepCache {
  std::vector<size_t> active;  // indices of x bits that are 1
  std::vector<double> i, f, o, g, c, tanh_c, h;
};

// One step of the peephole cell:
//   i = sig(Wxi x + Whi h + wci.c_prev + bi)
//   f = sig(Wxf x + Whf h + wcf.c_prev + bf)
//   c = f.c_prev + i.tanh(Wxc x + Whc h + bc)
//   o = sig(Wxo x + Who h + wco.c + bo)      (peephole reads the new c)
//   h = o.tanh(c)
// x is given as the binary slice; cache may be null when no backward pass
// will follow.
void cell_forward(const uint8_t* x, const LstmState& prev, const LstmParams& p,
                  LstmState& next, StepCache* cache);

struct ForwardDayResult {
  Matrix logits;  // T x L
  LstmState final_state;
};

ForwardDayResult forward_day(const FeatureWindow& X, const LstmParams& p,
                             const LstmState& initial);

struct BpttResult {
  double loss = 0.0;            // mean cross-entropy over the window
  std::vector<double> grads;    // same flat layout as LstmParams
  LstmState final_state;
};

// Exact gradients of the window loss; gradient flow into the initial
// state is dropped (truncation boundary).
BpttResult bptt_window(const FeatureWindow& X, std::span<const int> y,
                       const LstmParams& p, const LstmState& initial);

struct TrainConfig {
  size_t hidden_size = 300;
  size_t unroll_len = 70;
  double learning_rate = 0.0004;
  size_t epochs = 50;
  uint64_t seed = 0;
  bool carry_state_across_windows = true;
  PeepholeKind peephole = PeepholeKind::Vector;
  double grad_clip = 5.0;         // global-norm clip before each Adam step
  double forget_bias_init = 1.0;  // other biases start at 0
};

struct LstmModel {
  LstmParams params;
  TrainConfig cfg;
  EncodingKind encoding = EncodingKind::Raw;
  std::vector<double> loss_trace;  // mean window loss per epoch
};

// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases at their
// configured constants, drawn in block order from the given stream.
LstmParams init_lstm_params(const LstmDims& dims, const TrainConfig& cfg, Rng& rng);

// Truncated BPTT over seeded-shuffled days: consecutive windows of
// unroll_len per day, state carried across windows (per cfg) and reset
// between days, one clipped Adam step per window.
LstmModel lstm_train(const std::vector<const DayGrid*>& days, size_t num_classes,
                     const TrainConfig& cfg);
LstmModel lstm_train(const std::vector<DayGrid>& days, size_t num_classes,
                     const TrainConfig& cfg);

// Per-step argmax labels from a zero initial state; ties break low.
std::vector<int> lstm_predict(const LstmModel& model, const DayGrid& day);

inline std::vector<const DayGrid*> day_ptrs(const std::vector<DayGrid>& days) {
  std::vector<const DayGrid*> out;
  out.reserve(days.size());
  for (const DayGrid& d : days) out.push_back(&d);
  return out;
}

}  // namespace har
