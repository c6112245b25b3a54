#include <benchmark/benchmark.h>

#include <vector>

#include "har/crf.hpp"
#include "har/dataset.hpp"
#include "har/hmm.hpp"
#include "har/lstm.hpp"
#include "har/nb.hpp"
#include "har/rng.hpp"

using namespace har;

namespace {

std::vector<uint8_t> random_bits(Rng& rng, size_t n, double p) {
  std::vector<uint8_t> bits(n);
  for (uint8_t& b : bits) b = rng.bernoulli(p) ? 1 : 0;
  return bits;
}

LstmParams make_params(const LstmDims& dims, uint64_t seed) {
  Rng rng(seed);
  TrainConfig cfg;
  cfg.hidden_size = dims.hidden;
  return init_lstm_params(dims, cfg, rng);
}

DayGrid synth_day(size_t sensors, uint64_t seed) {
  HouseMeta meta = synth_meta(sensors, 6);
  return synth_house(meta, 1, seed)[0];
}

void bm_cell_forward(benchmark::State& state) {
  const size_t H = static_cast<size_t>(state.range(0));
  const LstmDims dims{14, H, 8, PeepholeKind::Vector};
  LstmParams p = make_params(dims, 1);
  Rng rng(2);
  std::vector<uint8_t> x = random_bits(rng, dims.inputs, 0.2);
  LstmState prev(H), next(H);
  StepCache cache;
  for (auto _ : state) {
    cell_forward(x.data(), prev, p, next, &cache);
    benchmark::DoNotOptimize(next.h.data());
  }
}
BENCHMARK(bm_cell_forward)->Arg(64)->Arg(300);

void bm_bptt_window(benchmark::State& state) {
  const size_t H = static_cast<size_t>(state.range(0));
  const LstmDims dims{14, H, 8, PeepholeKind::Vector};
  LstmParams p = make_params(dims, 3);
  Rng rng(4);
  const size_t T = 70;
  std::vector<uint8_t> x = random_bits(rng, T * dims.inputs, 0.2);
  std::vector<int> y(T);
  for (int& l : y) l = static_cast<int>(rng.below(dims.classes));
  const FeatureWindow X{x.data(), T, dims.inputs};
  const LstmState zero(H);
  for (auto _ : state) {
    BpttResult r = bptt_window(X, y, p, zero);
    benchmark::DoNotOptimize(r.grads.data());
  }
}
BENCHMARK(bm_bptt_window)->Arg(64)->Arg(300);

void bm_forward_full_day(benchmark::State& state) {
  const LstmDims dims{14, 64, 8, PeepholeKind::Vector};
  LstmParams p = make_params(dims, 5);
  DayGrid day = synth_day(14, 6);
  const FeatureWindow X = window_of(day);
  const LstmState zero(dims.hidden);
  for (auto _ : state) {
    ForwardDayResult r = forward_day(X, p, zero);
    benchmark::DoNotOptimize(r.logits.data());
  }
}
BENCHMARK(bm_forward_full_day);

void bm_hmm_viterbi_day(benchmark::State& state) {
  HouseMeta meta = synth_meta(14, 7);
  std::vector<DayGrid> days = synth_house(meta, 3, 7);
  HmmModel m = hmm_train(days, meta.activity_count);
  for (auto _ : state) {
    std::vector<int> pred = hmm_viterbi(m, days[0]);
    benchmark::DoNotOptimize(pred.data());
  }
}
BENCHMARK(bm_hmm_viterbi_day);

void bm_crf_loglik_grad_day(benchmark::State& state) {
  HouseMeta meta = synth_meta(14, 7);
  std::vector<DayGrid> days = synth_house(meta, 1, 8);
  Rng rng(9);
  std::vector<double> w(CrfModel::flat_size(meta.activity_count, meta.sensor_count));
  for (double& v : w) v = rng.uniform(-0.5, 0.5);
  CrfModel m(meta.activity_count, meta.sensor_count, w);
  for (auto _ : state) {
    CrfLoglik r = crf_loglik_grad(m, days[0]);
    benchmark::DoNotOptimize(r.grad.data());
  }
}
BENCHMARK(bm_crf_loglik_grad_day);

void bm_nb_predict_day(benchmark::State& state) {
  HouseMeta meta = synth_meta(14, 7);
  std::vector<DayGrid> days = synth_house(meta, 3, 10);
  NbModel m = nb_train(days, meta.activity_count);
  for (auto _ : state) {
    std::vector<int> pred = nb_predict_day(m, days[0]);
    benchmark::DoNotOptimize(pred.data());
  }
}
BENCHMARK(bm_nb_predict_day);

void bm_encode_last_fired(benchmark::State& state) {
  DayGrid day = synth_day(14, 11);
  for (auto _ : state) {
    DayGrid enc = encode_last_fired(day);
    benchmark::DoNotOptimize(enc.features.data());
  }
}
BENCHMARK(bm_encode_last_fired);

}  // namespace

BENCHMARK_MAIN();
