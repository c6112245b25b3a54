#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "har/error.hpp"
#include "har/evaluation.hpp"
#include "har/grad_check.hpp"
#include "har/model_io.hpp"
#include "har/rng.hpp"
#include "har_cli/run_config.hpp"

namespace har {
namespace {

HouseData load_from(const RunConfig& cfg) {
  if (cfg.events_path.empty() || cfg.annotations_path.empty() || cfg.meta_path.empty()) {
    throw InputError(
        "dataset paths missing: set --events, --annotations and --meta "
        "(directly or in the config file)");
  }
  const std::string name = cfg.house.empty() ? "house" : cfg.house;
  return load_house(cfg.events_path, cfg.annotations_path, cfg.meta_path, name);
}

std::string out_path(const RunConfig& cfg, const std::string& file) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw InputError("cannot create output directory '" + cfg.out_dir + "'");
  return (std::filesystem::path(cfg.out_dir) / file).string();
}

TrainConfig lstm_config(const RunConfig& cfg) {
  TrainConfig t;
  if (cfg.hidden > 0) t.hidden_size = static_cast<size_t>(cfg.hidden);
  if (cfg.unroll > 0) t.unroll_len = static_cast<size_t>(cfg.unroll);
  if (cfg.lr > 0) t.learning_rate = cfg.lr;
  if (cfg.epochs >= 0) t.epochs = static_cast<size_t>(cfg.epochs);
  t.seed = cfg.seed;
  t.carry_state_across_windows = !cfg.no_carry;
  if (cfg.peephole == "matrix") {
    t.peephole = PeepholeKind::Matrix;
  } else if (cfg.peephole != "vector") {
    throw InputError("unknown peephole kind '" + cfg.peephole + "' (vector or matrix)");
  }
  return t;
}

CrfTrainConfig crf_config(const RunConfig& cfg, bool standalone) {
  CrfTrainConfig c;
  if (cfg.crf_epochs >= 0) c.epochs = static_cast<size_t>(cfg.crf_epochs);
  else if (standalone && cfg.epochs >= 0) c.epochs = static_cast<size_t>(cfg.epochs);
  if (cfg.crf_lr > 0) c.learning_rate = cfg.crf_lr;
  else if (standalone && cfg.lr > 0) c.learning_rate = cfg.lr;
  c.l2 = cfg.crf_l2;
  c.seed = cfg.seed;
  return c;
}

std::vector<DayGrid> encode_all(const HouseData& house, EncodingKind enc) {
  std::vector<DayGrid> out;
  out.reserve(house.days.size());
  for (const DayGrid& d : house.days) out.push_back(encode_day(d, enc));
  return out;
}

double training_accuracy(const std::vector<DayGrid>& days,
                         const std::vector<std::vector<int>>& preds) {
  size_t hits = 0, total = 0;
  for (size_t d = 0; d < days.size(); ++d) {
    for (size_t t = 0; t < preds[d].size(); ++t) {
      if (preds[d][t] == days[d].labels[t]) ++hits;
    }
    total += preds[d].size();
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

void write_trace(const std::string& path, const std::vector<double>& losses) {
  std::string csv = "epoch,loss\n";
  char buf[64];
  for (size_t e = 0; e < losses.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", e + 1, losses[e]);
    csv += buf;
  }
  write_file_atomic(path, csv);
}

}  // namespace

int cmd_validate(const RunConfig& cfg) {
  const HouseData house = load_from(cfg);
  const HouseMeta& meta = house.meta;

  std::printf("%zu days, %zu sensors, %zu activities (+Idle)\n", house.days.size(),
              meta.sensor_count, meta.activity_count - 1);
  std::printf("events: %zu, annotations: %zu\n", house.n_events, house.n_annotations);

  std::vector<size_t> hist(meta.activity_count, 0);
  for (const DayGrid& day : house.days) {
    for (int label : day.labels) ++hist[static_cast<size_t>(label)];
  }
  size_t width = 0;
  for (const std::string& n : meta.activity_names) width = std::max(width, n.size());
  std::printf("label histogram:\n");
  for (size_t l = 0; l < hist.size(); ++l) {
    std::printf("  %2zu %-*s %7zu slices\n", l, static_cast<int>(width),
                meta.activity_names[l].c_str(), hist[l]);
  }
  return 0;
}

int cmd_train(const RunConfig& cfg) {
  if (cfg.model == "all" || cfg.model == "oracle") {
    throw InputError("train needs one trainable model kind (lstm, nb, hmm, or crf)");
  }
  const ModelKind kind = model_kind_from_name(cfg.model);
  const EncodingKind enc = encoding_from_name(cfg.encoding);
  const HouseData house = load_from(cfg);
  const std::vector<DayGrid> days = encode_all(house, enc);
  const size_t L = house.meta.activity_count;

  const std::string stem = house.meta.name + "_" + cfg.model + "_" + encoding_name(enc);
  const std::string model_path = out_path(cfg, stem + ".model");
  const std::string trace_path = out_path(cfg, stem + "_loss.csv");

  std::vector<std::vector<int>> preds(days.size());
  std::vector<double> trace;

  switch (kind) {
    case ModelKind::Lstm: {
      LstmModel m = lstm_train(day_ptrs(days), L, lstm_config(cfg));
      m.encoding = enc;
      save_lstm_model(model_path, m);
      trace = m.loss_trace;
      for (size_t d = 0; d < days.size(); ++d) preds[d] = lstm_predict(m, days[d]);
      break;
    }
    case ModelKind::Crf: {
      CrfTrained t = crf_train(day_ptrs(days), L, crf_config(cfg, true));
      save_crf_model(model_path, t.model, enc);
      trace.reserve(t.objective_trace.size());
      for (double obj : t.objective_trace) trace.push_back(-obj);
      for (size_t d = 0; d < days.size(); ++d) preds[d] = crf_predict(t.model, days[d]);
      break;
    }
    case ModelKind::NaiveBayes: {
      NbModel m = nb_train(day_ptrs(days), L, cfg.alpha);
      save_nb_model(model_path, m, enc);
      for (size_t d = 0; d < days.size(); ++d) preds[d] = nb_predict_day(m, days[d]);
      break;
    }
    case ModelKind::Hmm: {
      HmmModel m = hmm_train(day_ptrs(days), L, cfg.alpha);
      save_hmm_model(model_path, m, enc);
      for (size_t d = 0; d < days.size(); ++d) preds[d] = hmm_viterbi(m, days[d]);
      break;
    }
    case ModelKind::Oracle:
      break;  // rejected above
  }

  write_trace(trace_path, trace);

  std::printf("trained %s on %s (%s, %zu days)\n", cfg.model.c_str(),
              house.meta.name.c_str(), encoding_name(enc), days.size());
  std::printf("train accuracy: %.2f%%\n", 100.0 * training_accuracy(days, preds));
  std::printf("wrote %s\n", model_path.c_str());
  std::printf("wrote %s\n", trace_path.c_str());
  return 0;
}

int cmd_benchmark(const RunConfig& cfg) {
  const EncodingKind enc = encoding_from_name(cfg.encoding);
  const HouseData house = load_from(cfg);

  std::vector<ModelKind> kinds;
  if (cfg.model == "all") {
    kinds = {ModelKind::NaiveBayes, ModelKind::Hmm, ModelKind::Crf, ModelKind::Lstm};
  } else {
    kinds = {model_kind_from_name(cfg.model)};
  }

  BenchmarkConfig bc;
  bc.lstm = lstm_config(cfg);
  bc.crf = crf_config(cfg, cfg.model == "crf");
  bc.smoothing_alpha = cfg.alpha;
  bc.threads = cfg.threads;

  const BenchmarkReport report = run_benchmark(house, kinds, enc, bc, cfg.seed);
  const std::string text = emit_report(report, ReportFormat::Text);
  const std::string csv = emit_report(report, ReportFormat::Csv);

  const std::string stem = house.meta.name + "_" + std::string(encoding_name(enc));
  const std::string text_path = out_path(cfg, stem + "_benchmark.txt");
  const std::string csv_path = out_path(cfg, stem + "_benchmark.csv");
  write_file_atomic(text_path, text);
  write_file_atomic(csv_path, csv);

  std::fputs(text.c_str(), stdout);
  std::printf("wrote %s\n", text_path.c_str());
  std::printf("wrote %s\n", csv_path.c_str());
  return 0;
}

int cmd_gradcheck(const RunConfig& cfg) {
  const double kLstmTol = 1e-4, kCrfTol = 1e-5;
  const double h = 1e-5;

  double lstm_worst = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    Rng rng(1000 + static_cast<uint64_t>(inst));
    const LstmDims dims{5, 8, 3, PeepholeKind::Vector};
    TrainConfig tc;
    tc.hidden_size = dims.hidden;
    LstmParams params = init_lstm_params(dims, tc, rng);

    const size_t T = 12;
    std::vector<uint8_t> x(T * dims.inputs);
    for (uint8_t& b : x) b = rng.bernoulli(0.4) ? 1 : 0;
    std::vector<int> y(T);
    for (int& l : y) l = static_cast<int>(rng.below(dims.classes));

    const FeatureWindow X{x.data(), T, dims.inputs};
    const LstmState zero(dims.hidden);
    std::vector<double> analytic = bptt_window(X, y, params, zero).grads;
    if (cfg.inject_fault) analytic[0] += 1e-2;

    auto f = [&](std::span<const double> p) {
      LstmParams q(dims, std::vector<double>(p.begin(), p.end()));
      return bptt_window(X, y, q, zero).loss;
    };
    lstm_worst = std::max(lstm_worst, grad_check(f, params.flat(), analytic, h));
  }

  double crf_worst = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    Rng rng(2000 + static_cast<uint64_t>(inst));
    const size_t T = 6, L = 3, N = 4;
    CrfModel model(L, N);
    for (double& w : model.flat()) w = rng.uniform(-0.5, 0.5);

    std::vector<uint8_t> x(T * N);
    for (uint8_t& b : x) b = rng.bernoulli(0.5) ? 1 : 0;
    std::vector<int> y(T);
    for (int& l : y) l = static_cast<int>(rng.below(L));

    const FeatureWindow X{x.data(), T, N};
    std::vector<double> analytic = crf_loglik_grad(model, X, y).grad;
    if (cfg.inject_fault) analytic[0] += 1e-2;

    auto f = [&](std::span<const double> p) {
      CrfModel m(L, N, std::vector<double>(p.begin(), p.end()));
      return crf_loglik_grad(m, X, y).loglik;
    };
    crf_worst = std::max(crf_worst, grad_check(f, model.flat(), analytic, h));
  }

  const bool lstm_ok = lstm_worst < kLstmTol;
  const bool crf_ok = crf_worst < kCrfTol;
  std::printf("LSTM max rel err: %.3e %s\n", lstm_worst, lstm_ok ? "PASS" : "FAIL");
  std::printf("CRF max rel err: %.3e %s\n", crf_worst, crf_ok ? "PASS" : "FAIL");
  return lstm_ok && crf_ok ? 0 : 1;
}

int cmd_synth(const RunConfig& cfg) {
  SynthConfig sc;
  sc.sensors = cfg.synth_sensors;
  sc.activities = cfg.synth_activities;
  sc.days = cfg.synth_days;
  sc.seed = cfg.seed;
  if (!cfg.house.empty()) sc.house_name = cfg.house;

  const SynthData data = synth_dataset(sc);

  const std::string meta_path = out_path(cfg, "meta.txt");
  const std::string events_path = out_path(cfg, "events.txt");
  const std::string ann_path = out_path(cfg, "annotations.txt");

  std::ostringstream meta, events, anns;
  write_meta_file(meta, data.meta);
  write_events_file(events, data.events);
  write_annotations_file(anns, data.annotations);
  write_file_atomic(meta_path, meta.str());
  write_file_atomic(events_path, events.str());
  write_file_atomic(ann_path, anns.str());

  std::printf("synthetic house '%s': %zu days, %zu sensors, %zu activities (+Idle)\n",
              data.meta.name.c_str(), data.dates.size(), data.meta.sensor_count,
              data.meta.activity_count - 1);
  std::printf("wrote %s\n", meta_path.c_str());
  std::printf("wrote %s\n", events_path.c_str());
  std::printf("wrote %s\n", ann_path.c_str());
  return 0;
}

}  // namespace har
