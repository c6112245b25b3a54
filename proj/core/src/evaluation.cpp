#include "har/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "har/error.hpp"
#include "har/hmm.hpp"
#include "har/nb.hpp"

namespace har {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

FoldResult run_fold(const std::vector<DayGrid>& encoded, const Fold& fold, size_t fold_index,
                    ModelKind kind, EncodingKind encoding, const BenchmarkConfig& cfg,
                    uint64_t seed, size_t num_classes) {
  const DayGrid& test = encoded[fold.test];
  std::vector<const DayGrid*> train;
  train.reserve(fold.train.size());
  for (size_t i : fold.train) train.push_back(&encoded[i]);

  FoldResult out;
  out.test_date = test.date;
  out.model_kind = kind;
  out.encoding = encoding;

  std::vector<int> pred;
  const Clock::time_point t0 = Clock::now();
  switch (kind) {
    case ModelKind::NaiveBayes: {
      NbModel m = nb_train(train, num_classes, cfg.smoothing_alpha);
      out.train_seconds = seconds_since(t0);
      pred = nb_predict_day(m, test);
      break;
    }
    case ModelKind::Hmm: {
      HmmModel m = hmm_train(train, num_classes, cfg.smoothing_alpha);
      out.train_seconds = seconds_since(t0);
      pred = hmm_viterbi(m, test);
      break;
    }
    case ModelKind::Crf: {
      CrfTrainConfig c = cfg.crf;
      c.seed = seed ^ static_cast<uint64_t>(fold_index);
      CrfTrained t = crf_train(train, num_classes, c);
      out.train_seconds = seconds_since(t0);
      pred = crf_predict(t.model, test);
      break;
    }
    case ModelKind::Lstm: {
      TrainConfig c = cfg.lstm;
      c.seed = seed ^ static_cast<uint64_t>(fold_index);
      LstmModel m = lstm_train(train, num_classes, c);
      out.train_seconds = seconds_since(t0);
      pred = lstm_predict(m, test);
      break;
    }
    case ModelKind::Oracle: {
      out.train_seconds = seconds_since(t0);
      pred = test.labels;
      break;
    }
  }

  out.confusion = Matrix(num_classes, num_classes);
  for (size_t t = 0; t < pred.size(); ++t) {
    out.confusion(static_cast<size_t>(test.labels[t]), static_cast<size_t>(pred[t])) += 1.0;
  }
  out.accuracy = timeslice_accuracy(pred, test.labels);
  return out;
}

ModelRow aggregate(ModelKind kind, std::vector<FoldResult> folds) {
  ModelRow row;
  row.kind = kind;
  double sum = 0.0;
  for (const FoldResult& f : folds) sum += f.accuracy;
  const double mean = sum / static_cast<double>(folds.size());
  double var = 0.0;
  for (const FoldResult& f : folds) {
    const double d = f.accuracy - mean;
    var += d * d;
  }
  var /= static_cast<double>(folds.size());
  row.mean_pct = 100.0 * mean;
  row.std_pct = 100.0 * std::sqrt(var);
  row.folds = std::move(folds);
  return row;
}

// Width in terminal columns, not bytes: UTF-8 continuation bytes do not
// advance the cursor.
size_t display_width(const std::string& s) {
  size_t w = 0;
  for (unsigned char c : s) {
    if ((c & 0xc0) != 0x80) ++w;
  }
  return w;
}

void append_padded(std::string& out, const std::string& cell, size_t width) {
  out += cell;
  for (size_t i = display_width(cell); i < width; ++i) out += ' ';
}

std::string format_cell(double mean_pct, double std_pct) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f±%.1f", mean_pct, std_pct);
  return buf;
}

std::string emit_text(const BenchmarkReport& report) {
  const size_t n_folds = report.rows.empty() ? 0 : report.rows.front().folds.size();
  std::string out = "house " + report.house.name + ", " +
                    encoding_name(report.encoding) + " encoding, " +
                    std::to_string(n_folds) + " folds\n";

  struct Line {
    std::string model, measured, reference;
  };
  std::vector<Line> lines;
  std::vector<bool> used(report.rows.size(), false);

  for (const ReferenceRow& ref : report.reference_rows) {
    Line line{ref.model, "--", ref.cell};
    for (size_t i = 0; i < report.rows.size(); ++i) {
      if (!used[i] && model_kind_label(report.rows[i].kind) == ref.model) {
        line.measured = format_cell(report.rows[i].mean_pct, report.rows[i].std_pct);
        used[i] = true;
        break;
      }
    }
    lines.push_back(std::move(line));
  }
  for (size_t i = 0; i < report.rows.size(); ++i) {
    if (used[i]) continue;
    lines.push_back({model_kind_label(report.rows[i].kind),
                     format_cell(report.rows[i].mean_pct, report.rows[i].std_pct), "--"});
  }

  size_t w0 = display_width("model"), w1 = display_width("accuracy");
  for (const Line& l : lines) {
    w0 = std::max(w0, display_width(l.model));
    w1 = std::max(w1, display_width(l.measured));
  }
  w0 += 2;
  w1 += 2;

  append_padded(out, "model", w0);
  append_padded(out, "accuracy", w1);
  out += "reference\n";
  for (const Line& l : lines) {
    append_padded(out, l.model, w0);
    append_padded(out, l.measured, w1);
    out += l.reference;
    out += '\n';
  }
  return out;
}

std::string emit_csv(const BenchmarkReport& report) {
  std::string out = "house,model,encoding,fold_date,accuracy\n";
  char buf[64];
  for (const ModelRow& row : report.rows) {
    for (const FoldResult& f : row.folds) {
      std::snprintf(buf, sizeof(buf), "%.17g", f.accuracy);
      out += report.house.name;
      out += ',';
      out += model_kind_name(row.kind);
      out += ',';
      out += encoding_name(f.encoding);
      out += ',';
      out += format_date(f.test_date);
      out += ',';
      out += buf;
      out += '\n';
    }
  }
  return out;
}

struct RefCell {
  const char* model;
  double mean;
  double std;
  const char* text;
};

constexpr RefCell kRawA[] = {{"Naive Bayes", 77.1, 20.8, "77.1±20.8"},
                             {"HMM", 59.1, 28.7, "59.1±28.7"},
                             {"HSMM", 59.5, 29.0, "59.5±29.0"},
                             {"CRF", 89.8, 8.5, "89.8±8.5"},
                             {"LSTM", 89.8, 8.2, "89.8±8.2"}};
constexpr RefCell kRawB[] = {{"Naive Bayes", 80.4, 18.0, "80.4±18.0"},
                             {"HMM", 63.2, 24.7, "63.2±24.7"},
                             {"HSMM", 63.8, 24.2, "63.8±24.2"},
                             {"CRF", 78.0, 25.9, "78.0±25.9"},
                             {"LSTM", 85.7, 14.3, "85.7±14.3"}};
constexpr RefCell kRawC[] = {{"Naive Bayes", 46.5, 22.6, "46.5±22.6"},
                             {"HMM", 26.5, 22.7, "26.5±22.7"},
                             {"HSMM", 31.2, 24.6, "31.2±24.6"},
                             {"CRF", 46.3, 25.5, "46.3±25.5"},
                             {"LSTM", 64.22, 21.9, "64.22±21.9"}};
constexpr RefCell kLastA[] = {{"Naive Bayes", 95.3, 2.8, "95.3±2.8"},
                              {"HMM", 89.5, 8.4, "89.5±8.4"},
                              {"HSMM", 91.0, 7.2, "91.0±7.2"},
                              {"CRF", 96.4, 2.4, "96.4±2.4"},
                              {"LSTM", 95.3, 2.0, "95.3±2.0"}};
constexpr RefCell kLastB[] = {{"Naive Bayes", 86.2, 13.8, "86.2±13.8"},
                              {"HMM", 48.4, 26.0, "48.4±26.0"},
                              {"HSMM", 67.1, 24.8, "67.1±24.8"},
                              {"CRF", 89.2, 13.9, "89.2±13.9"},
                              {"LSTM", 88.5, 12.6, "88.5±12.6"}};
constexpr RefCell kLastC[] = {{"Naive Bayes", 87.0, 12.2, "87.0±12.2"},
                              {"HMM", 83.9, 13.9, "83.9±13.9"},
                              {"HSMM", 84.5, 13.2, "84.5±13.2"},
                              {"CRF", 89.7, 8.4, "89.7±8.4"},
                              {"LSTM", 85.9, 10.6, "85.9±10.6"}};

constexpr HouseFacts kHouseFacts[] = {{"A", 25, 14, 10}, {"B", 14, 23, 13}, {"C", 19, 21, 16}};

}  // namespace

const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::NaiveBayes: return "nb";
    case ModelKind::Hmm: return "hmm";
    case ModelKind::Crf: return "crf";
    case ModelKind::Lstm: return "lstm";
    case ModelKind::Oracle: return "oracle";
  }
  return "?";
}

const char* model_kind_label(ModelKind k) {
  switch (k) {
    case ModelKind::NaiveBayes: return "Naive Bayes";
    case ModelKind::Hmm: return "HMM";
    case ModelKind::Crf: return "CRF";
    case ModelKind::Lstm: return "LSTM";
    case ModelKind::Oracle: return "Oracle";
  }
  return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
  if (name == "nb") return ModelKind::NaiveBayes;
  if (name == "hmm") return ModelKind::Hmm;
  if (name == "crf") return ModelKind::Crf;
  if (name == "lstm") return ModelKind::Lstm;
  if (name == "oracle") return ModelKind::Oracle;
  throw InputError("unknown model '" + name + "' (expected nb, hmm, crf, lstm, or oracle)");
}

double timeslice_accuracy(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw Error("timeslice_accuracy: " + std::to_string(pred.size()) + " predictions vs " +
                std::to_string(truth.size()) + " labels");
  }
  if (pred.empty()) throw Error("timeslice_accuracy: empty input");
  size_t hits = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

BenchmarkReport run_benchmark(const HouseData& house, std::span<const ModelKind> kinds,
                              EncodingKind encoding, const BenchmarkConfig& cfg,
                              uint64_t seed) {
  const std::vector<Fold> folds = make_folds(house.days);
  const size_t num_classes = house.meta.activity_count;

  std::vector<DayGrid> encoded;
  encoded.reserve(house.days.size());
  for (const DayGrid& day : house.days) encoded.push_back(encode_day(day, encoding));

  BenchmarkReport report;
  report.house = house.meta;
  report.encoding = encoding;

  for (ModelKind kind : kinds) {
    std::vector<FoldResult> results(folds.size());
    std::vector<std::exception_ptr> errors(folds.size());

    auto run_one = [&](size_t k) {
      try {
        results[k] = run_fold(encoded, folds[k], k, kind, encoding, cfg, seed, num_classes);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    };

    const size_t n_threads =
        std::min<size_t>(std::max(cfg.threads, 1), folds.size());
    if (n_threads <= 1) {
      for (size_t k = 0; k < folds.size(); ++k) run_one(k);
    } else {
      std::atomic<size_t> next{0};
      std::vector<std::thread> pool;
      pool.reserve(n_threads);
      for (size_t i = 0; i < n_threads; ++i) {
        pool.emplace_back([&] {
          for (size_t k = next.fetch_add(1); k < folds.size(); k = next.fetch_add(1)) {
            run_one(k);
          }
        });
      }
      for (std::thread& t : pool) t.join();
    }

    for (size_t k = 0; k < folds.size(); ++k) {
      if (!errors[k]) continue;
      try {
        std::rethrow_exception(errors[k]);
      } catch (const std::exception& e) {
        throw Error("fold " + format_date(encoded[folds[k].test].date) + " (" +
                    model_kind_name(kind) + "): " + e.what());
      }
    }

    report.rows.push_back(aggregate(kind, std::move(results)));
  }

  try {
    report.reference_rows = reference_table(house.meta.name, encoding);
  } catch (const InputError&) {
    // no published numbers for this house
  }
  return report;
}

BenchmarkReport run_benchmark(const HouseData& house, ModelKind kind, EncodingKind encoding,
                              const BenchmarkConfig& cfg, uint64_t seed) {
  const ModelKind kinds[] = {kind};
  return run_benchmark(house, kinds, encoding, cfg, seed);
}

std::string emit_report(const BenchmarkReport& report, ReportFormat format) {
  return format == ReportFormat::Text ? emit_text(report) : emit_csv(report);
}

std::vector<ReferenceRow> reference_table(const std::string& house, EncodingKind encoding) {
  const RefCell* cells = nullptr;
  if (house == "A") cells = encoding == EncodingKind::Raw ? kRawA : kLastA;
  else if (house == "B") cells = encoding == EncodingKind::Raw ? kRawB : kLastB;
  else if (house == "C") cells = encoding == EncodingKind::Raw ? kRawC : kLastC;
  else throw InputError("no published reference numbers for house '" + house + "'");

  std::vector<ReferenceRow> rows;
  rows.reserve(5);
  for (size_t i = 0; i < 5; ++i) {
    rows.push_back({cells[i].model, cells[i].mean, cells[i].std, cells[i].text});
  }
  return rows;
}

std::span<const HouseFacts> published_house_facts() { return kHouseFacts; }

}  // namespace har
