#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "har/crf.hpp"
#include "har/dataset.hpp"
#include "har/lstm.hpp"
#include "har/matrix.hpp"

namespace har {

// Oracle predicts the ground-truth labels; it exists to exercise the
// harness itself.
enum class ModelKind : uint8_t { NaiveBayes, Hmm, Crf, Lstm, Oracle };

const char* model_kind_name(ModelKind k);   // nb, hmm, crf, lstm, oracle
const char* model_kind_label(ModelKind k);  // Naive Bayes, HMM, CRF, LSTM, Oracle
ModelKind model_kind_from_name(const std::string& name);

// Fraction of slices where pred equals truth, Idle included. Throws on
// length mismatch.
double timeslice_accuracy(std::span<const int> pred, std::span<const int> truth);

struct FoldResult {
  Date test_date = 0;
  ModelKind model_kind = ModelKind::NaiveBayes;
  EncodingKind encoding = EncodingKind::Raw;
  double accuracy = 0.0;  // fraction in [0, 1]
  double train_seconds = 0.0;
  Matrix confusion;  // L x L counts; row = truth, column = prediction
};

struct ModelRow {
  ModelKind kind = ModelKind::NaiveBayes;
  double mean_pct = 0.0;
  double std_pct = 0.0;  // population std over folds
  std::vector<FoldResult> folds;  // ordered by test date
};

struct ReferenceRow {
  std::string model;  // display label; includes HSMM, which is reference-only
  double mean_pct = 0.0;
  double std_pct = 0.0;
  std::string cell;  // published formatting, e.g. "95.3±2.0"
};

struct BenchmarkReport {
  HouseMeta house;
  EncodingKind encoding = EncodingKind::Raw;
  std::vector<ModelRow> rows;
  std::vector<ReferenceRow> reference_rows;  // empty when nothing was published
};

struct BenchmarkConfig {
  TrainConfig lstm;
  CrfTrainConfig crf;
  double smoothing_alpha = 0.01;
  int threads = 1;  // >1 runs folds concurrently; output order stays fixed
};

// Leave-one-day-out: every day is held out once, models are trained from
// scratch on the rest, and per-day accuracies are aggregated to mean and
// population std. Fold k trains with seed ^ k so folds are independent
// yet reproducible. A failing fold aborts with its date in the message.
BenchmarkReport run_benchmark(const HouseData& house, std::span<const ModelKind> kinds,
                              EncodingKind encoding, const BenchmarkConfig& cfg,
                              uint64_t seed);
BenchmarkReport run_benchmark(const HouseData& house, ModelKind kind, EncodingKind encoding,
                              const BenchmarkConfig& cfg, uint64_t seed);

enum class ReportFormat { Text, Csv };

// Text: aligned table, one row per model, measured next to published
// cells. Csv: header house,model,encoding,fold_date,accuracy plus one row
// per fold per model.
std::string emit_report(const BenchmarkReport& report, ReportFormat format);

// Published accuracies for houses A, B, C under both encodings, in table
// row order (Naive Bayes, HMM, HSMM, CRF, LSTM). Unknown house -> error.
std::vector<ReferenceRow> reference_table(const std::string& house, EncodingKind encoding);

// Published dataset shapes (days, sensors, activities excluding Idle).
struct HouseFacts {
  const char* name;
  size_t days;
  size_t sensors;
  size_t activities;
};
std::span<const HouseFacts> published_house_facts();

}  // namespace har
