#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "har/civil_time.hpp"
#include "har/error.hpp"
#include "har/evaluation.hpp"

using namespace har;

namespace {

HouseData fixture_house(size_t days, uint64_t seed) {
  HouseData h;
  h.meta = synth_meta(8, 5);
  h.days = synth_house(h.meta, days, seed);
  return h;
}

BenchmarkConfig quick_config() {
  BenchmarkConfig cfg;
  cfg.crf.epochs = 10;
  cfg.lstm.hidden_size = 8;
  cfg.lstm.epochs = 2;
  cfg.lstm.learning_rate = 0.01;
  return cfg;
}

}  // namespace

TEST_CASE("timeslice accuracy counts matches") {
  const std::vector<int> truth = {0, 0, 0, 0, 0, 0, 1, 2, 3, 1};
  CHECK(timeslice_accuracy(truth, truth) == 1.0);

  const std::vector<int> all_idle(truth.size(), 0);
  CHECK(timeslice_accuracy(all_idle, truth) == 0.6);

  std::vector<int> wrong(truth.size());
  for (size_t i = 0; i < truth.size(); ++i) wrong[i] = truth[i] + 1;
  CHECK(timeslice_accuracy(wrong, truth) == 0.0);

  const std::vector<int> shorter = {0, 1};
  CHECK_THROWS_AS(timeslice_accuracy(shorter, truth), Error);
  const std::vector<int> none;
  CHECK_THROWS_AS(timeslice_accuracy(none, none), Error);
}

TEST_CASE("model kind names round-trip") {
  for (ModelKind k : {ModelKind::NaiveBayes, ModelKind::Hmm, ModelKind::Crf,
                      ModelKind::Lstm, ModelKind::Oracle}) {
    CHECK(model_kind_from_name(model_kind_name(k)) == k);
  }
  CHECK(std::string(model_kind_label(ModelKind::NaiveBayes)) == "Naive Bayes");
  CHECK_THROWS_AS(model_kind_from_name("hsmm"), InputError);
}

TEST_CASE("oracle benchmark is perfect and shapes the fold results") {
  HouseData h = fixture_house(4, 7);
  BenchmarkReport r = run_benchmark(h, ModelKind::Oracle, EncodingKind::Raw,
                                    quick_config(), 0);
  REQUIRE(r.rows.size() == 1);
  const ModelRow& row = r.rows[0];
  CHECK(row.mean_pct == 100.0);
  CHECK(row.std_pct == 0.0);
  REQUIRE(row.folds.size() == 4);

  for (size_t k = 0; k < row.folds.size(); ++k) {
    const FoldResult& f = row.folds[k];
    CHECK(f.accuracy == 1.0);
    CHECK(f.encoding == EncodingKind::Raw);
    CHECK(f.train_seconds >= 0.0);
    if (k > 0) CHECK(f.test_date > row.folds[k - 1].test_date);

    REQUIRE(f.confusion.rows() == h.meta.activity_count);
    double total = 0.0, diag = 0.0;
    for (size_t i = 0; i < f.confusion.rows(); ++i) {
      for (size_t j = 0; j < f.confusion.cols(); ++j) {
        total += f.confusion(i, j);
        if (i == j) diag += f.confusion(i, j);
      }
    }
    CHECK(total == static_cast<double>(kMinutesPerDay));
    CHECK(diag == total);
  }
}

TEST_CASE("aggregates equal the arithmetic mean and population std of folds") {
  HouseData h = fixture_house(5, 11);
  BenchmarkReport r = run_benchmark(h, ModelKind::NaiveBayes, EncodingKind::LastFired,
                                    quick_config(), 0);
  const ModelRow& row = r.rows[0];
  double sum = 0.0;
  for (const FoldResult& f : row.folds) sum += f.accuracy;
  const double mean = sum / static_cast<double>(row.folds.size());
  double var = 0.0;
  for (const FoldResult& f : row.folds) {
    var += (f.accuracy - mean) * (f.accuracy - mean);
  }
  var /= static_cast<double>(row.folds.size());
  CHECK(std::fabs(row.mean_pct - 100.0 * mean) < 1e-12);
  CHECK(std::fabs(row.std_pct - 100.0 * std::sqrt(var)) < 1e-12);

  // confusion trace equals the accuracy for every fold
  for (const FoldResult& f : row.folds) {
    double total = 0.0, diag = 0.0;
    for (size_t i = 0; i < f.confusion.rows(); ++i) {
      for (size_t j = 0; j < f.confusion.cols(); ++j) {
        total += f.confusion(i, j);
        if (i == j) diag += f.confusion(i, j);
      }
    }
    CHECK(std::fabs(diag / total - f.accuracy) < 1e-12);
  }
}

TEST_CASE("text report renders the published columns verbatim") {
  BenchmarkReport r;
  r.house.name = "A";
  r.encoding = EncodingKind::Raw;
  ModelRow row;
  row.kind = ModelKind::Lstm;
  row.mean_pct = 90.0;
  row.std_pct = 4.0;
  row.folds.resize(2);
  r.rows.push_back(row);
  r.reference_rows = reference_table("A", EncodingKind::Raw);

  const std::string want =
      "house A, raw encoding, 2 folds\n"
      "model        accuracy  reference\n"
      "Naive Bayes  --        77.1±20.8\n"
      "HMM          --        59.1±28.7\n"
      "HSMM         --        59.5±29.0\n"
      "CRF          --        89.8±8.5\n"
      "LSTM         90.0±4.0  89.8±8.2\n";
  CHECK(emit_report(r, ReportFormat::Text) == want);
}

TEST_CASE("measured rows without a published twin still print") {
  BenchmarkReport r;
  r.house.name = "synth";
  r.encoding = EncodingKind::LastFired;
  ModelRow row;
  row.kind = ModelKind::Oracle;
  row.mean_pct = 100.0;
  row.std_pct = 0.0;
  row.folds.resize(3);
  r.rows.push_back(row);

  const std::string want =
      "house synth, last-fired encoding, 3 folds\n"
      "model   accuracy   reference\n"
      "Oracle  100.0±0.0  --\n";
  CHECK(emit_report(r, ReportFormat::Text) == want);
}

TEST_CASE("csv report has a header plus one row per fold") {
  BenchmarkReport r;
  r.house.name = "A";
  r.encoding = EncodingKind::Raw;
  ModelRow row;
  row.kind = ModelKind::Lstm;
  FoldResult f1, f2;
  f1.test_date = days_from_civil(2008, 2, 25);
  f1.encoding = EncodingKind::Raw;
  f1.accuracy = 0.5;
  f2.test_date = days_from_civil(2008, 2, 26);
  f2.encoding = EncodingKind::Raw;
  f2.accuracy = 1.0;
  row.folds = {f1, f2};
  r.rows.push_back(row);

  const std::string want =
      "house,model,encoding,fold_date,accuracy\n"
      "A,lstm,raw,2008-02-25,0.5\n"
      "A,lstm,raw,2008-02-26,1\n";
  CHECK(emit_report(r, ReportFormat::Csv) == want);

  BenchmarkReport empty;
  empty.house.name = "A";
  CHECK(emit_report(empty, ReportFormat::Csv) == "house,model,encoding,fold_date,accuracy\n");
}

TEST_CASE("reference table spot checks against the published numbers") {
  std::vector<ReferenceRow> braw = reference_table("B", EncodingKind::Raw);
  REQUIRE(braw.size() == 5);
  CHECK(braw[0].model == "Naive Bayes");
  CHECK(braw[4].model == "LSTM");
  CHECK(braw[4].mean_pct == 85.7);
  CHECK(braw[4].std_pct == 14.3);
  CHECK(braw[4].cell == "85.7±14.3");

  std::vector<ReferenceRow> clast = reference_table("C", EncodingKind::LastFired);
  CHECK(clast[1].model == "HMM");
  CHECK(clast[1].mean_pct == 83.9);
  CHECK(clast[1].std_pct == 13.9);

  std::vector<ReferenceRow> araw = reference_table("A", EncodingKind::Raw);
  CHECK(araw[0].mean_pct == 77.1);
  CHECK(araw[0].std_pct == 20.8);
  CHECK(araw[2].model == "HSMM");

  std::vector<ReferenceRow> craw = reference_table("C", EncodingKind::Raw);
  CHECK(craw[4].cell == "64.22±21.9");
  CHECK(craw[4].mean_pct == 64.22);

  CHECK_THROWS_AS(reference_table("D", EncodingKind::Raw), InputError);
}

TEST_CASE("published house facts") {
  std::span<const HouseFacts> facts = published_house_facts();
  REQUIRE(facts.size() == 3);
  CHECK(std::string(facts[0].name) == "A");
  CHECK(facts[0].days == 25);
  CHECK(facts[0].sensors == 14);
  CHECK(facts[0].activities == 10);
  CHECK(facts[1].days == 14);
  CHECK(facts[1].sensors == 23);
  CHECK(facts[1].activities == 13);
  CHECK(facts[2].days == 19);
  CHECK(facts[2].sensors == 21);
  CHECK(facts[2].activities == 16);
}

TEST_CASE("benchmarks are deterministic across runs and thread counts") {
  HouseData h = fixture_house(4, 23);
  const ModelKind kinds[] = {ModelKind::NaiveBayes, ModelKind::Crf};
  BenchmarkConfig cfg = quick_config();

  BenchmarkReport a = run_benchmark(h, kinds, EncodingKind::LastFired, cfg, 9);
  BenchmarkReport b = run_benchmark(h, kinds, EncodingKind::LastFired, cfg, 9);
  CHECK(emit_report(a, ReportFormat::Csv) == emit_report(b, ReportFormat::Csv));

  cfg.threads = 3;
  BenchmarkReport c = run_benchmark(h, kinds, EncodingKind::LastFired, cfg, 9);
  CHECK(emit_report(a, ReportFormat::Csv) == emit_report(c, ReportFormat::Csv));
  CHECK(emit_report(a, ReportFormat::Text) == emit_report(c, ReportFormat::Text));
}

TEST_CASE("synthetic houses get no reference rows") {
  HouseData h = fixture_house(3, 31);
  BenchmarkReport r = run_benchmark(h, ModelKind::NaiveBayes, EncodingKind::Raw,
                                    quick_config(), 0);
  CHECK(r.reference_rows.empty());
}
