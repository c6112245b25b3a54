#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "har/error.hpp"
#include "har/model_io.hpp"
#include "har/rng.hpp"

using namespace har;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("har_io_" + std::to_string(getpid()));
    fs::create_directories(d);
    return d;
  }();
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

LstmModel tiny_lstm(PeepholeKind peephole = PeepholeKind::Vector) {
  HouseMeta meta = synth_meta(4, 3);
  std::vector<DayGrid> days = synth_house(meta, 1, 3);
  TrainConfig cfg;
  cfg.hidden_size = 5;
  cfg.epochs = 1;
  cfg.peephole = peephole;
  LstmModel m = lstm_train(days, meta.activity_count, cfg);
  m.encoding = EncodingKind::LastFired;
  return m;
}

}  // namespace

TEST_CASE("lstm models round-trip bitwise") {
  LstmModel m = tiny_lstm();
  const std::string path = temp_path("rt.lstm");
  save_lstm_model(path, m);
  LstmModel back = load_lstm_model(path);

  CHECK(back.params.dims() == m.params.dims());
  CHECK(back.params.flat() == m.params.flat());
  CHECK(back.encoding == EncodingKind::LastFired);

  HouseMeta meta = synth_meta(4, 3);
  std::vector<DayGrid> days = synth_house(meta, 1, 8);
  CHECK(lstm_predict(back, days[0]) == lstm_predict(m, days[0]));
}

TEST_CASE("matrix peepholes survive the flags byte") {
  LstmModel m = tiny_lstm(PeepholeKind::Matrix);
  const std::string path = temp_path("rt_matrix.lstm");
  save_lstm_model(path, m);
  LstmModel back = load_lstm_model(path);
  CHECK(back.params.dims().peephole == PeepholeKind::Matrix);
  CHECK(back.params.flat() == m.params.flat());
}

TEST_CASE("nb models round-trip bitwise") {
  HouseMeta meta = synth_meta(6, 4);
  std::vector<DayGrid> days = synth_house(meta, 2, 5);
  NbModel m = nb_train(days, meta.activity_count);
  const std::string path = temp_path("rt.nb");
  save_nb_model(path, m, EncodingKind::Raw);
  LoadedNb back = load_nb_model(path);
  CHECK(back.model.prior == m.prior);
  CHECK(back.model.theta == m.theta);
  CHECK(back.encoding == EncodingKind::Raw);
  CHECK(nb_predict_day(back.model, days[0]) == nb_predict_day(m, days[0]));
}

TEST_CASE("hmm models round-trip bitwise") {
  HouseMeta meta = synth_meta(5, 3);
  std::vector<DayGrid> days = synth_house(meta, 2, 9);
  HmmModel m = hmm_train(days, meta.activity_count);
  const std::string path = temp_path("rt.hmm");
  save_hmm_model(path, m, EncodingKind::LastFired);
  LoadedHmm back = load_hmm_model(path);
  CHECK(back.model.pi == m.pi);
  CHECK(back.model.trans == m.trans);
  CHECK(back.model.theta == m.theta);
  CHECK(back.encoding == EncodingKind::LastFired);
  CHECK(hmm_viterbi(back.model, days[0]) == hmm_viterbi(m, days[0]));
}

TEST_CASE("crf models round-trip bitwise") {
  Rng rng(99);
  const size_t L = 4, N = 6;
  std::vector<double> w(CrfModel::flat_size(L, N));
  for (double& v : w) v = rng.uniform(-1.0, 1.0);
  CrfModel m(L, N, w);
  const std::string path = temp_path("rt.crf");
  save_crf_model(path, m, EncodingKind::LastFired);
  LoadedCrf back = load_crf_model(path);
  CHECK(back.model.classes() == L);
  CHECK(back.model.sensors() == N);
  CHECK(back.model.flat() == m.flat());
  CHECK(back.encoding == EncodingKind::LastFired);
}

TEST_CASE("loading rejects a wrong magic") {
  HouseMeta meta = synth_meta(3, 2);
  std::vector<DayGrid> days = synth_house(meta, 1, 2);
  NbModel m = nb_train(days, meta.activity_count);
  const std::string path = temp_path("magic.nb");
  save_nb_model(path, m, EncodingKind::Raw);
  CHECK_THROWS_WITH_AS(load_lstm_model(path), doctest::Contains("magic"), InputError);
}

TEST_CASE("loading rejects truncated files") {
  LstmModel m = tiny_lstm();
  const std::string path = temp_path("trunc.lstm");
  save_lstm_model(path, m);
  std::string bytes = slurp(path);

  spit(path, bytes.substr(0, 10));  // inside the header
  CHECK_THROWS_WITH_AS(load_lstm_model(path), doctest::Contains("truncated"), InputError);

  spit(path, bytes.substr(0, bytes.size() - 3));  // inside the arrays
  CHECK_THROWS_WITH_AS(load_lstm_model(path), doctest::Contains("truncated"), InputError);
}

TEST_CASE("loading rejects trailing bytes") {
  LstmModel m = tiny_lstm();
  const std::string path = temp_path("trail.lstm");
  save_lstm_model(path, m);
  std::string bytes = slurp(path);
  bytes.push_back('\0');
  spit(path, bytes);
  CHECK_THROWS_WITH_AS(load_lstm_model(path), doctest::Contains("trailing"), InputError);
}

TEST_CASE("loading rejects an unknown format version") {
  LstmModel m = tiny_lstm();
  const std::string path = temp_path("ver.lstm");
  save_lstm_model(path, m);
  std::string bytes = slurp(path);
  bytes[4] = 2;
  spit(path, bytes);
  CHECK_THROWS_WITH_AS(load_lstm_model(path), doctest::Contains("version"), InputError);
}

TEST_CASE("loading rejects a zero dimension") {
  LstmModel m = tiny_lstm();
  const std::string path = temp_path("zero.lstm");
  save_lstm_model(path, m);
  std::string bytes = slurp(path);
  bytes[12] = bytes[13] = bytes[14] = bytes[15] = 0;  // hidden size
  spit(path, bytes);
  CHECK_THROWS_WITH_AS(load_lstm_model(path), doctest::Contains("zero dimension"), InputError);
}

TEST_CASE("loading rejects an unknown encoding byte") {
  LstmModel m = tiny_lstm();
  const std::string path = temp_path("enc.lstm");
  save_lstm_model(path, m);
  std::string bytes = slurp(path);
  bytes[20] = 7;
  spit(path, bytes);
  CHECK_THROWS_WITH_AS(load_lstm_model(path), doctest::Contains("encoding"), InputError);
}

TEST_CASE("loading a missing file names the path") {
  const std::string path = temp_path("missing.model");
  CHECK_THROWS_WITH_AS(load_lstm_model(path), doctest::Contains("missing.model"), InputError);
}

TEST_CASE("shape guard compares the file against the house") {
  HouseMeta meta = synth_meta(6, 4);
  CHECK_NOTHROW(check_model_shape("m.bin", 6, 5, meta));
  CHECK_THROWS_WITH_AS(check_model_shape("m.bin", 7, 5, meta), doctest::Contains("m.bin"),
                       InputError);
  CHECK_THROWS_AS(check_model_shape("m.bin", 6, 3, meta), InputError);
}

TEST_CASE("atomic text writes leave no temp file behind") {
  const std::string path = temp_path("note.txt");
  write_file_atomic(path, "hello\n");
  CHECK(slurp(path) == "hello\n");
  CHECK_FALSE(fs::exists(path + ".tmp"));

  write_file_atomic(path, "replaced\n");
  CHECK(slurp(path) == "replaced\n");
}
