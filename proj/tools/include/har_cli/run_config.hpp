#pragma once

#include <cstdint>
#include <string>

namespace har {

// Everything the subcommands consume. Values come from built-in defaults,
// then the config file, then command-line flags (last wins). Numeric
// fields use -1 for "model default".
struct RunConfig {
  std::string house;  // display name; empty picks a per-command default

  std::string events_path;
  std::string annotations_path;
  std::string meta_path;

  std::string model = "lstm";    // lstm | nb | hmm | crf | all | oracle
  std::string encoding = "raw";  // raw | last-fired
  uint64_t seed = 0;
  int64_t epochs = -1;
  int64_t hidden = -1;
  int64_t unroll = -1;
  double lr = -1.0;
  int threads = 1;
  std::string out_dir = ".";

  double alpha = 0.01;               // NB/HMM smoothing
  std::string peephole = "vector";   // vector | matrix
  bool no_carry = false;             // drop LSTM state between windows
  int64_t crf_epochs = -1;
  double crf_lr = -1.0;
  double crf_l2 = 1e-4;

  uint64_t synth_sensors = 10;
  uint64_t synth_activities = 6;
  uint64_t synth_days = 5;

  bool inject_fault = false;  // gradcheck test hook
};

int cmd_validate(const RunConfig& cfg);
int cmd_train(const RunConfig& cfg);
int cmd_benchmark(const RunConfig& cfg);
int cmd_gradcheck(const RunConfig& cfg);
int cmd_synth(const RunConfig& cfg);

}  // namespace har
