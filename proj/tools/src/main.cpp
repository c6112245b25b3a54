#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "har/error.hpp"
#include "har_cli/run_config.hpp"

namespace {

// 0 = success, 1 = numerical or check failure, 2 = bad input or config.
constexpr int kExitNumeric = 1;
constexpr int kExitInput = 2;

}  // namespace

int main(int argc, char** argv) {
  har::RunConfig cfg;
  CLI::App app{"activity recognition from binary home sensors"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags override it");
  app.allow_config_extras(false);

  app.add_option("--house", cfg.house, "house name used in reports");
  app.add_option("--events", cfg.events_path, "sensor events file");
  app.add_option("--annotations", cfg.annotations_path, "activity annotations file");
  app.add_option("--meta", cfg.meta_path, "sensor/activity names file");
  app.add_option("--model", cfg.model, "lstm, nb, hmm, crf, or all")
      ->check(CLI::IsMember({"lstm", "nb", "hmm", "crf", "all", "oracle"}));
  app.add_option("--encoding", cfg.encoding, "raw or last-fired")
      ->check(CLI::IsMember({"raw", "last-fired"}));
  app.add_option("--seed", cfg.seed, "master RNG seed");
  app.add_option("--epochs", cfg.epochs, "training epochs");
  app.add_option("--hidden", cfg.hidden, "LSTM hidden size");
  app.add_option("--unroll", cfg.unroll, "LSTM unroll length");
  app.add_option("--lr", cfg.lr, "learning rate");
  app.add_option("--threads", cfg.threads, "folds trained concurrently")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out_dir, "output directory");

  app.add_option("--alpha", cfg.alpha, "NB/HMM smoothing");
  app.add_option("--peephole", cfg.peephole, "vector or matrix peepholes")
      ->check(CLI::IsMember({"vector", "matrix"}));
  app.add_flag("--no-carry", cfg.no_carry, "reset LSTM state at window boundaries");
  app.add_option("--crf-epochs", cfg.crf_epochs, "CRF epochs (benchmark all)");
  app.add_option("--crf-lr", cfg.crf_lr, "CRF learning rate (benchmark all)");
  app.add_option("--crf-l2", cfg.crf_l2, "CRF L2 penalty");
  app.add_option("--synth-sensors", cfg.synth_sensors, "synth: sensor count");
  app.add_option("--synth-activities", cfg.synth_activities, "synth: activity count");
  app.add_option("--synth-days", cfg.synth_days, "synth: day count");

  CLI::App* validate = app.add_subcommand("validate", "parse a dataset and print its shape");
  CLI::App* train = app.add_subcommand("train", "train one model and save it");
  CLI::App* benchmark = app.add_subcommand("benchmark", "leave-one-day-out accuracy tables");
  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference check of LSTM and CRF gradients");
  CLI::App* synth = app.add_subcommand("synth", "write a synthetic fixture dataset");
  for (CLI::App* sub : {validate, train, benchmark, gradcheck, synth}) sub->fallthrough();
  gradcheck->add_flag("--inject-fault", cfg.inject_fault, "corrupt one gradient entry")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (validate->parsed()) return har::cmd_validate(cfg);
    if (train->parsed()) return har::cmd_train(cfg);
    if (benchmark->parsed()) return har::cmd_benchmark(cfg);
    if (gradcheck->parsed()) return har::cmd_gradcheck(cfg);
    if (synth->parsed()) return har::cmd_synth(cfg);
  } catch (const har::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return 0;
}
