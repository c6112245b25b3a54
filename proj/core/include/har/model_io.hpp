#pragma once

#include <string>

#include "har/crf.hpp"
#include "har/dataset.hpp"
#include "har/hmm.hpp"
#include "har/lstm.hpp"
#include "har/nb.hpp"

namespace har {

// Versioned flat binary envelope, shared by every model kind:
//   magic[4] | u32 version | u32 N | u32 H | u32 L | u8 encoding |
//   u8 flags | u16 reserved | parameter arrays as little-endian f64
// Magic selects the kind: SHAR (LSTM), SHNB, SHHM, SHCR. H is 0 for the
// baselines. flags bit 0 marks full-matrix peepholes. Arrays follow the
// field order of each model struct. Writes go to a temp file renamed on
// success.

constexpr uint32_t kModelFormatVersion = 1;

void save_lstm_model(const std::string& path, const LstmModel& model);
void save_nb_model(const std::string& path, const NbModel& model, EncodingKind enc);
void save_hmm_model(const std::string& path, const HmmModel& model, EncodingKind enc);
void save_crf_model(const std::string& path, const CrfModel& model, EncodingKind enc);

LstmModel load_lstm_model(const std::string& path);

struct LoadedNb {
  NbModel model;
  EncodingKind encoding;
};
struct LoadedHmm {
  HmmModel model;
  EncodingKind encoding;
};
struct LoadedCrf {
  CrfModel model;
  EncodingKind encoding;
};

LoadedNb load_nb_model(const std::string& path);
LoadedHmm load_hmm_model(const std::string& path);
LoadedCrf load_crf_model(const std::string& path);

// Throws InputError when the stored shape does not match the dataset.
void check_model_shape(const std::string& path, size_t n_from_file, size_t l_from_file,
                       const HouseMeta& meta);

// Atomic text write used by the CLI: temp file + rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace har
