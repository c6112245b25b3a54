#include "har/model_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "har/error.hpp"

namespace har {
namespace {

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
  const uint64_t v = std::bit_cast<uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_array(std::string& out, const double* p, size_t n) {
  for (size_t i = 0; i < n; ++i) put_f64(out, p[i]);
}

struct Header {
  char magic[5] = {0, 0, 0, 0, 0};
  uint32_t version = kModelFormatVersion;
  uint32_t n_sensors = 0;
  uint32_t hidden = 0;
  uint32_t n_labels = 0;
  uint8_t encoding = 0;
  uint8_t flags = 0;
};

std::string encode_header(const char* magic, size_t n, size_t h, size_t l, EncodingKind enc,
                          uint8_t flags) {
  std::string out;
  out.append(magic, 4);
  put_u32(out, kModelFormatVersion);
  put_u32(out, static_cast<uint32_t>(n));
  put_u32(out, static_cast<uint32_t>(h));
  put_u32(out, static_cast<uint32_t>(l));
  out.push_back(static_cast<char>(enc == EncodingKind::LastFired ? 1 : 0));
  out.push_back(static_cast<char>(flags));
  out.push_back(0);
  out.push_back(0);
  return out;
}

void write_binary_atomic(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open '" + tmp + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InputError("short write to '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw InputError("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

class Reader {
 public:
  explicit Reader(const std::string& path) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open model file '" + path + "'");
    bytes_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  Header header(const char* expected_magic) {
    if (bytes_.size() < 24) throw InputError("model file '" + path_ + "' is truncated");
    Header h;
    std::memcpy(h.magic, bytes_.data(), 4);
    if (std::memcmp(h.magic, expected_magic, 4) != 0) {
      throw InputError("model file '" + path_ + "' has magic '" + std::string(h.magic, 4) +
                       "', expected '" + expected_magic + "'");
    }
    h.version = u32_at(4);
    if (h.version != kModelFormatVersion) {
      throw InputError("model file '" + path_ + "' has unsupported format version " +
                       std::to_string(h.version));
    }
    h.n_sensors = u32_at(8);
    h.hidden = u32_at(12);
    h.n_labels = u32_at(16);
    h.encoding = static_cast<uint8_t>(bytes_[20]);
    h.flags = static_cast<uint8_t>(bytes_[21]);
    if (h.encoding > 1) {
      throw InputError("model file '" + path_ + "' has unknown encoding byte " +
                       std::to_string(static_cast<int>(h.encoding)));
    }
    pos_ = 24;
    return h;
  }

  double f64() {
    if (pos_ + 8 > bytes_.size()) throw InputError("model file '" + path_ + "' is truncated");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(static_cast<uint8_t>(bytes_[pos_ + static_cast<size_t>(i)]))
           << (8 * i);
    }
    pos_ += 8;
    return std::bit_cast<double>(v);
  }

  void fill(double* dst, size_t n) {
    for (size_t i = 0; i < n; ++i) dst[i] = f64();
  }
  void fill(std::vector<double>& dst) { fill(dst.data(), dst.size()); }
  void fill(Matrix& dst) { fill(dst.data(), dst.size()); }

  void finish() {
    if (pos_ != bytes_.size()) {
      throw InputError("model file '" + path_ + "' has " +
                       std::to_string(bytes_.size() - pos_) + " trailing bytes");
    }
  }

 private:
  uint32_t u32_at(size_t off) const {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<uint8_t>(bytes_[off + static_cast<size_t>(i)]))
           << (8 * i);
    }
    return v;
  }

  std::string path_;
  std::string bytes_;
  size_t pos_ = 0;
};

EncodingKind decode_encoding(uint8_t b) {
  return b == 1 ? EncodingKind::LastFired : EncodingKind::Raw;
}

}  // namespace

void save_lstm_model(const std::string& path, const LstmModel& model) {
  const LstmDims& d = model.params.dims();
  const uint8_t flags = d.peephole == PeepholeKind::Matrix ? 1 : 0;
  std::string bytes = encode_header("SHAR", d.inputs, d.hidden, d.classes, model.encoding, flags);
  bytes.reserve(bytes.size() + 8 * model.params.size());
  put_array(bytes, model.params.flat().data(), model.params.size());
  write_binary_atomic(path, bytes);
}

LstmModel load_lstm_model(const std::string& path) {
  Reader r(path);
  const Header h = r.header("SHAR");
  if (h.n_sensors == 0 || h.hidden == 0 || h.n_labels == 0) {
    throw InputError("model file '" + path + "' has a zero dimension");
  }
  LstmDims dims{h.n_sensors, h.hidden, h.n_labels,
                (h.flags & 1) != 0 ? PeepholeKind::Matrix : PeepholeKind::Vector};
  LstmModel model;
  model.params = LstmParams(dims);
  r.fill(model.params.flat());
  r.finish();
  model.encoding = decode_encoding(h.encoding);
  model.cfg.hidden_size = dims.hidden;
  model.cfg.peephole = dims.peephole;
  return model;
}

void save_nb_model(const std::string& path, const NbModel& model, EncodingKind enc) {
  std::string bytes =
      encode_header("SHNB", model.theta.cols(), 0, model.prior.size(), enc, 0);
  put_array(bytes, model.prior.data(), model.prior.size());
  put_array(bytes, model.theta.data(), model.theta.size());
  write_binary_atomic(path, bytes);
}

LoadedNb load_nb_model(const std::string& path) {
  Reader r(path);
  const Header h = r.header("SHNB");
  LoadedNb out;
  out.model.prior.resize(h.n_labels);
  out.model.theta = Matrix(h.n_labels, h.n_sensors);
  r.fill(out.model.prior);
  r.fill(out.model.theta);
  r.finish();
  out.encoding = decode_encoding(h.encoding);
  return out;
}

void save_hmm_model(const std::string& path, const HmmModel& model, EncodingKind enc) {
  std::string bytes = encode_header("SHHM", model.theta.cols(), 0, model.pi.size(), enc, 0);
  put_array(bytes, model.pi.data(), model.pi.size());
  put_array(bytes, model.trans.data(), model.trans.size());
  put_array(bytes, model.theta.data(), model.theta.size());
  write_binary_atomic(path, bytes);
}

LoadedHmm load_hmm_model(const std::string& path) {
  Reader r(path);
  const Header h = r.header("SHHM");
  LoadedHmm out;
  out.model.pi.resize(h.n_labels);
  out.model.trans = Matrix(h.n_labels, h.n_labels);
  out.model.theta = Matrix(h.n_labels, h.n_sensors);
  r.fill(out.model.pi);
  r.fill(out.model.trans);
  r.fill(out.model.theta);
  r.finish();
  out.encoding = decode_encoding(h.encoding);
  return out;
}

void save_crf_model(const std::string& path, const CrfModel& model, EncodingKind enc) {
  std::string bytes = encode_header("SHCR", model.sensors(), 0, model.classes(), enc, 0);
  put_array(bytes, model.flat().data(), model.size());
  write_binary_atomic(path, bytes);
}

LoadedCrf load_crf_model(const std::string& path) {
  Reader r(path);
  const Header h = r.header("SHCR");
  LoadedCrf out{CrfModel(h.n_labels, h.n_sensors), EncodingKind::Raw};
  r.fill(out.model.flat());
  r.finish();
  out.encoding = decode_encoding(h.encoding);
  return out;
}

void check_model_shape(const std::string& path, size_t n_from_file, size_t l_from_file,
                       const HouseMeta& meta) {
  if (n_from_file != meta.sensor_count || l_from_file != meta.activity_count) {
    throw InputError("model file '" + path + "' was trained for " +
                     std::to_string(n_from_file) + " sensors / " +
                     std::to_string(l_from_file) + " activities, but house '" + meta.name +
                     "' has " + std::to_string(meta.sensor_count) + " / " +
                     std::to_string(meta.activity_count));
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  write_binary_atomic(path, content);
}

}  // namespace har
