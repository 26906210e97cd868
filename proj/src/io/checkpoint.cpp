#include "mfgp/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mfgp/error.hpp"
#include "mfgp/hash.hpp"

namespace mfgp {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

constexpr char kMagic[8] = {'M', 'F', 'G', 'P', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  template <class T>
  void put(T v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    buf_.append(p, sizeof(T));
  }
  void put_array(std::span<const double> v) {
    buf_.append(reinterpret_cast<const char*>(v.data()), v.size_bytes());
  }
  void put_raw(const char* p, std::size_t n) { buf_.append(p, n); }
  std::string& str() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view b) : b_(b) {}
  template <class T>
  T get() {
    T v;
    need(sizeof(T));
    std::memcpy(&v, b_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  void get_array(std::span<double> out) {
    need(out.size_bytes());
    std::memcpy(out.data(), b_.data() + pos_, out.size_bytes());
    pos_ += out.size_bytes();
  }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw CheckpointError("checkpoint is truncated");
  }
  std::string_view b_;
  std::size_t pos_ = 0;
};

std::uint64_t checksum(std::string_view bytes) {
  return fnv1a({reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()});
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& c) {
  const NetDims& d = c.params.dims();
  const std::size_t n = c.params.flat().size();
  if (c.adam.first_moment.size() != n || c.adam.second_moment.size() != n) {
    throw ParameterError("Adam state does not match the parameter count");
  }
  Writer w;
  w.put_raw(kMagic, sizeof kMagic);
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put<std::uint32_t>(0);
  w.put<std::uint64_t>(d.d_h);
  w.put<std::uint64_t>(d.d_1);
  w.put<std::uint64_t>(d.d_2);
  w.put<std::uint64_t>(c.step);
  w.put<double>(c.adam.hyper.learning_rate);
  w.put<double>(c.adam.hyper.beta1);
  w.put<double>(c.adam.hyper.beta2);
  w.put<double>(c.adam.hyper.eps);
  w.put<std::uint64_t>(c.adam.step_count);
  w.put<std::uint64_t>(n);
  w.put_array(c.params.flat());
  w.put_array(c.adam.first_moment);
  w.put_array(c.adam.second_moment);
  const std::uint64_t sum = checksum(w.str());
  w.put<std::uint64_t>(sum);
  return std::move(w.str());
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw CheckpointError("not a checkpoint file (bad magic)");
  }
  Reader r(bytes.substr(sizeof kMagic));
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw CheckpointError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  }
  r.get<std::uint32_t>();
  NetDims d;
  d.d_h = r.get<std::uint64_t>();
  d.d_1 = r.get<std::uint64_t>();
  d.d_2 = r.get<std::uint64_t>();
  const auto step = r.get<std::uint64_t>();
  AdamHyper hyper;
  hyper.learning_rate = r.get<double>();
  hyper.beta1 = r.get<double>();
  hyper.beta2 = r.get<double>();
  hyper.eps = r.get<double>();
  const auto adam_steps = r.get<std::uint64_t>();
  const auto n = r.get<std::uint64_t>();
  if (d.d_h == 0 || d.d_1 == 0 || d.d_2 == 0 || d.d_h > 4096 || d.d_1 > 4096 || d.d_2 > 4096 ||
      n != parameter_count(d)) {
    throw CheckpointError("checkpoint header is corrupt");
  }
  // Validate length and checksum before allocating anything sized by the file.
  const std::size_t body = sizeof kMagic + r.pos() + 3 * n * sizeof(double);
  if (bytes.size() != body + sizeof(std::uint64_t)) {
    throw CheckpointError(bytes.size() < body + sizeof(std::uint64_t) ? "checkpoint is truncated"
                                                                      : "checkpoint has trailing data");
  }
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + body, sizeof stored);
  if (stored != checksum(bytes.substr(0, body))) throw CheckpointError("checkpoint checksum mismatch");

  Checkpoint c;
  c.params = NetParams(d);
  c.adam = AdamState(hyper, n);
  c.adam.step_count = adam_steps;
  c.step = step;
  r.get_array(c.params.flat());
  r.get_array(c.adam.first_moment);
  r.get_array(c.adam.second_moment);
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const std::string bytes = encode_checkpoint(ckpt);
  const auto tmp = std::filesystem::path(path).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace mfgp
