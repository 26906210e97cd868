#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "mfgp/adam.hpp"
#include "mfgp/net.hpp"

namespace mfgp {

/// Binary layout (little-endian):
///   "MFGPCKPT" | u32 version | u32 0 | u64 d_h, d_1, d_2 | u64 step
///   | f64 lr, beta1, beta2, eps | u64 adam steps | u64 n
///   | f64[n] params | f64[n] first moment | f64[n] second moment
///   | u64 FNV-1a of everything before it
struct Checkpoint {
  NetParams params;
  AdamState adam;
  std::uint64_t step = 0;
  bool operator==(const Checkpoint&) const = default;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string encode_checkpoint(const Checkpoint& ckpt);
/// Throws CheckpointError on bad magic, version mismatch, truncation, or
/// checksum failure; nothing is returned unless the whole file validates.
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mfgp
