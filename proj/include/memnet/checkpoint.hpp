#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "memnet/embed.hpp"
#include "memnet/model.hpp"

namespace memnet {

inline constexpr int kCheckpointVersion = 1;

/// Text checkpoint:
///
///   memnet-checkpoint 1
///   dim <d>
///   classes 3
///   hops <h>
///   mode <none|1|2|3|4>
///   max_len <n>
///   model1_hop_index <0|1>
///   oov_seed <u64>
///   block <name> <count>
///   <count values, %.17g>
///   ...
///   oov <count>
///   <word> <d values>
///   end
///
/// Doubles are printed with 17 significant digits, which round-trips exactly.
struct Checkpoint {
  ModelConfig config;
  MemNetParams params;
  std::uint64_t oov_seed = 0;
  std::vector<std::pair<std::string, std::vector<double>>> oov;
};

Checkpoint make_checkpoint(const ModelConfig& config, const MemNetParams& params,
                           const EmbeddingTable& table);

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Re-adds the saved OOV rows to a freshly loaded table. Throws
/// ConfigMismatchError when dimensions or seeds disagree.
void restore_oov(const Checkpoint& ckpt, EmbeddingTable& table);

/// %.17g
std::string format_double(double v);

}  // namespace memnet
