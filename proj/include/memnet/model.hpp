#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memnet/corpus.hpp"
#include "memnet/embed.hpp"
#include "memnet/ndcore.hpp"

namespace memnet {

enum class LocationMode { None = 0, Model1 = 1, Model2 = 2, Model3 = 3, Model4 = 4 };

std::string_view to_string(LocationMode mode);
/// "none", "0".."4" or "model1".."model4".
std::optional<LocationMode> location_mode_from_string(std::string_view s);
inline bool has_location_table(LocationMode m) {
  return m == LocationMode::Model3 || m == LocationMode::Model4;
}

inline constexpr std::size_t kDefaultMaxLen = 100;

struct ModelConfig {
  std::size_t dim = 0;
  std::size_t hops = 1;
  LocationMode mode = LocationMode::None;
  /// Rows of the learned location table; larger distances use the last row.
  std::size_t max_len = kDefaultMaxLen;
  /// Model 1 only: evaluate the ramp with the hop number in place of the
  /// component index, giving one scalar weight per (word, hop).
  bool model1_hop_index = false;

  bool operator==(const ModelConfig&) const = default;
};

/// Learnable parameters. The attention and linear layers are shared by all
/// hops, so nothing here depends on the hop count.
struct MemNetParams {
  Matrix w_att;   // 1 x 2d, [memory half | query half]
  double b_att = 0.0;
  Matrix w_lin;   // d x d
  Matrix w_cls;   // C x d
  Vector b_cls;   // C
  std::optional<Matrix> loc_table;  // max_len x d, Models 3 and 4 only

  bool operator==(const MemNetParams&) const = default;
};

/// Gradients have exactly the parameter layout.
using Gradients = MemNetParams;

/// All-zero parameters with the shapes implied by the config.
MemNetParams zero_params(const ModelConfig& config);

/// Named flat views over every parameter block, in a fixed order:
/// W_att, b_att, W_lin, W_cls, b_cls, loc_table.
struct ParamBlock {
  std::string_view name;
  std::span<double> values;
};
struct ConstParamBlock {
  std::string_view name;
  std::span<const double> values;
};
std::vector<ParamBlock> param_blocks(MemNetParams& params);
std::vector<ConstParamBlock> param_blocks(const MemNetParams& params);

std::size_t parameter_count(const MemNetParams& params);
std::size_t parameter_count(const ModelConfig& config);

struct AttentionResult {
  Vector output;   // sum_i alpha_i m_i
  Vector weights;  // alpha
  Vector scores;   // g = tanh(W_att [m_i; q] + b_att)
};

struct HopTrace {
  Vector query;  // x_{t-1}
  AttentionResult attention;
  Vector output;  // x_t = attention.output + W_lin x_{t-1}
};

struct ForwardTrace {
  /// One matrix, or one per hop when Model 1 uses the hop-index ramp.
  std::vector<Matrix> memories;
  std::vector<HopTrace> hops;
  Vector logits;
  Vector probs;

  const Matrix& memory(std::size_t hop) const {
    return memories.size() == 1 ? memories.front() : memories[hop];
  }
};

/// Weight applied to a context row under Model 1 for vector component j
/// (1-based), or for hop j when the hop-index reading is used.
double model1_weight(std::size_t location, std::size_t sentence_length, std::size_t j,
                     std::size_t dim);
/// Model 2 scalar weight 1 - l/n.
double model2_weight(std::size_t location, std::size_t sentence_length);
/// Location table row used for a distance, clamped to the last row.
std::size_t location_row(std::size_t location, std::size_t max_len);

/// Context rows (aspect excluded) in sentence order, location-encoded per mode.
/// hop is 0-based and only matters for the Model 1 hop-index variant.
Matrix build_memory(const EncodedInstance& instance, const EmbeddingTable& table,
                    const ModelConfig& config, const MemNetParams& params, std::size_t hop = 0);

AttentionResult attention(const Matrix& memory, std::span<const double> query,
                          const MemNetParams& params);

ForwardTrace forward(const EncodedInstance& instance, const EmbeddingTable& table,
                     const ModelConfig& config, const MemNetParams& params);

/// Argmax of P; ties go to the lowest class index.
Polarity predict(const ForwardTrace& trace);
Polarity argmax_class(std::span<const double> probs);

/// Class probabilities for an instance with no context words: every hop's
/// attention output is zero, so only the linear path reaches the classifier.
Vector classify_without_memory(const EncodedInstance& instance, const EmbeddingTable& table,
                               const ModelConfig& config, const MemNetParams& params);

/// forward() for ordinary instances, classify_without_memory() otherwise.
Polarity predict_instance(const EncodedInstance& instance, const EmbeddingTable& table,
                          const ModelConfig& config, const MemNetParams& params);

}  // namespace memnet
