#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "memnet/embed.hpp"
#include "memnet/model.hpp"

namespace memnet {

inline constexpr double kInitBound = 0.01;
inline constexpr double kMinProbability = 1e-12;

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t epochs = 1;
  std::uint64_t seed = 1;
  bool shuffle = true;
};

/// -log P[gold], with P[gold] floored at 1e-12. *clamped is set when the floor applied.
double cross_entropy(std::span<const double> probs, Polarity gold, bool* clamped = nullptr);
double loss(const ForwardTrace& trace, Polarity gold, bool* clamped = nullptr);

/// Every learnable entry drawn i.i.d. from U(-0.01, 0.01).
MemNetParams init_params(const ModelConfig& config, std::uint64_t seed);

struct BackwardResult {
  double loss = 0.0;
  Gradients grads;
  bool clamped = false;
};

/// Analytic gradient of the per-instance cross entropy with respect to every
/// parameter block. Throws NumericError naming the first non-finite block.
BackwardResult backward(const EncodedInstance& instance, const EmbeddingTable& table,
                        const ModelConfig& config, const MemNetParams& params);

/// params -= lr * grads
void sgd_step(MemNetParams& params, const Gradients& grads, double learning_rate);

struct EpochRecord {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double train_accuracy = 0.0;
  double seconds = 0.0;
  std::size_t clamped = 0;
};

struct TrainResult {
  MemNetParams params;
  std::vector<EpochRecord> log;
  /// Instances without context words; they carry no attention signal and are skipped.
  std::size_t skipped_degenerate = 0;
};

using EpochCallback = std::function<void(const EpochRecord&, const MemNetParams&)>;

/// Per-instance SGD starting from init_params(config, train.seed). The
/// shuffle order comes from a generator derived from the same seed.
TrainResult train(const std::vector<EncodedInstance>& dataset, const EmbeddingTable& table,
                  const ModelConfig& model, const TrainConfig& train_config,
                  const EpochCallback& on_epoch = {});

/// Same loop starting from the given parameters.
TrainResult train_from(MemNetParams params, const std::vector<EncodedInstance>& dataset,
                       const EmbeddingTable& table, const ModelConfig& model,
                       const TrainConfig& train_config, const EpochCallback& on_epoch = {});

// Finite-difference oracle. Uses only forward() and loss(), never backward().

/// Central differences (L(θ+ε) - L(θ-ε)) / 2ε for every parameter entry.
Gradients numerical_gradient_serial(const EncodedInstance& instance, const EmbeddingTable& table,
                                    const ModelConfig& config, const MemNetParams& params,
                                    double eps = 1e-5);
/// Same values, entries distributed over OpenMP threads.
Gradients numerical_gradient(const EncodedInstance& instance, const EmbeddingTable& table,
                             const ModelConfig& config, const MemNetParams& params,
                             double eps = 1e-5);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::string_view worst_block;
  std::size_t worst_index = 0;
};

/// |a - n| / max(|a|, |n|, floor), maximised over all entries.
GradientCheck compare_gradients(const Gradients& analytic, const Gradients& numeric,
                                double floor = 1e-7);

}  // namespace memnet
