#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "memnet/corpus.hpp"
#include "memnet/embed.hpp"
#include "memnet/model.hpp"
#include "memnet/train.hpp"

namespace memnet {

struct EvalReport {
  double accuracy = 0.0;
  /// confusion[gold][predicted]
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> confusion{};
  std::size_t count = 0;

  std::size_t correct() const;
};

EvalReport accuracy(std::span<const Polarity> predictions, std::span<const Polarity> golds);

std::vector<Polarity> labels_of(const std::vector<Instance>& instances);
std::vector<Polarity> labels_of(const std::vector<EncodedInstance>& instances);

/// Most frequent label; ties go to the lowest class index.
Polarity majority_label(std::span<const Polarity> train_labels);
EvalReport majority_baseline(const std::vector<Instance>& train, const std::vector<Instance>& test);

/// Memory network predictions for every instance. The parallel version
/// splits instances over OpenMP threads; both return identical vectors.
std::vector<Polarity> predict_all_serial(const std::vector<EncodedInstance>& instances,
                                         const EmbeddingTable& table, const ModelConfig& config,
                                         const MemNetParams& params);
std::vector<Polarity> predict_all(const std::vector<EncodedInstance>& instances,
                                  const EmbeddingTable& table, const ModelConfig& config,
                                  const MemNetParams& params);

EvalReport evaluate(const std::vector<EncodedInstance>& instances, const EmbeddingTable& table,
                    const ModelConfig& config, const MemNetParams& params);

// ContextAVG: softmax(W (mean(context) + aspect) + b).

struct ContextAvgParams {
  Matrix w;  // C x d
  Vector b;  // C
};

ContextAvgParams init_context_avg(std::size_t dim, std::uint64_t seed);
/// mean of the context embeddings plus the aspect vector; aspect only when there is no context.
Vector context_avg_features(const EncodedInstance& instance, const EmbeddingTable& table);
Vector context_avg_probs(const ContextAvgParams& params, std::span<const double> features);
ContextAvgParams train_context_avg(const std::vector<EncodedInstance>& train,
                                   const EmbeddingTable& table, const TrainConfig& config);
std::vector<Polarity> predict_context_avg(const std::vector<EncodedInstance>& instances,
                                          const EmbeddingTable& table,
                                          const ContextAvgParams& params);
EvalReport context_avg_baseline(const std::vector<EncodedInstance>& train,
                                const std::vector<EncodedInstance>& test,
                                const EmbeddingTable& table, const TrainConfig& config);

struct SweepRow {
  std::size_t hops = 0;
  EvalReport report;
};

/// Trains one model per hop count with otherwise identical settings.
std::vector<SweepRow> hop_sweep(const std::vector<EncodedInstance>& train,
                                const std::vector<EncodedInstance>& test,
                                const EmbeddingTable& table, ModelConfig base,
                                const TrainConfig& train_config,
                                std::span<const std::size_t> hop_counts);

struct BenchRow {
  std::size_t hops = 0;
  double median_seconds = 0.0;
  std::vector<double> epoch_seconds;
};

/// Wall-clock seconds per SGD epoch for each hop count (median over
/// epochs_per_point >= 3 epochs). Runs single-threaded.
std::vector<BenchRow> bench_epochs(const std::vector<EncodedInstance>& dataset,
                                   const EmbeddingTable& table, std::span<const std::size_t> hops,
                                   LocationMode mode, std::size_t epochs_per_point = 3,
                                   std::uint64_t seed = 1);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of seconds on hops.
LinearFit fit_linear(const std::vector<BenchRow>& rows);

double median(std::vector<double> values);

}  // namespace memnet
