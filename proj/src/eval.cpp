#include "memnet/eval.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "memnet/errors.hpp"

namespace memnet {

std::size_t EvalReport::correct() const {
  std::size_t n = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) n += confusion[c][c];
  return n;
}

EvalReport accuracy(std::span<const Polarity> predictions, std::span<const Polarity> golds) {
  if (predictions.size() != golds.size()) {
    throw InputError("accuracy: " + std::to_string(predictions.size()) + " predictions for " +
                     std::to_string(golds.size()) + " labels");
  }
  if (golds.empty()) throw InputError("accuracy: no instances");
  EvalReport r;
  r.count = golds.size();
  for (std::size_t i = 0; i < golds.size(); ++i) {
    ++r.confusion[class_index(golds[i])][class_index(predictions[i])];
  }
  r.accuracy = static_cast<double>(r.correct()) / static_cast<double>(r.count);
  return r;
}

std::vector<Polarity> labels_of(const std::vector<Instance>& instances) {
  std::vector<Polarity> out;
  out.reserve(instances.size());
  for (const auto& i : instances) out.push_back(i.label);
  return out;
}

std::vector<Polarity> labels_of(const std::vector<EncodedInstance>& instances) {
  std::vector<Polarity> out;
  out.reserve(instances.size());
  for (const auto& i : instances) out.push_back(i.label);
  return out;
}

Polarity majority_label(std::span<const Polarity> train_labels) {
  if (train_labels.empty()) throw InputError("majority baseline needs a non-empty training set");
  std::array<std::size_t, kNumClasses> counts{};
  for (auto p : train_labels) ++counts[class_index(p)];
  const auto it = std::max_element(counts.begin(), counts.end());
  return polarity_from_index(static_cast<std::size_t>(it - counts.begin()));
}

EvalReport majority_baseline(const std::vector<Instance>& train, const std::vector<Instance>& test) {
  const auto train_labels = labels_of(train);
  const Polarity label = majority_label(train_labels);
  const std::vector<Polarity> predictions(test.size(), label);
  return accuracy(predictions, labels_of(test));
}

std::vector<Polarity> predict_all_serial(const std::vector<EncodedInstance>& instances,
                                         const EmbeddingTable& table, const ModelConfig& config,
                                         const MemNetParams& params) {
  std::vector<Polarity> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) out.push_back(predict_instance(inst, table, config, params));
  return out;
}

std::vector<Polarity> predict_all(const std::vector<EncodedInstance>& instances,
                                  const EmbeddingTable& table, const ModelConfig& config,
                                  const MemNetParams& params) {
  std::vector<Polarity> out(instances.size());
  const auto n = static_cast<std::ptrdiff_t>(instances.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = predict_instance(instances[idx], table, config, params);
  }
  return out;
}

EvalReport evaluate(const std::vector<EncodedInstance>& instances, const EmbeddingTable& table,
                    const ModelConfig& config, const MemNetParams& params) {
  return accuracy(predict_all(instances, table, config, params), labels_of(instances));
}

ContextAvgParams init_context_avg(std::size_t dim, std::uint64_t seed) {
  ContextAvgParams p{Matrix(kNumClasses, dim), Vector(kNumClasses)};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-kInitBound, kInitBound);
  for (double& v : p.w.flat()) v = dist(rng);
  for (double& v : p.b) v = dist(rng);
  return p;
}

Vector context_avg_features(const EncodedInstance& instance, const EmbeddingTable& table) {
  Vector f = aspect_vector(table, instance);
  const std::size_t k = instance.context_size();
  if (k == 0) return f;
  Vector mean(table.dim());
  for (auto r : instance.context_rows) axpy_inplace(1.0, table.row(r), mean.span());
  axpy_inplace(1.0 / static_cast<double>(k), mean.span(), f.span());
  return f;
}

Vector context_avg_probs(const ContextAvgParams& params, std::span<const double> features) {
  return softmax(add(matvec(params.w, features).span(), params.b.span()).span());
}

ContextAvgParams train_context_avg(const std::vector<EncodedInstance>& train,
                                   const EmbeddingTable& table, const TrainConfig& config) {
  if (train.empty()) throw InputError("training set is empty");
  if (!(config.learning_rate > 0.0)) throw InputError("learning rate must be positive");
  ContextAvgParams p = init_context_avg(table.dim(), config.seed);

  std::vector<Vector> features;
  features.reserve(train.size());
  for (const auto& inst : train) features.push_back(context_avg_features(inst, table));

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (auto i : order) {
      Vector dz = context_avg_probs(p, features[i].span());
      dz[class_index(train[i].label)] -= 1.0;
      add_outer_inplace(-config.learning_rate, dz.span(), features[i].span(), p.w);
      axpy_inplace(-config.learning_rate, dz.span(), p.b.span());
    }
  }
  return p;
}

std::vector<Polarity> predict_context_avg(const std::vector<EncodedInstance>& instances,
                                          const EmbeddingTable& table,
                                          const ContextAvgParams& params) {
  std::vector<Polarity> out(instances.size());
  const auto n = static_cast<std::ptrdiff_t>(instances.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto f = context_avg_features(instances[idx], table);
    out[idx] = argmax_class(context_avg_probs(params, f.span()).span());
  }
  return out;
}

EvalReport context_avg_baseline(const std::vector<EncodedInstance>& train,
                                const std::vector<EncodedInstance>& test,
                                const EmbeddingTable& table, const TrainConfig& config) {
  const auto params = train_context_avg(train, table, config);
  return accuracy(predict_context_avg(test, table, params), labels_of(test));
}

std::vector<SweepRow> hop_sweep(const std::vector<EncodedInstance>& train_set,
                                const std::vector<EncodedInstance>& test,
                                const EmbeddingTable& table, ModelConfig base,
                                const TrainConfig& train_config,
                                std::span<const std::size_t> hop_counts) {
  std::vector<SweepRow> rows;
  for (auto h : hop_counts) {
    base.hops = h;
    const auto trained = train(train_set, table, base, train_config);
    rows.push_back({h, evaluate(test, table, base, trained.params)});
  }
  return rows;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<BenchRow> bench_epochs(const std::vector<EncodedInstance>& dataset,
                                   const EmbeddingTable& table, std::span<const std::size_t> hops,
                                   LocationMode mode, std::size_t epochs_per_point,
                                   std::uint64_t seed) {
  if (dataset.empty()) throw InputError("benchmark dataset is empty");
  if (epochs_per_point < 3) epochs_per_point = 3;
  std::vector<BenchRow> rows;
  for (auto h : hops) {
    ModelConfig model;
    model.dim = table.dim();
    model.hops = h;
    model.mode = mode;
    TrainConfig cfg;
    cfg.epochs = epochs_per_point;
    cfg.seed = seed;
    const auto result = train(dataset, table, model, cfg);
    BenchRow row;
    row.hops = h;
    for (const auto& rec : result.log) row.epoch_seconds.push_back(rec.seconds);
    row.median_seconds = median(row.epoch_seconds);
    rows.push_back(std::move(row));
  }
  return rows;
}

LinearFit fit_linear(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) throw InputError("linear fit needs at least two points");
  const double n = static_cast<double>(rows.size());
  double sx = 0, sy = 0;
  for (const auto& r : rows) {
    sx += static_cast<double>(r.hops);
    sy += r.median_seconds;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& r : rows) {
    const double dx = static_cast<double>(r.hops) - mx;
    const double dy = r.median_seconds - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LinearFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 0.0;
  return fit;
}

}  // namespace memnet
