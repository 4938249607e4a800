#include "memnet/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "memnet/errors.hpp"

namespace memnet {

double cross_entropy(std::span<const double> probs, Polarity gold, bool* clamped) {
  double p = probs[class_index(gold)];
  const bool floor_hit = p < kMinProbability;
  if (clamped) *clamped = floor_hit;
  if (floor_hit) p = kMinProbability;
  return -std::log(p);
}

double loss(const ForwardTrace& trace, Polarity gold, bool* clamped) {
  return cross_entropy(trace.probs.span(), gold, clamped);
}

MemNetParams init_params(const ModelConfig& config, std::uint64_t seed) {
  MemNetParams params = zero_params(config);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-kInitBound, kInitBound);
  for (auto& block : param_blocks(params)) {
    for (double& v : block.values) v = dist(rng);
  }
  return params;
}

BackwardResult backward(const EncodedInstance& instance, const EmbeddingTable& table,
                        const ModelConfig& config, const MemNetParams& params) {
  const ForwardTrace trace = forward(instance, table, config, params);
  const std::size_t d = config.dim;
  const std::size_t k = instance.context_size();

  BackwardResult result;
  result.loss = loss(trace, instance.label, &result.clamped);
  result.grads = zero_params(config);
  Gradients& g = result.grads;

  // Softmax + cross entropy: dL/dz = P - onehot(gold).
  Vector dz = trace.probs;
  dz[class_index(instance.label)] -= 1.0;
  const Vector& x_last = trace.hops.back().output;
  add_outer_inplace(1.0, dz.span(), x_last.span(), g.w_cls);
  axpy_inplace(1.0, dz.span(), g.b_cls.span());
  Vector dx = matvec_transposed(params.w_cls, dz.span());

  const auto w_att = params.w_att.row(0);
  const auto w_mem = w_att.subspan(0, d);
  const auto w_query = w_att.subspan(d, d);
  auto gw_att = g.w_att.row(0);
  auto gw_mem = gw_att.subspan(0, d);
  auto gw_query = gw_att.subspan(d, d);

  // Memory only carries gradient to parameters under Models 3 and 4.
  const bool learn_memory = has_location_table(config.mode);
  Matrix d_memory = learn_memory ? Matrix(k, d) : Matrix();

  std::vector<double> d_alpha(k);
  for (std::size_t t = config.hops; t-- > 0;) {
    const HopTrace& hop = trace.hops[t];
    const Matrix& memory = trace.memory(t);
    const Vector& alpha = hop.attention.weights;
    const Vector& score = hop.attention.scores;

    // x_t = vec_t + W_lin x_{t-1}
    add_outer_inplace(1.0, dx.span(), hop.query.span(), g.w_lin);
    Vector d_query = matvec_transposed(params.w_lin, dx.span());

    // vec_t = sum_i alpha_i m_i
    double weighted = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      d_alpha[i] = dot(dx.span(), memory.row(i));
      weighted += alpha[i] * d_alpha[i];
      if (learn_memory) axpy_inplace(alpha[i], dx.span(), d_memory.row(i));
    }

    // alpha = softmax(g), g_i = tanh(s_i), s_i = w_mem.m_i + w_query.q + b
    double d_shared = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double d_score = alpha[i] * (d_alpha[i] - weighted);
      const double d_pre = d_score * (1.0 - score[i] * score[i]);
      axpy_inplace(d_pre, memory.row(i), gw_mem);
      if (learn_memory) axpy_inplace(d_pre, w_mem, d_memory.row(i));
      d_shared += d_pre;
    }
    g.b_att += d_shared;
    axpy_inplace(d_shared, hop.query.span(), gw_query);
    axpy_inplace(d_shared, w_query, d_query.span());

    dx = std::move(d_query);
  }

  if (learn_memory) {
    Matrix& g_loc = *g.loc_table;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t r = location_row(instance.context_locations[i], config.max_len);
      auto dst = g_loc.row(r);
      const auto dm = d_memory.row(i);
      if (config.mode == LocationMode::Model3) {
        axpy_inplace(1.0, dm, dst);
      } else {
        const auto e = table.row(instance.context_rows[i]);
        const auto v = params.loc_table->row(r);
        for (std::size_t j = 0; j < d; ++j) {
          const double s = sigmoid(v[j]);
          dst[j] += dm[j] * e[j] * s * (1.0 - s);
        }
      }
    }
  }

  for (const auto& block : param_blocks(std::as_const(g))) {
    if (!all_finite(block.values)) {
      throw NumericError("non-finite gradient in parameter block " + std::string(block.name));
    }
  }
  return result;
}

void sgd_step(MemNetParams& params, const Gradients& grads, double learning_rate) {
  auto dst = param_blocks(params);
  const auto src = param_blocks(grads);
  if (dst.size() != src.size()) throw DimensionError("gradient layout does not match parameters");
  for (std::size_t b = 0; b < dst.size(); ++b) {
    axpy_inplace(-learning_rate, src[b].values, dst[b].values);
  }
}

TrainResult train_from(MemNetParams params, const std::vector<EncodedInstance>& dataset,
                       const EmbeddingTable& table, const ModelConfig& model,
                       const TrainConfig& cfg, const EpochCallback& on_epoch) {
  if (dataset.empty()) throw InputError("training set is empty");
  if (!(cfg.learning_rate > 0.0)) throw InputError("learning rate must be positive");

  TrainResult result;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].context_size() > 0) {
      order.push_back(i);
    } else {
      ++result.skipped_degenerate;
    }
  }
  if (order.empty()) throw InputError("no training instance has context words");

  std::mt19937_64 shuffle_rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), shuffle_rng);

    EpochRecord rec;
    rec.epoch = epoch;
    double total_loss = 0.0;
    const auto start = std::chrono::steady_clock::now();
    for (const std::size_t i : order) {
      const BackwardResult step = backward(dataset[i], table, model, params);
      total_loss += step.loss;
      if (step.clamped) ++rec.clamped;
      sgd_step(params, step.grads, cfg.learning_rate);
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.mean_loss = total_loss / static_cast<double>(order.size());

    std::size_t correct = 0;
    for (const auto& inst : dataset) {
      if (predict_instance(inst, table, model, params) == inst.label) ++correct;
    }
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());

    result.log.push_back(rec);
    if (on_epoch) on_epoch(rec, params);
  }
  result.params = std::move(params);
  return result;
}

TrainResult train(const std::vector<EncodedInstance>& dataset, const EmbeddingTable& table,
                  const ModelConfig& model, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  return train_from(init_params(model, cfg.seed), dataset, table, model, cfg, on_epoch);
}

namespace {

double loss_at(const EncodedInstance& instance, const EmbeddingTable& table,
               const ModelConfig& config, const MemNetParams& params) {
  return loss(forward(instance, table, config, params), instance.label);
}

struct EntryRef {
  std::size_t block;
  std::size_t index;
};

std::vector<EntryRef> all_entries(const MemNetParams& params) {
  std::vector<EntryRef> entries;
  const auto blocks = param_blocks(params);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < blocks[b].values.size(); ++i) entries.push_back({b, i});
  }
  return entries;
}

double central_difference(MemNetParams& probe, const EntryRef& e, const EncodedInstance& instance,
                          const EmbeddingTable& table, const ModelConfig& config, double eps) {
  double& v = param_blocks(probe)[e.block].values[e.index];
  const double saved = v;
  v = saved + eps;
  const double up = loss_at(instance, table, config, probe);
  v = saved - eps;
  const double down = loss_at(instance, table, config, probe);
  v = saved;
  return (up - down) / (2.0 * eps);
}

}  // namespace

Gradients numerical_gradient_serial(const EncodedInstance& instance, const EmbeddingTable& table,
                                    const ModelConfig& config, const MemNetParams& params,
                                    double eps) {
  Gradients out = zero_params(config);
  MemNetParams probe = params;
  auto out_blocks = param_blocks(out);
  for (const auto& e : all_entries(params)) {
    out_blocks[e.block].values[e.index] =
        central_difference(probe, e, instance, table, config, eps);
  }
  return out;
}

Gradients numerical_gradient(const EncodedInstance& instance, const EmbeddingTable& table,
                             const ModelConfig& config, const MemNetParams& params, double eps) {
  Gradients out = zero_params(config);
  const auto entries = all_entries(params);
  auto out_blocks = param_blocks(out);
  const auto n = static_cast<std::ptrdiff_t>(entries.size());

#pragma omp parallel
  {
    MemNetParams probe = params;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto& e = entries[static_cast<std::size_t>(i)];
      out_blocks[e.block].values[e.index] =
          central_difference(probe, e, instance, table, config, eps);
    }
  }
  return out;
}

GradientCheck compare_gradients(const Gradients& analytic, const Gradients& numeric,
                                double floor) {
  const auto a = param_blocks(analytic);
  const auto n = param_blocks(numeric);
  if (a.size() != n.size()) throw DimensionError("gradient layouts differ");
  GradientCheck worst;
  for (std::size_t b = 0; b < a.size(); ++b) {
    if (a[b].values.size() != n[b].values.size()) throw DimensionError("gradient layouts differ");
    for (std::size_t i = 0; i < a[b].values.size(); ++i) {
      const double x = a[b].values[i];
      const double y = n[b].values[i];
      const double denom = std::max({std::abs(x), std::abs(y), floor});
      const double rel = std::abs(x - y) / denom;
      if (rel > worst.max_relative_error) {
        worst.max_relative_error = rel;
        worst.worst_block = a[b].name;
        worst.worst_index = i;
      }
    }
  }
  return worst;
}

}  // namespace memnet
