#include "memnet/model.hpp"

#include <algorithm>
#include <cmath>

#include "memnet/errors.hpp"

namespace memnet {

std::string_view to_string(LocationMode mode) {
  switch (mode) {
    case LocationMode::None: return "none";
    case LocationMode::Model1: return "1";
    case LocationMode::Model2: return "2";
    case LocationMode::Model3: return "3";
    case LocationMode::Model4: return "4";
  }
  return "?";
}

std::optional<LocationMode> location_mode_from_string(std::string_view s) {
  if (s == "none" || s == "0") return LocationMode::None;
  if (s == "1" || s == "model1") return LocationMode::Model1;
  if (s == "2" || s == "model2") return LocationMode::Model2;
  if (s == "3" || s == "model3") return LocationMode::Model3;
  if (s == "4" || s == "model4") return LocationMode::Model4;
  return std::nullopt;
}

MemNetParams zero_params(const ModelConfig& config) {
  if (config.dim == 0) throw DimensionError("model dimension must be positive");
  const std::size_t d = config.dim;
  MemNetParams p;
  p.w_att = Matrix(1, 2 * d);
  p.b_att = 0.0;
  p.w_lin = Matrix(d, d);
  p.w_cls = Matrix(kNumClasses, d);
  p.b_cls = Vector(kNumClasses);
  if (has_location_table(config.mode)) {
    if (config.max_len == 0) throw DimensionError("max_len must be positive");
    p.loc_table = Matrix(config.max_len, d);
  }
  return p;
}

std::vector<ParamBlock> param_blocks(MemNetParams& p) {
  std::vector<ParamBlock> blocks{{"W_att", p.w_att.flat()},
                                 {"b_att", std::span<double>(&p.b_att, 1)},
                                 {"W_lin", p.w_lin.flat()},
                                 {"W_cls", p.w_cls.flat()},
                                 {"b_cls", p.b_cls.span()}};
  if (p.loc_table) blocks.push_back({"loc_table", p.loc_table->flat()});
  return blocks;
}

std::vector<ConstParamBlock> param_blocks(const MemNetParams& p) {
  std::vector<ConstParamBlock> blocks{{"W_att", p.w_att.flat()},
                                      {"b_att", std::span<const double>(&p.b_att, 1)},
                                      {"W_lin", p.w_lin.flat()},
                                      {"W_cls", p.w_cls.flat()},
                                      {"b_cls", p.b_cls.span()}};
  if (p.loc_table) blocks.push_back({"loc_table", p.loc_table->flat()});
  return blocks;
}

std::size_t parameter_count(const MemNetParams& params) {
  std::size_t n = 0;
  for (const auto& b : param_blocks(params)) n += b.values.size();
  return n;
}

std::size_t parameter_count(const ModelConfig& config) {
  const std::size_t d = config.dim;
  std::size_t n = 2 * d + 1 + d * d + kNumClasses * d + kNumClasses;
  if (has_location_table(config.mode)) n += config.max_len * d;
  return n;
}

double model1_weight(std::size_t location, std::size_t sentence_length, std::size_t j,
                     std::size_t dim) {
  const double ln = static_cast<double>(location) / static_cast<double>(sentence_length);
  const double jd = static_cast<double>(j) / static_cast<double>(dim);
  return (1.0 - ln) - jd * (1.0 - 2.0 * ln);
}

double model2_weight(std::size_t location, std::size_t sentence_length) {
  return 1.0 - static_cast<double>(location) / static_cast<double>(sentence_length);
}

std::size_t location_row(std::size_t location, std::size_t max_len) {
  return std::min(location, max_len - 1);
}

Matrix build_memory(const EncodedInstance& instance, const EmbeddingTable& table,
                    const ModelConfig& config, const MemNetParams& params, std::size_t hop) {
  const std::size_t k = instance.context_size();
  const std::size_t d = table.dim();
  if (k == 0) throw InputError("degenerate instance: no context words outside the aspect");
  if (d != config.dim) {
    throw DimensionError("embedding dim " + std::to_string(d) + " != model dim " +
                         std::to_string(config.dim));
  }
  if (has_location_table(config.mode) && !params.loc_table) {
    throw DimensionError("location mode needs a location table");
  }

  const std::size_t n = instance.sentence_length;
  Matrix memory(k, d);
  for (std::size_t i = 0; i < k; ++i) {
    const auto e = table.row(instance.context_rows[i]);
    const std::size_t l = instance.context_locations[i];
    auto m = memory.row(i);
    switch (config.mode) {
      case LocationMode::None:
        std::copy(e.begin(), e.end(), m.begin());
        break;
      case LocationMode::Model1:
        if (config.model1_hop_index) {
          const double w = model1_weight(l, n, hop + 1, d);
          for (std::size_t j = 0; j < d; ++j) m[j] = e[j] * w;
        } else {
          for (std::size_t j = 0; j < d; ++j) m[j] = e[j] * model1_weight(l, n, j + 1, d);
        }
        break;
      case LocationMode::Model2: {
        const double w = model2_weight(l, n);
        for (std::size_t j = 0; j < d; ++j) m[j] = e[j] * w;
        break;
      }
      case LocationMode::Model3: {
        const auto v = params.loc_table->row(location_row(l, config.max_len));
        for (std::size_t j = 0; j < d; ++j) m[j] = e[j] + v[j];
        break;
      }
      case LocationMode::Model4: {
        const auto v = params.loc_table->row(location_row(l, config.max_len));
        for (std::size_t j = 0; j < d; ++j) m[j] = e[j] * sigmoid(v[j]);
        break;
      }
    }
  }
  return memory;
}

AttentionResult attention(const Matrix& memory, std::span<const double> query,
                          const MemNetParams& params) {
  const std::size_t k = memory.rows();
  const std::size_t d = memory.cols();
  if (query.size() != d) throw DimensionError("attention: query length != memory width");
  if (params.w_att.cols() != 2 * d) throw DimensionError("attention: W_att must be 1 x 2d");

  const auto w = params.w_att.row(0);
  const auto w_mem = w.subspan(0, d);
  const auto w_query = w.subspan(d, d);
  // The query half of the score is the same for every row.
  const double shared = dot(w_query, query) + params.b_att;

  Vector scores(k);
  for (std::size_t i = 0; i < k; ++i) scores[i] = std::tanh(dot(w_mem, memory.row(i)) + shared);
  Vector weights = softmax(scores.span());

  Vector out(d);
  for (std::size_t i = 0; i < k; ++i) axpy_inplace(weights[i], memory.row(i), out.span());
  return {std::move(out), std::move(weights), std::move(scores)};
}

ForwardTrace forward(const EncodedInstance& instance, const EmbeddingTable& table,
                     const ModelConfig& config, const MemNetParams& params) {
  if (config.hops == 0) throw DimensionError("hops must be >= 1");
  ForwardTrace trace;
  const bool per_hop_memory = config.mode == LocationMode::Model1 && config.model1_hop_index;
  if (per_hop_memory) {
    for (std::size_t t = 0; t < config.hops; ++t) {
      trace.memories.push_back(build_memory(instance, table, config, params, t));
    }
  } else {
    trace.memories.push_back(build_memory(instance, table, config, params));
  }

  Vector x = aspect_vector(table, instance);
  trace.hops.reserve(config.hops);
  for (std::size_t t = 0; t < config.hops; ++t) {
    HopTrace hop;
    hop.query = x;
    hop.attention = attention(trace.memory(t), x.span(), params);
    hop.output = add(hop.attention.output.span(), matvec(params.w_lin, x.span()).span());
    x = hop.output;
    trace.hops.push_back(std::move(hop));
  }
  trace.logits = add(matvec(params.w_cls, x.span()).span(), params.b_cls.span());
  trace.probs = softmax(trace.logits.span());
  return trace;
}

Polarity argmax_class(std::span<const double> probs) {
  const auto it = std::max_element(probs.begin(), probs.end());
  return polarity_from_index(static_cast<std::size_t>(it - probs.begin()));
}

Polarity predict(const ForwardTrace& trace) { return argmax_class(trace.probs.span()); }

Vector classify_without_memory(const EncodedInstance& instance, const EmbeddingTable& table,
                               const ModelConfig& config, const MemNetParams& params) {
  Vector x = aspect_vector(table, instance);
  for (std::size_t t = 0; t < config.hops; ++t) x = matvec(params.w_lin, x.span());
  return softmax(add(matvec(params.w_cls, x.span()).span(), params.b_cls.span()).span());
}

Polarity predict_instance(const EncodedInstance& instance, const EmbeddingTable& table,
                          const ModelConfig& config, const MemNetParams& params) {
  if (instance.context_size() == 0) {
    return argmax_class(classify_without_memory(instance, table, config, params).span());
  }
  return predict(forward(instance, table, config, params));
}

}  // namespace memnet
