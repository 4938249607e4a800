#include "memnet/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "memnet/errors.hpp"

namespace memnet {

std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

Checkpoint make_checkpoint(const ModelConfig& config, const MemNetParams& params,
                           const EmbeddingTable& table) {
  Checkpoint c;
  c.config = config;
  c.params = params;
  c.oov_seed = table.oov_seed();
  for (std::size_t r = table.loaded_size(); r < table.size(); ++r) {
    const auto v = table.row(r);
    c.oov.emplace_back(table.word(r), std::vector<double>(v.begin(), v.end()));
  }
  return c;
}

namespace {

void write_values(std::ostream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ' ';
    out << format_double(values[i]);
  }
  out << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next(const char* expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return std::istringstream(line);
    }
    throw ParseError(std::string("checkpoint truncated, expected ") + expecting, line_);
  }

  template <typename T>
  T keyed(const char* key) {
    auto ls = next(key);
    std::string k;
    T v{};
    if (!(ls >> k >> v) || k != key) throw ParseError(std::string("expected '") + key + "'", line_);
    return v;
  }

  std::vector<double> doubles(std::istringstream& ls, std::size_t count) {
    std::vector<double> out;
    out.reserve(count);
    std::string tok;
    while (ls >> tok) {
      double v = 0.0;
      const auto* end = tok.data() + tok.size();
      auto [p, ec] = std::from_chars(tok.data(), end, v);
      if (ec != std::errc{} || p != end) throw ParseError("bad number '" + tok + "'", line_);
      out.push_back(v);
    }
    if (out.size() != count) {
      throw ParseError("expected " + std::to_string(count) + " values, got " +
                           std::to_string(out.size()),
                       line_);
    }
    return out;
  }

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& c) {
  out << "memnet-checkpoint " << kCheckpointVersion << '\n';
  out << "dim " << c.config.dim << '\n';
  out << "classes " << kNumClasses << '\n';
  out << "hops " << c.config.hops << '\n';
  out << "mode " << to_string(c.config.mode) << '\n';
  out << "max_len " << c.config.max_len << '\n';
  out << "model1_hop_index " << (c.config.model1_hop_index ? 1 : 0) << '\n';
  out << "oov_seed " << c.oov_seed << '\n';
  for (const auto& block : param_blocks(c.params)) {
    out << "block " << block.name << ' ' << block.values.size() << '\n';
    write_values(out, block.values);
  }
  out << "oov " << c.oov.size() << '\n';
  for (const auto& [word, values] : c.oov) {
    out << word << ' ';
    write_values(out, values);
  }
  out << "end\n";
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MissingFileError(path.string());
  write_checkpoint(out, c);
  if (!out) throw std::runtime_error("failed writing checkpoint " + path.string());
}

Checkpoint read_checkpoint(std::istream& in) {
  LineReader r(in);
  {
    auto ls = r.next("header");
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "memnet-checkpoint") {
      throw ParseError("not a memnet checkpoint", r.line());
    }
    if (version != kCheckpointVersion) {
      throw ParseError("unsupported checkpoint version " + std::to_string(version), r.line());
    }
  }
  Checkpoint c;
  c.config.dim = r.keyed<std::size_t>("dim");
  if (r.keyed<std::size_t>("classes") != kNumClasses) {
    throw ParseError("checkpoint class count must be 3", r.line());
  }
  c.config.hops = r.keyed<std::size_t>("hops");
  const auto mode = location_mode_from_string(r.keyed<std::string>("mode"));
  if (!mode) throw ParseError("unknown location mode", r.line());
  c.config.mode = *mode;
  c.config.max_len = r.keyed<std::size_t>("max_len");
  c.config.model1_hop_index = r.keyed<int>("model1_hop_index") != 0;
  c.oov_seed = r.keyed<std::uint64_t>("oov_seed");
  if (c.config.dim == 0 || c.config.hops == 0) throw ParseError("dim and hops must be positive", 0);

  c.params = zero_params(c.config);
  for (auto& block : param_blocks(c.params)) {
    auto ls = r.next("block");
    std::string kw, name;
    std::size_t count = 0;
    if (!(ls >> kw >> name >> count) || kw != "block" || name != block.name ||
        count != block.values.size()) {
      throw ParseError("expected block " + std::string(block.name) + " with " +
                           std::to_string(block.values.size()) + " values",
                       r.line());
    }
    auto values_line = r.next("block values");
    const auto values = r.doubles(values_line, count);
    std::copy(values.begin(), values.end(), block.values.begin());
  }

  const auto n_oov = r.keyed<std::size_t>("oov");
  for (std::size_t i = 0; i < n_oov; ++i) {
    auto ls = r.next("oov row");
    std::string word;
    ls >> word;
    c.oov.emplace_back(word, r.doubles(ls, c.config.dim));
  }
  auto ls = r.next("end");
  std::string end;
  if (!(ls >> end) || end != "end") throw ParseError("missing 'end'", r.line());
  return c;
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError(path.string());
  return read_checkpoint(in);
}

void restore_oov(const Checkpoint& ckpt, EmbeddingTable& table) {
  if (table.dim() != ckpt.config.dim) {
    throw ConfigMismatchError("checkpoint dim " + std::to_string(ckpt.config.dim) +
                              " does not match embedding dim " + std::to_string(table.dim()));
  }
  if (table.oov_seed() != ckpt.oov_seed) {
    throw ConfigMismatchError("checkpoint OOV seed differs from the table's seed");
  }
  for (const auto& [word, values] : ckpt.oov) table.add_oov(word, values);
}

}  // namespace memnet
