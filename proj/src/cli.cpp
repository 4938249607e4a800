#include "memnet/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "memnet/attnreport.hpp"
#include "memnet/checkpoint.hpp"
#include "memnet/corpus.hpp"
#include "memnet/embed.hpp"
#include "memnet/errors.hpp"
#include "memnet/eval.hpp"
#include "memnet/model.hpp"
#include "memnet/synthetic.hpp"
#include "memnet/train.hpp"

namespace memnet::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct RunConfig {
  std::string command;
  std::string train_xml;
  std::string test_xml;
  std::string glove;
  std::string checkpoint;
  std::string out_dir = ".";

  std::size_t hops = 1;
  bool hops_given = false;
  std::string mode = "none";
  bool mode_given = false;
  std::size_t dim = 0;  // 0: take it from the embedding file
  std::size_t max_len = kDefaultMaxLen;
  bool model1_hop_index = false;

  double lr = 0.01;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  std::size_t checkpoint_every = 0;

  std::string baseline = "memnet";
  std::vector<std::size_t> instances;
  std::vector<std::size_t> hops_list{1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::size_t bench_epochs = 3;
  std::size_t synthetic = 0;
};

/// Missing or unreadable input; carries exit code 2.
void require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw MissingFileError(std::string("(no ") + flag + " given)");
  if (!fs::is_regular_file(path)) throw MissingFileError(path);
}

LocationMode parse_mode(const std::string& s) {
  const auto m = location_mode_from_string(s);
  if (!m) throw InputError("unknown location mode '" + s + "' (use none, 1, 2, 3 or 4)");
  return *m;
}

ModelConfig model_config(const RunConfig& rc, std::size_t embedding_dim) {
  if (rc.dim != 0 && rc.dim != embedding_dim) {
    throw ConfigMismatchError("--dim " + std::to_string(rc.dim) +
                              " does not match embedding dimension " +
                              std::to_string(embedding_dim));
  }
  if (rc.hops == 0) throw InputError("--hops must be >= 1");
  ModelConfig m;
  m.dim = embedding_dim;
  m.hops = rc.hops;
  m.mode = parse_mode(rc.mode);
  m.max_len = rc.max_len;
  m.model1_hop_index = rc.model1_hop_index;
  return m;
}

TrainConfig train_config(const RunConfig& rc) {
  TrainConfig t;
  t.learning_rate = rc.lr;
  t.epochs = rc.epochs;
  t.seed = rc.seed;
  return t;
}

fs::path out_path(const RunConfig& rc, const std::string& name) {
  fs::create_directories(rc.out_dir);
  return fs::path(rc.out_dir) / name;
}

std::string percent(double acc) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << 100.0 * acc << '%';
  return s.str();
}

void print_report(std::ostream& out, const std::string& title, const EvalReport& r) {
  out << title << '\n';
  out << "  instances  " << r.count << '\n';
  out << "  correct    " << r.correct() << '\n';
  out << "  accuracy   " << percent(r.accuracy) << '\n';
  out << "  confusion (rows gold, columns predicted)\n";
  out << "  " << std::left << std::setw(10) << "" << std::right;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    out << std::setw(10) << to_string(polarity_from_index(c));
  }
  out << '\n';
  for (std::size_t g = 0; g < kNumClasses; ++g) {
    out << "  " << std::left << std::setw(10) << to_string(polarity_from_index(g)) << std::right;
    for (std::size_t p = 0; p < kNumClasses; ++p) out << std::setw(10) << r.confusion[g][p];
    out << '\n';
  }
}

json report_record(const std::string& method, const EvalReport& r) {
  json conf = json::array();
  for (const auto& row : r.confusion) conf.push_back(row);
  return {{"method", method}, {"instances", r.count}, {"correct", r.correct()},
          {"accuracy", r.accuracy}, {"confusion", conf}};
}

void append_record(const fs::path& path, const json& rec) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw MissingFileError(path.string());
  out << rec.dump() << '\n';
}

EmbeddingTable load_embeddings_for(const std::string& glove,
                                   const std::vector<const Corpus*>& corpora,
                                   std::uint64_t oov_seed) {
  std::unordered_set<std::string> vocab;
  for (const auto* c : corpora) {
    auto v = vocabulary_of(c->instances);
    vocab.insert(v.begin(), v.end());
  }
  return load_glove(glove, &vocab, oov_seed);
}

// train ---------------------------------------------------------------------

int cmd_train(const RunConfig& rc, std::ostream& out) {
  require_file(rc.train_xml, "--train-xml");
  require_file(rc.glove, "--glove");
  parse_mode(rc.mode);

  const Corpus train_corpus = parse_semeval_xml(rc.train_xml);
  EmbeddingTable table = load_embeddings_for(rc.glove, {&train_corpus}, rc.seed);
  const ModelConfig model = model_config(rc, table.dim());
  const auto encoded = encode_all(train_corpus.instances, table);
  const auto checksum = table.checksum();

  const fs::path ckpt_path = rc.checkpoint.empty() ? out_path(rc, "model.ckpt")
                                                   : fs::path(rc.checkpoint);
  if (ckpt_path.has_parent_path()) fs::create_directories(ckpt_path.parent_path());
  const fs::path log_path = out_path(rc, "train_log.jsonl");
  std::ofstream log(log_path, std::ios::trunc);
  if (!log) throw MissingFileError(log_path.string());

  out << "training on " << encoded.size() << " instances, d=" << model.dim
      << ", hops=" << model.hops << ", mode=" << to_string(model.mode) << ", lr=" << rc.lr
      << ", epochs=" << rc.epochs << ", seed=" << rc.seed << '\n';

  auto on_epoch = [&](const EpochRecord& rec, const MemNetParams& params) {
    log << json{{"epoch", rec.epoch}, {"mean_loss", rec.mean_loss},
                {"train_accuracy", rec.train_accuracy}, {"seconds", rec.seconds},
                {"clamped", rec.clamped}}
               .dump()
        << '\n';
    out << "epoch " << rec.epoch << "  loss " << std::setprecision(6) << rec.mean_loss
        << "  train acc " << percent(rec.train_accuracy) << "  " << rec.seconds << "s\n";
    if (rc.checkpoint_every && rec.epoch % rc.checkpoint_every == 0) {
      auto p = ckpt_path;
      p += ".epoch" + std::to_string(rec.epoch);
      write_checkpoint(p, make_checkpoint(model, params, table));
    }
  };

  const auto result = train(encoded, table, model, train_config(rc), on_epoch);
  if (table.checksum() != checksum) throw std::logic_error("embedding table changed during training");
  if (result.skipped_degenerate) {
    out << "skipped " << result.skipped_degenerate << " instances without context words\n";
  }
  write_checkpoint(ckpt_path, make_checkpoint(model, result.params, table));
  out << "checkpoint written to " << ckpt_path.string() << '\n';
  return kOk;
}

// eval ----------------------------------------------------------------------

struct LoadedModel {
  Checkpoint ckpt;
  EmbeddingTable table;
  Corpus test;
  std::vector<EncodedInstance> encoded;
};

LoadedModel load_model_and_test(const RunConfig& rc) {
  require_file(rc.checkpoint, "--checkpoint");
  require_file(rc.test_xml, "--test-xml");
  require_file(rc.glove, "--glove");

  Checkpoint ckpt = read_checkpoint(fs::path(rc.checkpoint));
  if (rc.mode_given && parse_mode(rc.mode) != ckpt.config.mode) {
    throw ConfigMismatchError("--location-mode " + rc.mode + " but checkpoint was trained with " +
                              std::string(to_string(ckpt.config.mode)));
  }
  if (rc.hops_given && rc.hops != ckpt.config.hops) {
    throw ConfigMismatchError("--hops " + std::to_string(rc.hops) + " but checkpoint has " +
                              std::to_string(ckpt.config.hops));
  }
  if (rc.dim != 0 && rc.dim != ckpt.config.dim) {
    throw ConfigMismatchError("--dim " + std::to_string(rc.dim) + " but checkpoint has " +
                              std::to_string(ckpt.config.dim));
  }
  Corpus test = parse_semeval_xml(rc.test_xml);
  EmbeddingTable table = load_embeddings_for(rc.glove, {&test}, ckpt.oov_seed);
  restore_oov(ckpt, table);
  auto encoded = encode_all(test.instances, table);
  return {std::move(ckpt), std::move(table), std::move(test), std::move(encoded)};
}

int cmd_eval(const RunConfig& rc, std::ostream& out) {
  EvalReport report;
  std::string method = rc.baseline;
  if (rc.baseline == "majority") {
    require_file(rc.train_xml, "--train-xml");
    require_file(rc.test_xml, "--test-xml");
    const Corpus train_corpus = parse_semeval_xml(rc.train_xml);
    const Corpus test_corpus = parse_semeval_xml(rc.test_xml);
    report = majority_baseline(train_corpus.instances, test_corpus.instances);
    out << "majority label: "
        << to_string(majority_label(labels_of(train_corpus.instances))) << '\n';
  } else if (rc.baseline == "context-avg") {
    require_file(rc.train_xml, "--train-xml");
    require_file(rc.test_xml, "--test-xml");
    require_file(rc.glove, "--glove");
    const Corpus train_corpus = parse_semeval_xml(rc.train_xml);
    const Corpus test_corpus = parse_semeval_xml(rc.test_xml);
    EmbeddingTable table =
        load_embeddings_for(rc.glove, {&train_corpus, &test_corpus}, rc.seed);
    if (rc.dim != 0 && rc.dim != table.dim()) {
      throw ConfigMismatchError("--dim does not match embedding dimension");
    }
    const auto train_enc = encode_all(train_corpus.instances, table);
    const auto test_enc = encode_all(test_corpus.instances, table);
    report = context_avg_baseline(train_enc, test_enc, table, train_config(rc));
  } else if (rc.baseline == "memnet") {
    const LoadedModel m = load_model_and_test(rc);
    report = evaluate(m.encoded, m.table, m.ckpt.config, m.ckpt.params);
    method = "memnet(" + std::to_string(m.ckpt.config.hops) + ",mode=" +
             std::string(to_string(m.ckpt.config.mode)) + ")";
  } else {
    throw InputError("unknown --baseline '" + rc.baseline + "'");
  }
  print_report(out, method, report);
  append_record(out_path(rc, "eval.jsonl"), report_record(method, report));
  return kOk;
}

// attn ----------------------------------------------------------------------

int cmd_attn(const RunConfig& rc, std::ostream& out) {
  const LoadedModel m = load_model_and_test(rc);
  std::vector<std::size_t> selected = rc.instances;
  if (selected.empty()) {
    for (std::size_t i = 0; i < m.encoded.size(); ++i) selected.push_back(i);
  }
  std::size_t written = 0;
  for (const auto i : selected) {
    if (i >= m.encoded.size()) {
      throw InputError("--instance " + std::to_string(i) + " out of range (" +
                       std::to_string(m.encoded.size()) + " test instances)");
    }
    if (m.encoded[i].context_size() == 0) {
      out << "instance " << i << " has no context words; skipped\n";
      continue;
    }
    const auto trace = forward(m.encoded[i], m.table, m.ckpt.config, m.ckpt.params);
    const AttentionReport report = make_report(m.test.instances[i], trace);
    const std::string stem = "attn_" + std::to_string(i);
    {
      std::ofstream f(out_path(rc, stem + ".txt"));
      f << render_text(report);
    }
    {
      std::ofstream f(out_path(rc, stem + ".html"));
      f << render_html(std::span<const AttentionReport>(&report, 1));
    }
    ++written;
  }
  out << "wrote " << written << " attention reports to " << rc.out_dir << '\n';
  return kOk;
}

// bench ---------------------------------------------------------------------

int cmd_bench(const RunConfig& rc, std::ostream& out) {
  const LocationMode mode = parse_mode(rc.mode);
  std::optional<EmbeddingTable> table;
  std::vector<EncodedInstance> encoded;
  std::string source;
  if (rc.synthetic > 0) {
    const std::size_t dim = rc.dim ? rc.dim : 300;
    auto syn = make_synthetic_corpus(rc.synthetic, 5000, dim, rc.seed);
    encoded = encode_all(syn.instances, syn.table);
    table.emplace(std::move(syn.table));
    source = "synthetic corpus of " + std::to_string(rc.synthetic) + " instances, d=" +
             std::to_string(dim);
  } else {
    require_file(rc.train_xml, "--train-xml");
    require_file(rc.glove, "--glove");
    const Corpus corpus = parse_semeval_xml(rc.train_xml);
    table.emplace(load_embeddings_for(rc.glove, {&corpus}, rc.seed));
    encoded = encode_all(corpus.instances, *table);
    source = rc.train_xml + ", d=" + std::to_string(table->dim());
  }

  out << "seconds per training epoch (" << source << ", mode=" << to_string(mode)
      << ", median of " << std::max<std::size_t>(3, rc.bench_epochs) << " epochs)\n";
  const auto rows = bench_epochs(encoded, *table, rc.hops_list, mode, rc.bench_epochs, rc.seed);
  out << std::setw(6) << "hops" << std::setw(14) << "sec/epoch" << '\n';
  for (const auto& r : rows) {
    out << std::setw(6) << r.hops << std::setw(14) << std::fixed << std::setprecision(4)
        << r.median_seconds << '\n';
    append_record(out_path(rc, "bench.jsonl"),
                  {{"hops", r.hops}, {"median_seconds", r.median_seconds},
                   {"epoch_seconds", r.epoch_seconds}});
  }
  out.unsetf(std::ios::fixed);
  if (rows.size() >= 2) {
    const auto fit = fit_linear(rows);
    out << "ratio t(" << rows.back().hops << ")/t(" << rows.front().hops
        << ") = " << rows.back().median_seconds / rows.front().median_seconds
        << ", linear fit r^2 = " << fit.r_squared << '\n';
  }
  return kOk;
}

// stats ---------------------------------------------------------------------

int cmd_stats(const RunConfig& rc, std::ostream& out) {
  if (rc.train_xml.empty() && rc.test_xml.empty()) {
    throw MissingFileError("(stats needs --train-xml and/or --test-xml)");
  }
  std::vector<std::pair<std::string, std::string>> splits;
  if (!rc.train_xml.empty()) splits.emplace_back("train", rc.train_xml);
  if (!rc.test_xml.empty()) splits.emplace_back("test", rc.test_xml);
  for (const auto& [name, path] : splits) require_file(path, name == "train" ? "--train-xml" : "--test-xml");

  out << std::left << std::setw(8) << "split" << std::right << std::setw(8) << "pos"
      << std::setw(8) << "neg" << std::setw(8) << "neu" << std::setw(8) << "total"
      << std::setw(10) << "conflict" << '\n';
  for (const auto& [name, path] : splits) {
    const Corpus c = parse_semeval_xml(path);
    const auto& s = c.stats;
    out << std::left << std::setw(8) << name << std::right << std::setw(8)
        << s.count(Polarity::Positive) << std::setw(8) << s.count(Polarity::Negative)
        << std::setw(8) << s.count(Polarity::Neutral) << std::setw(8) << s.total()
        << std::setw(10) << s.dropped_conflict << '\n';
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Deep memory network for aspect-level sentiment classification"};
  app.set_config("--config", "", "key=value configuration file; flags override it");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--train-xml", rc.train_xml, "SemEval-2014 training XML");
  app.add_option("--test-xml", rc.test_xml, "SemEval-2014 test XML");
  app.add_option("--glove", rc.glove, "GloVe text embedding file");
  app.add_option("--checkpoint", rc.checkpoint, "checkpoint path (written by train, read by eval/attn)");
  app.add_option("--out-dir", rc.out_dir, "directory for logs and reports");
  auto* hops_opt = app.add_option("--hops", rc.hops, "number of hops");
  auto* mode_opt = app.add_option("--location-mode", rc.mode, "none, 1, 2, 3 or 4");
  app.add_option("--dim", rc.dim, "expected embedding dimension (defaults to the file's)");
  app.add_option("--max-len", rc.max_len, "rows of the learned location table");
  app.add_flag("--model1-hop-index", rc.model1_hop_index,
               "Model 1: use the hop number instead of the component index in the ramp");
  app.add_option("--lr", rc.lr, "SGD learning rate");
  app.add_option("--epochs", rc.epochs, "training epochs");
  app.add_option("--seed", rc.seed, "random seed");
  app.add_option("--checkpoint-every", rc.checkpoint_every, "also write a checkpoint every N epochs");
  app.add_option("--baseline", rc.baseline, "eval: memnet, majority or context-avg")
      ->check(CLI::IsMember({"memnet", "majority", "context-avg"}));
  app.add_option("--instance", rc.instances, "attn: test instance index (repeatable)");
  app.add_option("--hops-list", rc.hops_list, "bench: hop counts")->delimiter(',');
  app.add_option("--bench-epochs", rc.bench_epochs, "bench: epochs per hop count (>= 3)");
  app.add_option("--synthetic", rc.synthetic, "bench: time a synthetic corpus of N instances");

  app.add_subcommand("train", "train a memory network and write a checkpoint");
  app.add_subcommand("eval", "evaluate a checkpoint or a baseline on test data");
  app.add_subcommand("attn", "write per-hop attention reports for test instances");
  app.add_subcommand("bench", "seconds per training epoch for each hop count");
  app.add_subcommand("stats", "per-class instance counts of SemEval files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kOther;
  }
  rc.command = app.get_subcommands().front()->get_name();
  rc.hops_given = hops_opt->count() > 0;
  rc.mode_given = mode_opt->count() > 0;

  try {
    if (rc.command == "train") return cmd_train(rc, out);
    if (rc.command == "eval") return cmd_eval(rc, out);
    if (rc.command == "attn") return cmd_attn(rc, out);
    if (rc.command == "bench") return cmd_bench(rc, out);
    if (rc.command == "stats") return cmd_stats(rc, out);
  } catch (const MissingFileError& e) {
    err << "error: " << e.what() << '\n';
    return kMissingInput;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const ConfigMismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}

}  // namespace memnet::cli
