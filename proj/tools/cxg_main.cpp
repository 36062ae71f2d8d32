#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "cxg/association.hpp"
#include "cxg/candidates.hpp"
#include "cxg/corpus.hpp"
#include "cxg/errors.hpp"
#include "cxg/experiment.hpp"
#include "cxg/grammar.hpp"
#include "cxg/mdl.hpp"
#include "cxg/similarity.hpp"

namespace {

using nlohmann::ordered_json;

// "-" means stdout.
void write_output(const std::string& target, const std::string& content) {
  if (target == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw cxg::IoError("cannot open " + target + " for writing");
  out << content;
  if (!out) throw cxg::IoError("cannot write " + target);
}

std::filesystem::path default_output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("CXG_OUTPUT_DIR")) return env;
  return ".";
}

using cxg::Corpus;

Corpus load_annotated(const std::string& corpus_path,
                      const std::string& model_path, cxg::Vocabulary& vocab,
                      std::string label) {
  Corpus corpus = cxg::load_corpus(corpus_path, vocab, std::move(label));
  if (!model_path.empty()) {
    const cxg::ClusterModel model = cxg::ClusterModel::load(model_path);
    corpus = cxg::assign_semantics(corpus, model, vocab);
  }
  return corpus;
}

struct InduceCli {
  std::string corpus_path;
  std::string label;
  std::string model_path;
  std::string output = "-";
  std::string dump_deltap;
  std::string dump_candidates;
  std::string report;
  cxg::InduceParams params;
  std::uint32_t l1_max_len = 0;  // 0: mirror --max-len

  void run() {
    if (l1_max_len != 0) params.selection.l1_max_len = l1_max_len;
    else params.selection.l1_max_len = params.search.max_len;
    params.validate();

    cxg::Vocabulary vocab;
    std::string register_label = label.empty()
        ? std::filesystem::path(corpus_path).stem().string()
        : label;
    const Corpus corpus =
        load_annotated(corpus_path, model_path, vocab, register_label);
    const cxg::InduceResult result =
        cxg::induce_grammar(corpus, vocab, params);

    if (!dump_deltap.empty()) {
      std::ostringstream buf;
      result.matrix.dump(buf, vocab);
      write_output(dump_deltap, buf.str());
    }
    if (!dump_candidates.empty()) {
      struct Row {
        std::string serial;
        std::uint64_t frequency;
        double total;
      };
      std::vector<Row> rows;
      rows.reserve(result.provisional.size());
      for (const auto& [construction, entry] : result.provisional.entries())
        rows.push_back({cxg::construction_to_string(construction, vocab),
                        entry.frequency, entry.total_score});
      std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
        if (x.total != y.total) return x.total > y.total;
        return x.serial < y.serial;
      });
      std::string out = "construction\tfrequency\ttotal_score\tmean_score\n";
      char buf[64];
      for (const Row& r : rows) {
        out += r.serial;
        out += '\t';
        out += std::to_string(r.frequency);
        std::snprintf(buf, sizeof buf, "\t%.6f\t%.6f", r.total,
                      r.total / static_cast<double>(r.frequency));
        out += buf;
        out += '\n';
      }
      write_output(dump_candidates, out);
    }
    if (!report.empty()) {
      const cxg::MdlScore score = cxg::mdl_score(
          result.grammar, corpus, vocab, params.selection.l1_max_len);
      ordered_json j;
      j["l1_bits"] = score.l1_bits;
      j["l2_bits"] = score.l2_bits;
      j["total_bits"] = score.total_bits();
      j["grammar_size"] = result.grammar.size();
      j["provisional_size"] = result.provisional.size();
      j["corpus_words"] = corpus.word_count;
      write_output(report, j.dump(2) + "\n");
    }

    if (output == "-") {
      std::cout << cxg::serialize(result.grammar);
    } else {
      cxg::save_grammar(result.grammar, output);
      std::cout << "grammar: " << result.grammar.size()
                << " constructions (pool " << result.provisional.size()
                << ") -> " << output << "\n";
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"construction grammar induction and register comparison"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  unsigned threads = 1;
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker threads for sweep");

  // cluster
  auto* cluster = app.add_subcommand(
      "cluster", "k-means cluster word embeddings into a semantic model");
  std::string embeddings_path, cluster_out;
  std::uint32_t k = 0;
  cluster->add_option("--embeddings", embeddings_path, "embedding table")
      ->required();
  cluster->add_option("--k", k, "number of clusters")->required();
  cluster->add_option("--output", cluster_out, "model file")->required();
  cluster->callback([&] {
    const cxg::EmbeddingTable table =
        cxg::EmbeddingTable::load(embeddings_path);
    const cxg::ClusterModel model = cxg::cluster_embeddings(table, k, seed);
    model.save(cluster_out);
    std::cout << "clusters: k=" << model.k << " over " << table.size()
              << " words, inertia "
              << (model.inertia_history.empty()
                      ? 0.0
                      : model.inertia_history.back())
              << " -> " << cluster_out << "\n";
  });

  // induce
  InduceCli induce;
  auto* ind = app.add_subcommand(
      "induce", "learn a construction grammar from an annotated corpus");
  ind->add_option("--corpus", induce.corpus_path, "annotated TSV corpus")
      ->required();
  ind->add_option("--register", induce.label, "register label");
  ind->add_option("--cluster-model", induce.model_path,
                  "semantic cluster model to apply");
  ind->add_option("--output", induce.output, "grammar file, - for stdout");
  ind->add_option("--beam-width", induce.params.search.beam_width,
                  "beam width");
  ind->add_option("--delta-threshold", induce.params.search.delta_threshold,
                  "association stop threshold");
  ind->add_option("--min-len", induce.params.search.min_len,
                  "minimum construction length");
  ind->add_option("--max-len", induce.params.search.max_len,
                  "maximum construction length");
  ind->add_option("--candidates-per-sentence",
                  induce.params.search.candidates_per_sentence,
                  "winners kept per sentence");
  ind->add_option("--floors", induce.params.selection.frequency_floors,
                  "frequency floors to try")
      ->delimiter(',');
  ind->add_option("--batch-size", induce.params.selection.batch_size,
                  "selection batch size");
  ind->add_option("--patience", induce.params.selection.patience,
                  "rejected batches tolerated");
  ind->add_option("--l1-max-len", induce.l1_max_len,
                  "length-code ceiling (0: mirror --max-len)");
  ind->add_option("--min-count", induce.params.min_count,
                  "association count floor");
  ind->add_option("--holdout", induce.params.holdout_fraction,
                  "held-out fraction for selection");
  ind->add_option("--dump-deltap", induce.dump_deltap,
                  "write association scores TSV, - for stdout");
  ind->add_option("--dump-candidates", induce.dump_candidates,
                  "write candidate pool TSV, - for stdout");
  ind->add_option("--report", induce.report,
                  "write MDL report JSON, - for stdout");
  ind->callback([&] { induce.run(); });

  // match
  auto* match = app.add_subcommand(
      "match", "count grammar matches in an annotated corpus");
  std::string match_grammar, match_corpus_path, match_model,
      match_out = "-";
  bool match_spans = false;
  match->add_option("--grammar", match_grammar, "grammar file")->required();
  match->add_option("--corpus", match_corpus_path, "annotated TSV corpus")
      ->required();
  match->add_option("--cluster-model", match_model,
                    "semantic cluster model to apply");
  match->add_option("--output", match_out, "TSV output, - for stdout");
  match->add_flag("--spans", match_spans, "include sentence:start spans");
  match->callback([&] {
    cxg::Vocabulary vocab;
    const cxg::Grammar grammar =
        cxg::load_grammar(match_grammar, vocab, /*extend_vocab=*/true);
    const Corpus corpus =
        load_annotated(match_corpus_path, match_model, vocab, "");
    const cxg::MatchTable table = cxg::match_corpus(grammar, corpus);
    std::string out = match_spans ? "construction\tfrequency\tspans\n"
                                  : "construction\tfrequency\n";
    for (std::size_t i = 0; i < grammar.size(); ++i) {
      out += grammar.serial(i);
      out += '\t';
      out += std::to_string(table.frequency[i]);
      if (match_spans) {
        out += '\t';
        bool first = true;
        for (const cxg::Span& span : table.spans[i]) {
          if (!first) out += ';';
          first = false;
          out += std::to_string(span.sentence);
          out += ':';
          out += std::to_string(span.start);
        }
      }
      out += '\n';
    }
    write_output(match_out, out);
  });

  // compare
  auto* compare = app.add_subcommand(
      "compare", "similarity report for two grammar files");
  std::string cmp_a, cmp_b, cmp_background, cmp_model, cmp_out = "-";
  std::uint64_t cmp_background_words = 500000;
  double cmp_threshold = cxg::kDefaultFuzzyThreshold;
  compare->add_option("grammar_a", cmp_a, "first grammar")->required();
  compare->add_option("grammar_b", cmp_b, "second grammar")->required();
  compare->add_option("--background", cmp_background,
                      "background corpus for the weighted measure");
  compare->add_option("--background-words", cmp_background_words,
                      "background truncation size");
  compare->add_option("--cluster-model", cmp_model,
                      "semantic cluster model for the background");
  compare->add_option("--threshold", cmp_threshold, "fuzzy match threshold");
  compare->add_option("--output", cmp_out, "JSON output, - for stdout");
  compare->callback([&] {
    cxg::Vocabulary vocab;
    const cxg::Grammar a = cxg::load_grammar(cmp_a, vocab, true);
    const cxg::Grammar b = cxg::load_grammar(cmp_b, vocab, true);
    ordered_json j;
    j["size_a"] = a.size();
    j["size_b"] = b.size();
    j["threshold"] = cmp_threshold;
    j["jaccard"] = cxg::jaccard(a, b);
    j["fuzzy_jaccard"] = cxg::fuzzy_jaccard(a, b, cmp_threshold);
    if (!cmp_background.empty()) {
      Corpus background =
          load_annotated(cmp_background, cmp_model, vocab, "background");
      background =
          cxg::slice_exposure(background, cmp_background_words).corpus;
      const cxg::WeightTable weights =
          cxg::background_weights(a, b, background);
      j["weighted_jaccard"] =
          cxg::weighted_jaccard(a, b, weights, cmp_threshold);
    }
    ordered_json pairs = ordered_json::array();
    for (const cxg::MatchedPair& p :
         cxg::fuzzy_pairing(a, b, cmp_threshold).pairs) {
      ordered_json entry;
      entry["a"] = a.serial(p.a_index);
      entry["b"] = b.serial(p.b_index);
      entry["ratio"] = p.ratio;
      pairs.push_back(std::move(entry));
    }
    j["matched_pairs"] = std::move(pairs);
    write_output(cmp_out, j.dump(2) + "\n");
  });

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "exposure sweep: grammars per register and step, plus curves");
  std::string sweep_config, sweep_out;
  sweep->add_option("--config", sweep_config, "sweep config JSON")
      ->required();
  sweep->add_option("--output", sweep_out, "output directory override");
  sweep->callback([&] {
    cxg::SweepConfig config = cxg::SweepConfig::from_json_file(sweep_config);
    if (!sweep_out.empty())
      config.output_dir = sweep_out;
    else if (config.output_dir.empty())
      config.output_dir = default_output_dir("");
    if (seed_opt->count() > 0) config.seed = seed;
    const cxg::SweepResult result = cxg::run_sweep(config, threads);
    cxg::emit_csv(result, config.output_dir / "similarity.csv");
    cxg::emit_plots(result, config.output_dir);
    std::cout << "sweep: " << result.cells.size() << " grammars, "
              << result.pairs.size() << " pair rows -> "
              << config.output_dir.string() << "\n";
  });

  // synth
  auto* synth = app.add_subcommand(
      "synth", "generate planted-construction register corpora");
  std::string synth_spec, synth_out;
  synth->add_option("--spec", synth_spec, "synth spec JSON")->required();
  synth->add_option("--output", synth_out, "output directory");
  synth->callback([&] {
    cxg::SynthSpec spec = cxg::SynthSpec::from_json_file(synth_spec);
    if (seed_opt->count() > 0) spec.seed = seed;
    const auto paths =
        cxg::synth_generate(spec, default_output_dir(synth_out));
    for (const auto& path : paths) std::cout << path.string() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const cxg::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
