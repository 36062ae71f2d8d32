#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cxg/candidates.hpp"
#include "cxg/corpus.hpp"
#include "cxg/grammar.hpp"
#include "cxg/mdl.hpp"
#include "cxg/similarity.hpp"

namespace cxg {

// End-to-end induction over one corpus: holdout split, pair counts and
// association scores on the training part, beam-search candidate pool,
// MDL selection against the held-out tail.
struct InduceParams {
  SearchParams search;
  SelectionParams selection;
  std::uint32_t min_count = 3;    // association count floor
  double holdout_fraction = 0.1;  // tail reserved for selection

  void validate() const;  // throws ArgumentError
};

// The intermediates ride along so callers can inspect or dump them.
struct InduceResult {
  Grammar grammar;
  DeltaPMatrix matrix;
  ProvisionalGrammar provisional;
};

InduceResult induce_grammar(const Corpus& corpus, const Vocabulary& vocab,
                            const InduceParams& params);

struct RegisterSource {
  std::string label;
  std::filesystem::path path;
};

// Exposure-sweep configuration, loadable from a JSON file. Relative paths
// resolve against the config file's directory.
struct SweepConfig {
  std::vector<RegisterSource> registers;
  std::uint64_t exposure_start = 100000;
  std::uint64_t exposure_step = 100000;
  std::uint64_t exposure_end = 2000000;
  std::filesystem::path background_path;
  std::uint64_t background_words = 500000;
  std::filesystem::path cluster_model_path;  // empty: corpora are
                                             // pre-annotated
  InduceParams induce;
  double fuzzy_threshold = kDefaultFuzzyThreshold;
  std::uint64_t seed = 0;  // recorded for provenance; the pipeline itself
                           // draws no random numbers
  std::filesystem::path output_dir;

  std::vector<std::uint64_t> exposure_steps() const;

  void validate() const;  // throws ArgumentError
  static SweepConfig from_json(const std::string& text,
                               const std::filesystem::path& base_dir);
  static SweepConfig from_json_file(const std::filesystem::path& path);
};

// One induced grammar of the sweep grid, persisted to grammar_path.
struct GrammarCell {
  std::string register_label;
  std::uint64_t exposure_words = 0;  // nominal step value
  Grammar grammar;
  std::filesystem::path grammar_path;
  std::size_t grammar_size = 0;
  bool truncated = false;  // register corpus ran out before this step
};

struct PairSimilarity {
  std::uint64_t exposure_words = 0;
  std::string register_a;
  std::string register_b;
  double jaccard = 0.0;
  double fuzzy_jaccard = 0.0;
  double weighted_jaccard = 0.0;
  std::size_t grammar_size_a = 0;
  std::size_t grammar_size_b = 0;
};

// cells ordered by (exposure, register config order); pairs by (exposure,
// pair config order).
struct SweepResult {
  std::vector<GrammarCell> cells;
  std::vector<PairSimilarity> pairs;
};

// Runs the full grid. Register corpora load into one shared vocabulary so
// constructions are comparable across registers. Inductions run as
// independent (register x step) jobs over `threads` workers; results land
// in preallocated slots, so output is identical for any thread count.
SweepResult run_sweep(const SweepConfig& config, unsigned threads = 1);

// Planted-construction corpus generator: a shared inventory plus one
// private inventory per register, all mutually disjoint. Each sentence
// concatenates 1..max_constructions_per_sentence inventory draws realized
// as tokens (free dimensions uniform), then token noise.
struct SynthSpec {
  std::vector<std::string> registers{"a", "b"};
  std::uint32_t shared_constructions = 70;
  std::uint32_t private_constructions = 30;
  std::uint32_t slot_len_min = 3;
  std::uint32_t slot_len_max = 5;
  std::uint32_t lex_vocab = 200;
  std::uint32_t syn_vocab = 17;  // at most the 17 universal POS tags
  std::uint32_t sem_vocab = 50;
  std::uint32_t sentences_per_register = 2000;
  std::uint32_t max_constructions_per_sentence = 3;
  double noise = 0.0;  // per-token uniform resample probability
  std::uint64_t seed = 0;

  void validate() const;  // throws ArgumentError
  static SynthSpec from_json(const std::string& text);
  static SynthSpec from_json_file(const std::filesystem::path& path);
};

// Writes `<label>.tsv` per register into output_dir; returns the paths in
// register order. Deterministic per seed.
std::vector<std::filesystem::path> synth_generate(
    const SynthSpec& spec, const std::filesystem::path& output_dir);

// `exposure_words,register_a,register_b,jaccard,fuzzy_jaccard,
// weighted_jaccard,grammar_size_a,grammar_size_b`, one row per pair per
// step, similarities with six decimals.
void emit_csv(const SweepResult& result, const std::filesystem::path& path);
std::string csv_text(const SweepResult& result);

// fuzzy_jaccard.svg and weighted_jaccard.svg under `dir`: exposure on x,
// similarity on a fixed [0, 1] y axis, one polyline per register pair.
void emit_plots(const SweepResult& result, const std::filesystem::path& dir);
std::string plot_svg(const SweepResult& result, bool weighted);

}  // namespace cxg
