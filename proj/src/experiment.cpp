#include "cxg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "cxg/association.hpp"
#include "cxg/errors.hpp"
#include "cxg/rng.hpp"

namespace cxg {
namespace {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return std::move(buf).str();
}

void write_text_file(const std::filesystem::path& path,
                     std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

// Register labels appear in file names and CSV cells; keep them boring.
bool safe_label(std::string_view label) {
  if (label.empty()) return false;
  for (char ch : label) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '-';
    if (!ok) return false;
  }
  return true;
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
}

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<std::string_view> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ValidationError(where + ": unknown key '" + it.key() + "'");
  }
}

std::uint64_t as_u64(const json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0) throw ValidationError(where + " must be nonnegative");
    return static_cast<std::uint64_t>(v);
  }
  throw ValidationError(where + " must be an integer");
}

std::uint32_t as_u32(const json& j, const std::string& where) {
  const std::uint64_t v = as_u64(j, where);
  if (v > 0xffffffffull) throw ValidationError(where + " is out of range");
  return static_cast<std::uint32_t>(v);
}

double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError(where + " must be a number");
  return j.get<double>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ValidationError(where + " must be a string");
  return j.get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
  return p.is_absolute() || base.empty() ? p : base / p;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

void parse_search(const json& s, SearchParams& out) {
  require_object(s, "search");
  require_keys(s, "search",
               {"beam_width", "delta_threshold", "min_len", "max_len",
                "candidates_per_sentence"});
  if (s.contains("beam_width"))
    out.beam_width = as_u32(s.at("beam_width"), "search.beam_width");
  if (s.contains("delta_threshold"))
    out.delta_threshold =
        as_double(s.at("delta_threshold"), "search.delta_threshold");
  if (s.contains("min_len"))
    out.min_len = as_u32(s.at("min_len"), "search.min_len");
  if (s.contains("max_len"))
    out.max_len = as_u32(s.at("max_len"), "search.max_len");
  if (s.contains("candidates_per_sentence"))
    out.candidates_per_sentence = as_u32(s.at("candidates_per_sentence"),
                                         "search.candidates_per_sentence");
}

// Returns true when l1_max_len was given explicitly.
bool parse_selection(const json& s, SelectionParams& out) {
  require_object(s, "selection");
  require_keys(s, "selection",
               {"frequency_floors", "batch_size", "patience", "l1_max_len"});
  if (s.contains("frequency_floors")) {
    const json& floors = s.at("frequency_floors");
    if (!floors.is_array())
      throw ValidationError("selection.frequency_floors must be an array");
    out.frequency_floors.clear();
    for (const json& f : floors)
      out.frequency_floors.push_back(
          as_u64(f, "selection.frequency_floors entry"));
  }
  if (s.contains("batch_size"))
    out.batch_size = as_u32(s.at("batch_size"), "selection.batch_size");
  if (s.contains("patience"))
    out.patience = as_u32(s.at("patience"), "selection.patience");
  if (s.contains("l1_max_len")) {
    out.l1_max_len = as_u32(s.at("l1_max_len"), "selection.l1_max_len");
    return true;
  }
  return false;
}

std::string format_double(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string describe(const InduceParams& p) {
  std::string floors;
  for (std::uint64_t f : p.selection.frequency_floors) {
    if (!floors.empty()) floors += ',';
    floors += std::to_string(f);
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "beam=%u threshold=%g min_len=%u max_len=%u cps=%u "
                "min_count=%u floors=%s batch=%u patience=%u holdout=%g",
                p.search.beam_width, p.search.delta_threshold,
                p.search.min_len, p.search.max_len,
                p.search.candidates_per_sentence, p.min_count, floors.c_str(),
                p.selection.batch_size, p.selection.patience,
                p.holdout_fraction);
  return buf;
}

}  // namespace

void InduceParams::validate() const {
  search.validate();
  selection.validate();
  if (min_count < 1) throw ArgumentError("min_count must be at least 1");
  if (!(holdout_fraction > 0.0) || !(holdout_fraction < 1.0))
    throw ArgumentError("holdout_fraction must be in (0, 1)");
}

InduceResult induce_grammar(const Corpus& corpus, const Vocabulary& vocab,
                            const InduceParams& params) {
  params.validate();
  const HoldoutSplit split = split_holdout(corpus, params.holdout_fraction);

  InduceResult out;
  const PairCounts counts = count_pairs(split.train);
  if (counts.total == 0) {
    // No adjacent pairs anywhere (all sentences of length one): nothing to
    // associate, so the grammar is empty.
    out.grammar = Grammar::build({}, vocab);
  } else {
    out.matrix = delta_p(counts, params.min_count);
    out.provisional =
        build_provisional(split.train, out.matrix, params.search);
    out.grammar = select_grammar(out.provisional, split.train, split.test,
                                 vocab, params.selection);
  }
  out.grammar.meta().register_label = corpus.register_label;
  out.grammar.meta().exposure_words = corpus.word_count;
  out.grammar.meta().params = describe(params);
  return out;
}

std::vector<std::uint64_t> SweepConfig::exposure_steps() const {
  std::vector<std::uint64_t> steps;
  for (std::uint64_t e = exposure_start; e <= exposure_end;
       e += exposure_step)
    steps.push_back(e);
  return steps;
}

void SweepConfig::validate() const {
  if (registers.size() < 2)
    throw ArgumentError("sweep needs at least two registers");
  std::set<std::string> labels;
  for (const RegisterSource& r : registers) {
    if (!safe_label(r.label))
      throw ArgumentError("register label '" + r.label +
                          "' must be nonempty [A-Za-z0-9_-]");
    if (!labels.insert(r.label).second)
      throw ArgumentError("duplicate register label '" + r.label + "'");
    if (r.path.empty())
      throw ArgumentError("register '" + r.label + "' has no corpus path");
  }
  if (exposure_start < 1) throw ArgumentError("exposure start must be >= 1");
  if (exposure_step < 1) throw ArgumentError("exposure step must be >= 1");
  if (exposure_start > exposure_end)
    throw ArgumentError("exposure start exceeds exposure end");
  if (background_path.empty())
    throw ArgumentError("sweep needs a background corpus path");
  if (background_words < 1)
    throw ArgumentError("background size must be >= 1");
  induce.validate();
  if (!(fuzzy_threshold > 0.0) || fuzzy_threshold > 1.0)
    throw ArgumentError("threshold must be in (0, 1]");
  if (output_dir.empty()) throw ArgumentError("sweep needs an output dir");
}

SweepConfig SweepConfig::from_json(const std::string& text,
                                   const std::filesystem::path& base_dir) {
  const json root = parse_json(text, "sweep config");
  require_object(root, "sweep config");
  require_keys(root, "sweep config",
               {"registers", "exposure", "background", "cluster_model",
                "search", "selection", "min_count", "holdout_fraction",
                "threshold", "seed", "output_dir"});

  SweepConfig cfg;
  if (!root.contains("registers"))
    throw ValidationError("sweep config: missing 'registers'");
  const json& regs = root.at("registers");
  if (!regs.is_array())
    throw ValidationError("sweep config: 'registers' must be an array");
  for (const json& r : regs) {
    require_object(r, "register entry");
    require_keys(r, "register entry", {"label", "path"});
    if (!r.contains("label") || !r.contains("path"))
      throw ValidationError("register entry needs 'label' and 'path'");
    RegisterSource src;
    src.label = as_string(r.at("label"), "register label");
    src.path = resolve(base_dir, as_string(r.at("path"), "register path"));
    cfg.registers.push_back(std::move(src));
  }

  if (root.contains("exposure")) {
    const json& e = root.at("exposure");
    require_object(e, "exposure");
    require_keys(e, "exposure", {"start", "step", "end"});
    if (e.contains("start"))
      cfg.exposure_start = as_u64(e.at("start"), "exposure.start");
    if (e.contains("step"))
      cfg.exposure_step = as_u64(e.at("step"), "exposure.step");
    if (e.contains("end"))
      cfg.exposure_end = as_u64(e.at("end"), "exposure.end");
  }

  if (!root.contains("background"))
    throw ValidationError("sweep config: missing 'background'");
  const json& bg = root.at("background");
  require_object(bg, "background");
  require_keys(bg, "background", {"path", "words"});
  if (!bg.contains("path"))
    throw ValidationError("background needs 'path'");
  cfg.background_path =
      resolve(base_dir, as_string(bg.at("path"), "background.path"));
  if (bg.contains("words"))
    cfg.background_words = as_u64(bg.at("words"), "background.words");

  if (root.contains("cluster_model"))
    cfg.cluster_model_path = resolve(
        base_dir, as_string(root.at("cluster_model"), "cluster_model"));

  bool l1_explicit = false;
  if (root.contains("search")) parse_search(root.at("search"), cfg.induce.search);
  if (root.contains("selection"))
    l1_explicit = parse_selection(root.at("selection"), cfg.induce.selection);
  // The grammar-cost length code mirrors the search ceiling unless pinned.
  if (!l1_explicit) cfg.induce.selection.l1_max_len = cfg.induce.search.max_len;

  if (root.contains("min_count"))
    cfg.induce.min_count = as_u32(root.at("min_count"), "min_count");
  if (root.contains("holdout_fraction"))
    cfg.induce.holdout_fraction =
        as_double(root.at("holdout_fraction"), "holdout_fraction");
  if (root.contains("threshold"))
    cfg.fuzzy_threshold = as_double(root.at("threshold"), "threshold");
  if (root.contains("seed")) cfg.seed = as_u64(root.at("seed"), "seed");
  if (root.contains("output_dir"))
    cfg.output_dir =
        resolve(base_dir, as_string(root.at("output_dir"), "output_dir"));
  return cfg;
}

SweepConfig SweepConfig::from_json_file(const std::filesystem::path& path) {
  return from_json(read_text_file(path), path.parent_path());
}

SweepResult run_sweep(const SweepConfig& config, unsigned threads) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);

  Vocabulary vocab;
  std::vector<Corpus> corpora;
  corpora.reserve(config.registers.size());
  for (const RegisterSource& r : config.registers)
    corpora.push_back(load_corpus(r.path, vocab, r.label));
  Corpus background = load_corpus(config.background_path, vocab, "background");
  if (!config.cluster_model_path.empty()) {
    const ClusterModel model = ClusterModel::load(config.cluster_model_path);
    for (Corpus& c : corpora) c = assign_semantics(c, model, vocab);
    background = assign_semantics(background, model, vocab);
  }
  background = slice_exposure(background, config.background_words).corpus;

  const std::vector<std::uint64_t> steps = config.exposure_steps();
  const std::size_t num_registers = corpora.size();

  SweepResult result;
  result.cells.resize(steps.size() * num_registers);

  // Independent jobs with preallocated result slots: output does not
  // depend on scheduling, so any thread count gives identical files.
  std::atomic<std::size_t> cursor{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  auto run_cell = [&](std::size_t index) {
    const std::size_t step_index = index / num_registers;
    const std::size_t register_index = index % num_registers;
    const std::uint64_t exposure = steps[step_index];

    SliceResult slice = slice_exposure(corpora[register_index], exposure);
    InduceResult induced =
        induce_grammar(slice.corpus, vocab, config.induce);

    GrammarCell& cell = result.cells[index];
    cell.register_label = config.registers[register_index].label;
    cell.exposure_words = exposure;
    cell.grammar = std::move(induced.grammar);
    cell.grammar.meta().exposure_words = exposure;
    cell.grammar_size = cell.grammar.size();
    cell.truncated = slice.truncated;
    cell.grammar_path =
        config.output_dir /
        (cell.register_label + "_" + std::to_string(exposure) + ".cxg");
    save_grammar(cell.grammar, cell.grammar_path);
  };

  auto worker = [&] {
    for (;;) {
      const std::size_t index = cursor.fetch_add(1);
      if (index >= result.cells.size()) return;
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (failure) return;
      }
      try {
        run_cell(index);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const unsigned worker_count = std::max(1u, threads);
  if (worker_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (unsigned i = 0; i < worker_count; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t step_index = 0; step_index < steps.size(); ++step_index) {
    for (std::size_t i = 0; i < num_registers; ++i) {
      for (std::size_t j = i + 1; j < num_registers; ++j) {
        const GrammarCell& a = result.cells[step_index * num_registers + i];
        const GrammarCell& b = result.cells[step_index * num_registers + j];
        PairSimilarity p;
        p.exposure_words = steps[step_index];
        p.register_a = a.register_label;
        p.register_b = b.register_label;
        p.jaccard = jaccard(a.grammar, b.grammar);
        p.fuzzy_jaccard =
            fuzzy_jaccard(a.grammar, b.grammar, config.fuzzy_threshold);
        const WeightTable weights =
            background_weights(a.grammar, b.grammar, background);
        p.weighted_jaccard = weighted_jaccard(a.grammar, b.grammar, weights,
                                              config.fuzzy_threshold);
        p.grammar_size_a = a.grammar_size;
        p.grammar_size_b = b.grammar_size;
        result.pairs.push_back(std::move(p));
      }
    }
  }
  return result;
}

void SynthSpec::validate() const {
  if (registers.empty()) throw ArgumentError("synth needs registers");
  std::set<std::string> seen;
  for (const std::string& label : registers) {
    if (!safe_label(label))
      throw ArgumentError("register label '" + label +
                          "' must be nonempty [A-Za-z0-9_-]");
    if (!seen.insert(label).second)
      throw ArgumentError("duplicate register label '" + label + "'");
  }
  if (shared_constructions + private_constructions < 1)
    throw ArgumentError("synth needs a nonempty construction inventory");
  if (slot_len_min < 2)
    throw ArgumentError("slot_len min must be at least 2");
  if (slot_len_min > slot_len_max)
    throw ArgumentError("slot_len min exceeds max");
  if (lex_vocab < 1) throw ArgumentError("lex vocab must be >= 1");
  if (syn_vocab < 1 || syn_vocab > Vocabulary::upos_tags().size())
    throw ArgumentError("syn vocab must be in [1, 17]");
  if (sem_vocab < 1) throw ArgumentError("sem vocab must be >= 1");
  if (sentences_per_register < 1)
    throw ArgumentError("sentences_per_register must be >= 1");
  if (max_constructions_per_sentence < 1)
    throw ArgumentError("max_constructions_per_sentence must be >= 1");
  if (!(noise >= 0.0) || noise > 1.0)
    throw ArgumentError("noise must be in [0, 1]");
}

SynthSpec SynthSpec::from_json(const std::string& text) {
  const json root = parse_json(text, "synth spec");
  require_object(root, "synth spec");
  require_keys(root, "synth spec",
               {"registers", "shared_constructions", "private_constructions",
                "slot_len", "vocab", "sentences_per_register",
                "max_constructions_per_sentence", "noise", "seed"});

  SynthSpec spec;
  if (root.contains("registers")) {
    const json& regs = root.at("registers");
    if (!regs.is_array())
      throw ValidationError("synth spec: 'registers' must be an array");
    spec.registers.clear();
    for (const json& r : regs)
      spec.registers.push_back(as_string(r, "register label"));
  }
  if (root.contains("shared_constructions"))
    spec.shared_constructions =
        as_u32(root.at("shared_constructions"), "shared_constructions");
  if (root.contains("private_constructions"))
    spec.private_constructions =
        as_u32(root.at("private_constructions"), "private_constructions");
  if (root.contains("slot_len")) {
    const json& s = root.at("slot_len");
    require_object(s, "slot_len");
    require_keys(s, "slot_len", {"min", "max"});
    if (s.contains("min"))
      spec.slot_len_min = as_u32(s.at("min"), "slot_len.min");
    if (s.contains("max"))
      spec.slot_len_max = as_u32(s.at("max"), "slot_len.max");
  }
  if (root.contains("vocab")) {
    const json& v = root.at("vocab");
    require_object(v, "vocab");
    require_keys(v, "vocab", {"lex", "syn", "sem"});
    if (v.contains("lex")) spec.lex_vocab = as_u32(v.at("lex"), "vocab.lex");
    if (v.contains("syn")) spec.syn_vocab = as_u32(v.at("syn"), "vocab.syn");
    if (v.contains("sem")) spec.sem_vocab = as_u32(v.at("sem"), "vocab.sem");
  }
  if (root.contains("sentences_per_register"))
    spec.sentences_per_register =
        as_u32(root.at("sentences_per_register"), "sentences_per_register");
  if (root.contains("max_constructions_per_sentence"))
    spec.max_constructions_per_sentence =
        as_u32(root.at("max_constructions_per_sentence"),
               "max_constructions_per_sentence");
  if (root.contains("noise"))
    spec.noise = as_double(root.at("noise"), "noise");
  if (root.contains("seed")) spec.seed = as_u64(root.at("seed"), "seed");
  return spec;
}

SynthSpec SynthSpec::from_json_file(const std::filesystem::path& path) {
  return from_json(read_text_file(path));
}

namespace {

// Planted slots use raw inventory indices, not vocabulary ids: lex index,
// universal-tag index, or 1-based semantic cluster.
using PlantedSlot = std::pair<int, std::uint32_t>;
using Planted = std::vector<PlantedSlot>;

struct SynthToken {
  std::uint32_t lex;
  std::uint32_t syn;
  std::uint32_t sem;
};

}  // namespace

std::vector<std::filesystem::path> synth_generate(
    const SynthSpec& spec, const std::filesystem::path& output_dir) {
  spec.validate();
  std::filesystem::create_directories(output_dir);
  Rng rng(spec.seed);

  auto draw_construction = [&] {
    const auto len = static_cast<std::size_t>(
        rng.range(spec.slot_len_min, spec.slot_len_max));
    Planted c(len);
    for (PlantedSlot& slot : c) {
      slot.first = static_cast<int>(rng.below(3));
      switch (slot.first) {
        case 0: slot.second = static_cast<std::uint32_t>(rng.below(spec.lex_vocab)); break;
        case 1: slot.second = static_cast<std::uint32_t>(rng.below(spec.syn_vocab)); break;
        default: slot.second = static_cast<std::uint32_t>(1 + rng.below(spec.sem_vocab)); break;
      }
    }
    return c;
  };

  std::set<Planted> seen;
  auto draw_distinct = [&] {
    for (int tries = 0; tries < 10000; ++tries) {
      Planted c = draw_construction();
      if (seen.insert(c).second) return c;
    }
    throw ArgumentError(
        "synth: vocabulary too small for the requested inventory sizes");
  };

  std::vector<Planted> shared;
  shared.reserve(spec.shared_constructions);
  for (std::uint32_t i = 0; i < spec.shared_constructions; ++i)
    shared.push_back(draw_distinct());

  std::vector<std::vector<Planted>> inventories;  // shared + private, per register
  inventories.reserve(spec.registers.size());
  for (std::size_t r = 0; r < spec.registers.size(); ++r) {
    std::vector<Planted> inventory = shared;
    for (std::uint32_t i = 0; i < spec.private_constructions; ++i)
      inventory.push_back(draw_distinct());
    inventories.push_back(std::move(inventory));
  }

  const auto upos = Vocabulary::upos_tags();
  std::vector<std::filesystem::path> paths;
  paths.reserve(spec.registers.size());

  for (std::size_t r = 0; r < spec.registers.size(); ++r) {
    const std::vector<Planted>& inventory = inventories[r];
    std::string out;
    out += "# synthetic register '" + spec.registers[r] +
           "' seed=" + std::to_string(spec.seed) + "\n";

    std::vector<SynthToken> sentence;
    for (std::uint32_t s = 0; s < spec.sentences_per_register; ++s) {
      sentence.clear();
      const auto draws =
          rng.range(1, spec.max_constructions_per_sentence);
      for (std::uint64_t d = 0; d < draws; ++d) {
        const Planted& c = inventory[rng.below(inventory.size())];
        for (const PlantedSlot& slot : c) {
          SynthToken t;
          t.lex = slot.first == 0
                      ? slot.second
                      : static_cast<std::uint32_t>(rng.below(spec.lex_vocab));
          t.syn = slot.first == 1
                      ? slot.second
                      : static_cast<std::uint32_t>(rng.below(spec.syn_vocab));
          t.sem = slot.first == 2
                      ? slot.second
                      : static_cast<std::uint32_t>(1 + rng.below(spec.sem_vocab));
          sentence.push_back(t);
        }
      }
      for (SynthToken& t : sentence) {
        if (rng.chance(spec.noise)) {
          t.lex = static_cast<std::uint32_t>(rng.below(spec.lex_vocab));
          t.syn = static_cast<std::uint32_t>(rng.below(spec.syn_vocab));
          t.sem = static_cast<std::uint32_t>(1 + rng.below(spec.sem_vocab));
        }
      }
      for (const SynthToken& t : sentence) {
        out += 'w';
        out += std::to_string(t.lex);
        out += '\t';
        out += upos[t.syn];
        out += '\t';
        out += std::to_string(t.sem);
        out += '\n';
      }
      out += '\n';
    }

    const std::filesystem::path path =
        output_dir / (spec.registers[r] + ".tsv");
    write_text_file(path, out);
    paths.push_back(path);
  }
  return paths;
}

std::string csv_text(const SweepResult& result) {
  std::vector<const PairSimilarity*> rows;
  rows.reserve(result.pairs.size());
  for (const PairSimilarity& p : result.pairs) rows.push_back(&p);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const PairSimilarity* x, const PairSimilarity* y) {
                     return std::tie(x->exposure_words, x->register_a,
                                     x->register_b) <
                            std::tie(y->exposure_words, y->register_a,
                                     y->register_b);
                   });

  std::string out =
      "exposure_words,register_a,register_b,jaccard,fuzzy_jaccard,"
      "weighted_jaccard,grammar_size_a,grammar_size_b\n";
  for (const PairSimilarity* p : rows) {
    out += std::to_string(p->exposure_words);
    out += ',';
    out += p->register_a;
    out += ',';
    out += p->register_b;
    out += ',';
    out += format_double(p->jaccard, 6);
    out += ',';
    out += format_double(p->fuzzy_jaccard, 6);
    out += ',';
    out += format_double(p->weighted_jaccard, 6);
    out += ',';
    out += std::to_string(p->grammar_size_a);
    out += ',';
    out += std::to_string(p->grammar_size_b);
    out += '\n';
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  write_text_file(path, csv_text(result));
}

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

constexpr std::string_view kPalette[] = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
};

std::string coord(double v) { return format_double(v, 2); }

}  // namespace

std::string plot_svg(const SweepResult& result, bool weighted) {
  struct Series {
    std::string label;
    std::vector<std::pair<std::uint64_t, double>> points;
  };
  std::vector<Series> series;
  for (const PairSimilarity& p : result.pairs) {
    const std::string label = p.register_a + "-" + p.register_b;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.label == label; });
    if (it == series.end()) {
      series.push_back({label, {}});
      it = series.end() - 1;
    }
    it->points.emplace_back(p.exposure_words,
                            weighted ? p.weighted_jaccard : p.fuzzy_jaccard);
  }
  std::vector<std::uint64_t> xs;
  for (Series& s : series) {
    std::sort(s.points.begin(), s.points.end());
    for (const auto& [x, y] : s.points) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const double width = 640, height = 440;
  const double ml = 70, mr = 160, mt = 40, mb = 60;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;
  const double x_min = xs.empty() ? 0.0 : static_cast<double>(xs.front());
  double x_max = xs.empty() ? 1.0 : static_cast<double>(xs.back());
  if (x_max <= x_min) x_max = x_min + 1.0;

  auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return mt + (1.0 - y) * plot_h; };

  const std::string measure =
      weighted ? "weighted Jaccard" : "fuzzy Jaccard";
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"440\" viewBox=\"0 0 640 440\" font-family=\"sans-serif\" "
         "font-size=\"12\">\n";
  svg += "<rect width=\"640\" height=\"440\" fill=\"white\"/>\n";
  svg += "<text x=\"" + coord(ml) + "\" y=\"22\" font-size=\"15\">" +
         xml_escape("grammar overlap by exposure (" + measure + ")") +
         "</text>\n";

  for (int i = 0; i <= 4; ++i) {
    const double y = 0.25 * i;
    const double py = sy(y);
    svg += "<line x1=\"" + coord(ml) + "\" y1=\"" + coord(py) + "\" x2=\"" +
           coord(ml + plot_w) + "\" y2=\"" + coord(py) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + coord(ml - 8) + "\" y=\"" + coord(py + 4) +
           "\" text-anchor=\"end\">" + format_double(y, 2) + "</text>\n";
  }

  // At most six x ticks, spread over the observed steps.
  std::vector<std::uint64_t> ticks;
  if (xs.size() <= 6) {
    ticks = xs;
  } else {
    for (int i = 0; i <= 5; ++i)
      ticks.push_back(xs[(xs.size() - 1) * i / 5]);
  }
  for (std::uint64_t t : ticks) {
    const double px = sx(static_cast<double>(t));
    svg += "<line x1=\"" + coord(px) + "\" y1=\"" + coord(mt + plot_h) +
           "\" x2=\"" + coord(px) + "\" y2=\"" + coord(mt + plot_h + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + coord(px) + "\" y=\"" + coord(mt + plot_h + 20) +
           "\" text-anchor=\"middle\">" + std::to_string(t) + "</text>\n";
  }

  svg += "<line x1=\"" + coord(ml) + "\" y1=\"" + coord(mt) + "\" x2=\"" +
         coord(ml) + "\" y2=\"" + coord(mt + plot_h) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + coord(ml) + "\" y1=\"" + coord(mt + plot_h) +
         "\" x2=\"" + coord(ml + plot_w) + "\" y2=\"" + coord(mt + plot_h) +
         "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + coord(ml + plot_w / 2) + "\" y=\"" +
         coord(height - 15) +
         "\" text-anchor=\"middle\">exposure (words)</text>\n";
  svg += "<text x=\"18\" y=\"" + coord(mt + plot_h / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         coord(mt + plot_h / 2) + ")\">" + xml_escape(measure) +
         "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::string_view color = kPalette[i % std::size(kPalette)];
    std::string points;
    for (const auto& [x, y] : series[i].points) {
      if (!points.empty()) points += ' ';
      points += coord(sx(static_cast<double>(x)));
      points += ',';
      points += coord(sy(y));
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";

    const double ly = mt + 14 + 18 * static_cast<double>(i);
    svg += "<line x1=\"" + coord(width - mr + 14) + "\" y1=\"" + coord(ly) +
           "\" x2=\"" + coord(width - mr + 38) + "\" y2=\"" + coord(ly) +
           "\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + coord(width - mr + 44) + "\" y=\"" +
           coord(ly + 4) + "\">" + xml_escape(series[i].label) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plots(const SweepResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "fuzzy_jaccard.svg", plot_svg(result, false));
  write_text_file(dir / "weighted_jaccard.svg", plot_svg(result, true));
}

}  // namespace cxg
