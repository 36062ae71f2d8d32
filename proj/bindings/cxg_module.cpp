#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>
#include <tuple>

#include "cxg/association.hpp"
#include "cxg/candidates.hpp"
#include "cxg/corpus.hpp"
#include "cxg/errors.hpp"
#include "cxg/experiment.hpp"
#include "cxg/grammar.hpp"
#include "cxg/mdl.hpp"
#include "cxg/similarity.hpp"

namespace py = pybind11;
using namespace cxg;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Construction grammar induction and register comparison";

  // Exception classes; most-derived registered last so translation picks
  // the closest match.
  py::register_exception<ArgumentError>(m, "ArgumentError");
  py::register_exception<IoError>(m, "IoError");
  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<EmptyCorpusError>(m, "EmptyCorpusError");

  py::enum_<Dim>(m, "Dim")
      .value("LEX", Dim::LEX)
      .value("SYN", Dim::SYN)
      .value("SEM", Dim::SEM);

  py::class_<Filler>(m, "Filler")
      .def(py::init([](Dim dim, FillerId id) { return Filler{dim, id}; }),
           py::arg("dim"), py::arg("id"))
      .def_readwrite("dim", &Filler::dim)
      .def_readwrite("id", &Filler::id)
      .def(py::self == py::self);

  py::class_<SlotConstraint>(m, "SlotConstraint")
      .def(py::init([](Dim dim, FillerId id) {
             return SlotConstraint{dim, id};
           }),
           py::arg("dim"), py::arg("id"))
      .def_readwrite("dim", &SlotConstraint::dim)
      .def_readwrite("id", &SlotConstraint::id)
      .def(py::self == py::self)
      .def("__repr__", [](const SlotConstraint& s) {
        std::ostringstream out;
        out << "SlotConstraint(" << dim_name(s.dim) << ", " << s.id << ")";
        return out.str();
      });

  py::class_<Vocabulary>(m, "Vocabulary")
      .def(py::init<>())
      .def("intern", &Vocabulary::intern, py::arg("dim"), py::arg("surface"))
      .def("find", &Vocabulary::find, py::arg("dim"), py::arg("surface"))
      .def("surface", &Vocabulary::surface, py::arg("dim"), py::arg("id"),
           py::return_value_policy::copy)
      .def("size", &Vocabulary::size, py::arg("dim"))
      .def_static("is_upos", &Vocabulary::is_upos, py::arg("tag"))
      .def_static("upos_tags", [] {
        std::vector<std::string> tags;
        for (std::string_view tag : Vocabulary::upos_tags())
          tags.emplace_back(tag);
        return tags;
      });

  py::class_<AnnotatedToken>(m, "AnnotatedToken")
      .def_readonly("lex", &AnnotatedToken::lex)
      .def_readonly("syn", &AnnotatedToken::syn)
      .def_readonly("sem", &AnnotatedToken::sem);

  py::class_<Sentence>(m, "Sentence")
      .def_readonly("tokens", &Sentence::tokens)
      .def("__len__", &Sentence::size);

  py::class_<Corpus>(m, "Corpus")
      .def_readonly("sentences", &Corpus::sentences)
      .def_readonly("word_count", &Corpus::word_count)
      .def_readonly("register_label", &Corpus::register_label)
      .def("__len__", &Corpus::num_sentences);

  m.def("load_corpus", &load_corpus, py::arg("path"), py::arg("vocab"),
        py::arg("register_label") = "");
  m.def("load_corpus_text", &load_corpus_text, py::arg("text"),
        py::arg("vocab"), py::arg("register_label") = "",
        py::arg("source_name") = "<text>");

  py::class_<EmbeddingTable>(m, "EmbeddingTable")
      .def_static("load", &EmbeddingTable::load, py::arg("path"))
      .def_static("parse", &EmbeddingTable::parse, py::arg("text"),
                  py::arg("source_name") = "<text>")
      .def("__len__", &EmbeddingTable::size)
      .def("dim", &EmbeddingTable::dim);

  py::class_<ClusterModel>(m, "ClusterModel")
      .def_readonly("k", &ClusterModel::k)
      .def_readonly("dim", &ClusterModel::dim)
      .def_readonly("seed", &ClusterModel::seed)
      .def_readonly("inertia_history", &ClusterModel::inertia_history)
      .def("cluster_of", &ClusterModel::cluster_of, py::arg("word"))
      .def("save", &ClusterModel::save, py::arg("path"))
      .def_static("load", &ClusterModel::load, py::arg("path"));

  m.def("cluster_embeddings", &cluster_embeddings, py::arg("table"),
        py::arg("k"), py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("assign_semantics", &assign_semantics, py::arg("corpus"),
        py::arg("model"), py::arg("vocab"));
  m.def(
      "slice_exposure",
      [](const Corpus& corpus, std::uint64_t n_words) {
        SliceResult r = slice_exposure(corpus, n_words);
        return py::make_tuple(std::move(r.corpus), r.truncated);
      },
      py::arg("corpus"), py::arg("n_words"), "Returns (corpus, truncated).");

  py::class_<PairCounts>(m, "PairCounts")
      .def_readonly("total", &PairCounts::total)
      .def("pair_count", &PairCounts::pair_count, py::arg("left"),
           py::arg("right"))
      .def("left_count", &PairCounts::left_count, py::arg("filler"))
      .def("right_count", &PairCounts::right_count, py::arg("filler"))
      .def("merge", &PairCounts::merge, py::arg("other"));
  m.def("count_pairs", &count_pairs, py::arg("corpus"));

  py::enum_<Direction>(m, "Direction")
      .value("LR", Direction::LR)
      .value("RL", Direction::RL);

  py::class_<DeltaPMatrix>(m, "DeltaPMatrix")
      .def("lookup", &DeltaPMatrix::lookup, py::arg("left"), py::arg("right"),
           py::arg("direction"))
      .def("__len__", &DeltaPMatrix::size)
      .def("min_count", &DeltaPMatrix::min_count)
      .def("dump", [](const DeltaPMatrix& matrix, const Vocabulary& vocab) {
        std::ostringstream out;
        matrix.dump(out, vocab);
        return out.str();
      });
  m.def("delta_p", &delta_p, py::arg("counts"), py::arg("min_count") = 3);

  py::class_<SearchParams>(m, "SearchParams")
      .def(py::init<>())
      .def_readwrite("beam_width", &SearchParams::beam_width)
      .def_readwrite("delta_threshold", &SearchParams::delta_threshold)
      .def_readwrite("min_len", &SearchParams::min_len)
      .def_readwrite("max_len", &SearchParams::max_len)
      .def_readwrite("candidates_per_sentence",
                     &SearchParams::candidates_per_sentence)
      .def("validate", &SearchParams::validate);

  py::class_<ScoredCandidate>(m, "ScoredCandidate")
      .def_readonly("construction", &ScoredCandidate::construction)
      .def_readonly("score", &ScoredCandidate::score)
      .def_readonly("sentence_index", &ScoredCandidate::sentence_index)
      .def_readonly("start", &ScoredCandidate::start);
  m.def("search_sentence", &search_sentence, py::arg("sentence"),
        py::arg("matrix"), py::arg("params"), py::arg("sentence_index") = 0);

  py::class_<ProvisionalGrammar>(m, "ProvisionalGrammar")
      .def(py::init<>())
      .def("add", &ProvisionalGrammar::add, py::arg("construction"),
           py::arg("score"))
      .def("merge", &ProvisionalGrammar::merge, py::arg("other"))
      .def("__len__", &ProvisionalGrammar::size)
      .def("empty", &ProvisionalGrammar::empty)
      .def("items", [](const ProvisionalGrammar& g) {
        std::vector<std::tuple<Construction, std::uint64_t, double>> items;
        items.reserve(g.size());
        for (const auto& [construction, entry] : g.entries())
          items.emplace_back(construction, entry.frequency, entry.total_score);
        return items;
      });
  m.def("build_provisional", &build_provisional, py::arg("corpus"),
        py::arg("matrix"), py::arg("params"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<GrammarMeta>(m, "GrammarMeta")
      .def(py::init<>())
      .def_readwrite("register_label", &GrammarMeta::register_label)
      .def_readwrite("exposure_words", &GrammarMeta::exposure_words)
      .def_readwrite("params", &GrammarMeta::params)
      .def(py::self == py::self);

  py::class_<Grammar>(m, "Grammar")
      .def(py::init<>())
      .def_static("build", &Grammar::build, py::arg("constructions"),
                  py::arg("vocab"), py::arg("meta") = GrammarMeta{})
      .def("__len__", &Grammar::size)
      .def("empty", &Grammar::empty)
      .def("at", &Grammar::at, py::arg("index"))
      .def("serial", &Grammar::serial, py::arg("index"),
           py::return_value_policy::copy)
      .def_property_readonly("serials",
                             [](const Grammar& g) { return g.serials(); })
      .def_property_readonly(
          "constructions", [](const Grammar& g) { return g.constructions(); })
      .def("contains", &Grammar::contains, py::arg("construction"))
      .def_property_readonly("meta",
                             [](const Grammar& g) { return g.meta(); });

  m.def("construction_to_string", &construction_to_string,
        py::arg("construction"), py::arg("vocab"));
  m.def("serialize", &serialize, py::arg("grammar"));
  m.def("deserialize", &deserialize, py::arg("text"), py::arg("vocab"),
        py::arg("extend_vocab") = false, py::arg("source_name") = "<text>");
  m.def("save_grammar", &save_grammar, py::arg("grammar"), py::arg("path"));
  m.def("load_grammar", &load_grammar, py::arg("path"), py::arg("vocab"),
        py::arg("extend_vocab") = false);

  py::class_<Span>(m, "Span")
      .def_readonly("sentence", &Span::sentence)
      .def_readonly("start", &Span::start);
  py::class_<MatchTable>(m, "MatchTable")
      .def_readonly("frequency", &MatchTable::frequency)
      .def_readonly("spans", &MatchTable::spans);
  m.def("match_corpus", &match_corpus, py::arg("grammar"), py::arg("corpus"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<CoverSpan>(m, "CoverSpan")
      .def_readonly("start", &CoverSpan::start)
      .def_readonly("length", &CoverSpan::length)
      .def_readonly("construction", &CoverSpan::construction);
  py::class_<Segmentation>(m, "Segmentation")
      .def_readonly("spans", &Segmentation::spans)
      .def_readonly("uncovered", &Segmentation::uncovered);
  m.def("greedy_cover",
        py::overload_cast<const Sentence&, const Grammar&>(&greedy_cover),
        py::arg("sentence"), py::arg("grammar"));

  py::class_<SelectionParams>(m, "SelectionParams")
      .def(py::init<>())
      .def_readwrite("frequency_floors", &SelectionParams::frequency_floors)
      .def_readwrite("batch_size", &SelectionParams::batch_size)
      .def_readwrite("patience", &SelectionParams::patience)
      .def_readwrite("l1_max_len", &SelectionParams::l1_max_len)
      .def("validate", &SelectionParams::validate);

  py::class_<MdlScore>(m, "MdlScore")
      .def_readonly("l1_bits", &MdlScore::l1_bits)
      .def_readonly("l2_bits", &MdlScore::l2_bits)
      .def("total_bits", &MdlScore::total_bits);
  m.def("l1_cost", &l1_cost, py::arg("grammar"), py::arg("vocab"),
        py::arg("max_len") = 8);
  m.def("l2_cost", &l2_cost, py::arg("corpus"), py::arg("grammar"));
  m.def("mdl_score", &mdl_score, py::arg("grammar"), py::arg("corpus"),
        py::arg("vocab"), py::arg("max_len") = 8);
  m.def("select_grammar", &select_grammar, py::arg("provisional"),
        py::arg("train"), py::arg("test"), py::arg("vocab"),
        py::arg("params"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "split_holdout",
      [](const Corpus& corpus, double test_fraction) {
        HoldoutSplit split = split_holdout(corpus, test_fraction);
        return py::make_tuple(std::move(split.train), std::move(split.test));
      },
      py::arg("corpus"), py::arg("test_fraction") = 0.1,
      "Returns (train, test).");

  m.def("jaccard", &jaccard, py::arg("a"), py::arg("b"));
  m.def("subseq_ratio", &subseq_ratio, py::arg("a"), py::arg("b"));
  py::class_<MatchedPair>(m, "MatchedPair")
      .def_readonly("a_index", &MatchedPair::a_index)
      .def_readonly("b_index", &MatchedPair::b_index)
      .def_readonly("ratio", &MatchedPair::ratio);
  py::class_<MatchPairing>(m, "MatchPairing")
      .def_readonly("pairs", &MatchPairing::pairs)
      .def_readonly("unmatched_a", &MatchPairing::unmatched_a)
      .def_readonly("unmatched_b", &MatchPairing::unmatched_b);
  m.def("fuzzy_pairing", &fuzzy_pairing, py::arg("a"), py::arg("b"),
        py::arg("threshold") = kDefaultFuzzyThreshold);
  m.def("fuzzy_jaccard", &fuzzy_jaccard, py::arg("a"), py::arg("b"),
        py::arg("threshold") = kDefaultFuzzyThreshold);

  py::class_<WeightTable>(m, "WeightTable")
      .def(py::init<>())
      .def("set", &WeightTable::set, py::arg("construction"),
           py::arg("weight"))
      .def(
          "find",
          [](const WeightTable& table,
             const Construction& c) -> std::optional<double> {
            const double* w = table.find(c);
            if (!w) return std::nullopt;
            return *w;
          },
          py::arg("construction"))
      .def("__len__", &WeightTable::size);
  m.def("background_weights", &background_weights, py::arg("a"), py::arg("b"),
        py::arg("background"), py::arg("epsilon") = 0.5,
        py::call_guard<py::gil_scoped_release>());
  m.def("weighted_jaccard", &weighted_jaccard, py::arg("a"), py::arg("b"),
        py::arg("weights"), py::arg("threshold") = kDefaultFuzzyThreshold);

  py::class_<InduceParams>(m, "InduceParams")
      .def(py::init<>())
      .def_readwrite("search", &InduceParams::search)
      .def_readwrite("selection", &InduceParams::selection)
      .def_readwrite("min_count", &InduceParams::min_count)
      .def_readwrite("holdout_fraction", &InduceParams::holdout_fraction)
      .def("validate", &InduceParams::validate);

  py::class_<InduceResult>(m, "InduceResult")
      .def_readonly("grammar", &InduceResult::grammar)
      .def_readonly("matrix", &InduceResult::matrix)
      .def_readonly("provisional", &InduceResult::provisional);
  m.def("induce_grammar", &induce_grammar, py::arg("corpus"),
        py::arg("vocab"), py::arg("params") = InduceParams{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<RegisterSource>(m, "RegisterSource")
      .def(py::init([](std::string label, std::filesystem::path path) {
             return RegisterSource{std::move(label), std::move(path)};
           }),
           py::arg("label"), py::arg("path"))
      .def_readwrite("label", &RegisterSource::label)
      .def_readwrite("path", &RegisterSource::path);

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("registers", &SweepConfig::registers)
      .def_readwrite("exposure_start", &SweepConfig::exposure_start)
      .def_readwrite("exposure_step", &SweepConfig::exposure_step)
      .def_readwrite("exposure_end", &SweepConfig::exposure_end)
      .def_readwrite("background_path", &SweepConfig::background_path)
      .def_readwrite("background_words", &SweepConfig::background_words)
      .def_readwrite("cluster_model_path", &SweepConfig::cluster_model_path)
      .def_readwrite("induce", &SweepConfig::induce)
      .def_readwrite("fuzzy_threshold", &SweepConfig::fuzzy_threshold)
      .def_readwrite("seed", &SweepConfig::seed)
      .def_readwrite("output_dir", &SweepConfig::output_dir)
      .def("exposure_steps", &SweepConfig::exposure_steps)
      .def("validate", &SweepConfig::validate)
      .def_static("from_json", &SweepConfig::from_json, py::arg("text"),
                  py::arg("base_dir") = std::filesystem::path())
      .def_static("from_json_file", &SweepConfig::from_json_file,
                  py::arg("path"));

  py::class_<GrammarCell>(m, "GrammarCell")
      .def_readonly("register_label", &GrammarCell::register_label)
      .def_readonly("exposure_words", &GrammarCell::exposure_words)
      .def_readonly("grammar", &GrammarCell::grammar)
      .def_readonly("grammar_path", &GrammarCell::grammar_path)
      .def_readonly("grammar_size", &GrammarCell::grammar_size)
      .def_readonly("truncated", &GrammarCell::truncated);

  py::class_<PairSimilarity>(m, "PairSimilarity")
      .def_readonly("exposure_words", &PairSimilarity::exposure_words)
      .def_readonly("register_a", &PairSimilarity::register_a)
      .def_readonly("register_b", &PairSimilarity::register_b)
      .def_readonly("jaccard", &PairSimilarity::jaccard)
      .def_readonly("fuzzy_jaccard", &PairSimilarity::fuzzy_jaccard)
      .def_readonly("weighted_jaccard", &PairSimilarity::weighted_jaccard)
      .def_readonly("grammar_size_a", &PairSimilarity::grammar_size_a)
      .def_readonly("grammar_size_b", &PairSimilarity::grammar_size_b);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("cells", &SweepResult::cells)
      .def_readonly("pairs", &SweepResult::pairs);

  m.def("run_sweep", &run_sweep, py::arg("config"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("emit_csv", &emit_csv, py::arg("result"), py::arg("path"));
  m.def("csv_text", &csv_text, py::arg("result"));
  m.def("emit_plots", &emit_plots, py::arg("result"), py::arg("dir"));
  m.def("plot_svg", &plot_svg, py::arg("result"), py::arg("weighted"));

  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init<>())
      .def_readwrite("registers", &SynthSpec::registers)
      .def_readwrite("shared_constructions", &SynthSpec::shared_constructions)
      .def_readwrite("private_constructions",
                     &SynthSpec::private_constructions)
      .def_readwrite("slot_len_min", &SynthSpec::slot_len_min)
      .def_readwrite("slot_len_max", &SynthSpec::slot_len_max)
      .def_readwrite("lex_vocab", &SynthSpec::lex_vocab)
      .def_readwrite("syn_vocab", &SynthSpec::syn_vocab)
      .def_readwrite("sem_vocab", &SynthSpec::sem_vocab)
      .def_readwrite("sentences_per_register",
                     &SynthSpec::sentences_per_register)
      .def_readwrite("max_constructions_per_sentence",
                     &SynthSpec::max_constructions_per_sentence)
      .def_readwrite("noise", &SynthSpec::noise)
      .def_readwrite("seed", &SynthSpec::seed)
      .def("validate", &SynthSpec::validate)
      .def_static("from_json", &SynthSpec::from_json, py::arg("text"))
      .def_static("from_json_file", &SynthSpec::from_json_file,
                  py::arg("path"));
  m.def("synth_generate", &synth_generate, py::arg("spec"),
        py::arg("output_dir"));
}
