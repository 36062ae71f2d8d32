#include "cxg/mdl.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cxg/errors.hpp"

namespace cxg {

void SelectionParams::validate() const {
  if (frequency_floors.empty())
    throw ArgumentError("at least one frequency floor is required");
  if (!std::is_sorted(frequency_floors.begin(), frequency_floors.end()))
    throw ArgumentError("frequency floors must be sorted ascending");
  for (std::uint64_t floor : frequency_floors)
    if (floor < 1) throw ArgumentError("frequency floors must be positive");
  if (batch_size < 1) throw ArgumentError("batch_size must be at least 1");
  if (patience < 1) throw ArgumentError("patience must be at least 1");
  if (l1_max_len < 2) throw ArgumentError("l1_max_len must be at least 2");
}

double l1_cost(const Grammar& grammar, const Vocabulary& vocab,
               std::uint32_t max_len) {
  if (max_len < 2) throw ArgumentError("max_len must be at least 2");
  const double length_bits = std::log2(static_cast<double>(max_len));
  const double dim_bits = std::log2(3.0);
  double total = 0.0;
  for (const Construction& c : grammar.constructions()) {
    total += length_bits;
    for (const SlotConstraint& slot : c) {
      std::size_t inventory = vocab.size(slot.dim);
      if (inventory == 0)
        throw ValidationError(
            std::string("slot uses empty vocabulary dimension ") +
            std::string(dim_name(slot.dim)));
      total += dim_bits + std::log2(static_cast<double>(inventory));
    }
  }
  return total;
}

double l2_cost(const Corpus& corpus, const Grammar& grammar) {
  GrammarIndex index(grammar);

  // Pass 1: one deterministic segmentation per sentence.
  std::vector<Segmentation> segmentations;
  segmentations.reserve(corpus.sentences.size());
  std::vector<std::uint64_t> uses(grammar.size(), 0);
  std::uint64_t escapes = 0;
  for (const Sentence& sentence : corpus.sentences) {
    Segmentation seg = greedy_cover(sentence, index);
    for (const CoverSpan& span : seg.spans) ++uses[span.construction];
    escapes += seg.uncovered.size();
    segmentations.push_back(std::move(seg));
  }
  std::uint64_t total_events = escapes;
  for (std::uint64_t n : uses) total_events += n;

  // Unigram model over the corpus's own lexical inventory.
  std::unordered_map<FillerId, std::uint64_t> lex_freq;
  for (const Sentence& sentence : corpus.sentences)
    for (const AnnotatedToken& token : sentence.tokens) ++lex_freq[token.lex];
  const double unigram_denom =
      static_cast<double>(corpus.word_count) +
      static_cast<double>(lex_freq.size());

  // Pass 2: price every event with add-one smoothing over the event space
  // {constructions} + {escape}.
  const double event_denom = static_cast<double>(total_events) +
                             static_cast<double>(grammar.size()) + 1.0;
  std::vector<double> span_bits(grammar.size(), 0.0);
  for (std::size_t ci = 0; ci < grammar.size(); ++ci)
    span_bits[ci] =
        -std::log2((static_cast<double>(uses[ci]) + 1.0) / event_denom);
  const double escape_bits =
      -std::log2((static_cast<double>(escapes) + 1.0) / event_denom);

  double total = 0.0;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const Segmentation& seg = segmentations[s];
    for (const CoverSpan& span : seg.spans) total += span_bits[span.construction];
    for (std::uint32_t pos : seg.uncovered) {
      FillerId lex = corpus.sentences[s].tokens[pos].lex;
      double p_unigram =
          (static_cast<double>(lex_freq[lex]) + 1.0) / unigram_denom;
      total += escape_bits - std::log2(p_unigram);
    }
  }
  return total;
}

MdlScore mdl_score(const Grammar& grammar, const Corpus& corpus,
                   const Vocabulary& vocab, std::uint32_t max_len) {
  return {l1_cost(grammar, vocab, max_len), l2_cost(corpus, grammar)};
}

namespace {

struct RankedCandidate {
  const Construction* construction;
  std::uint64_t frequency;
  double rank_key;  // frequency x mean score
  std::string serial;
};

}  // namespace

Grammar select_grammar(const ProvisionalGrammar& provisional,
                       const Corpus& train, const Corpus& test,
                       const Vocabulary& vocab,
                       const SelectionParams& params) {
  params.validate();

  std::vector<RankedCandidate> ranking;
  ranking.reserve(provisional.size());
  for (const auto& [construction, entry] : provisional.entries()) {
    double mean = entry.total_score / static_cast<double>(entry.frequency);
    ranking.push_back({&construction, entry.frequency,
                       static_cast<double>(entry.frequency) * mean,
                       construction_to_string(construction, vocab)});
  }
  std::sort(ranking.begin(), ranking.end(),
            [](const RankedCandidate& a, const RankedCandidate& b) {
              if (a.rank_key != b.rank_key) return a.rank_key > b.rank_key;
              return a.serial < b.serial;
            });

  auto evaluate = [&](const std::vector<const Construction*>& subset) {
    std::vector<Construction> constructions;
    constructions.reserve(subset.size());
    for (const Construction* c : subset) constructions.push_back(*c);
    Grammar g = Grammar::build(std::move(constructions), vocab);
    return mdl_score(g, test, vocab, params.l1_max_len).total_bits();
  };

  const double empty_total = evaluate({});
  std::vector<const Construction*> best_selection;
  double best_total = empty_total;

  for (std::uint64_t floor : params.frequency_floors) {
    std::vector<const Construction*> selected;
    double current_total = empty_total;
    std::uint32_t rejected_streak = 0;

    std::vector<const Construction*> survivors;
    for (const RankedCandidate& candidate : ranking)
      if (candidate.frequency >= floor)
        survivors.push_back(candidate.construction);

    for (std::size_t offset = 0; offset < survivors.size();
         offset += params.batch_size) {
      std::size_t batch_end =
          std::min(offset + params.batch_size, survivors.size());
      std::vector<const Construction*> trial = selected;
      trial.insert(trial.end(), survivors.begin() + offset,
                   survivors.begin() + batch_end);
      double trial_total = evaluate(trial);
      if (trial_total < current_total) {
        selected = std::move(trial);
        current_total = trial_total;
        rejected_streak = 0;
      } else if (++rejected_streak >= params.patience) {
        break;
      }
    }

    if (current_total < best_total) {
      best_total = current_total;
      best_selection = std::move(selected);
    }
  }

  std::vector<Construction> result;
  result.reserve(best_selection.size());
  for (const Construction* c : best_selection) result.push_back(*c);
  GrammarMeta meta;
  meta.register_label = train.register_label;
  meta.exposure_words = train.word_count + test.word_count;
  return Grammar::build(std::move(result), vocab, std::move(meta));
}

HoldoutSplit split_holdout(const Corpus& corpus, double test_fraction) {
  if (!(test_fraction >= 0.0) || !(test_fraction < 1.0))
    throw ArgumentError("test_fraction must lie in [0, 1)");
  HoldoutSplit split;
  split.train.register_label = corpus.register_label;
  split.test.register_label = corpus.register_label;
  if (corpus.sentences.empty()) return split;

  const auto target = static_cast<std::uint64_t>(
      std::ceil(test_fraction * static_cast<double>(corpus.word_count)));
  // Smallest sentence suffix holding at least `target` words; the train
  // side always keeps the first sentence.
  std::size_t cut = corpus.sentences.size();  // index of first test sentence
  std::uint64_t tail_words = 0;
  while (cut > 1 && tail_words < target) {
    --cut;
    tail_words += corpus.sentences[cut].size();
  }

  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    Corpus& side = i < cut ? split.train : split.test;
    side.sentences.push_back(corpus.sentences[i]);
    side.word_count += corpus.sentences[i].size();
  }
  return split;
}

}  // namespace cxg
