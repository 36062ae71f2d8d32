#pragma once

#include <cstdint>
#include <vector>

#include "cxg/candidates.hpp"
#include "cxg/corpus.hpp"
#include "cxg/grammar.hpp"

namespace cxg {

struct MdlScore {
  double l1_bits = 0.0;
  double l2_bits = 0.0;

  double total_bits() const { return l1_bits + l2_bits; }
};

struct SelectionParams {
  std::vector<std::uint64_t> frequency_floors{1, 2, 3, 5, 10};
  std::uint32_t batch_size = 50;
  std::uint32_t patience = 2;
  std::uint32_t l1_max_len = 8;  // length-field code size, mirrors the
                                 // beam search max_len

  void validate() const;  // throws ArgumentError
};

// Grammar encoding cost: per construction, a fixed-length length code of
// log2(max_len) bits plus, per slot, a dimension selector (log2 3) and a
// uniform filler code over that dimension's inventory.
double l1_cost(const Grammar& grammar, const Vocabulary& vocab,
               std::uint32_t max_len = 8);

// Corpus-given-grammar cost. Pass 1 greedy-covers every sentence and
// counts construction uses n(c) plus one escape event per uncovered token.
// Pass 2 prices events with add-one smoothing over {constructions} +
// {escape}; an uncovered token additionally pays an add-one-smoothed
// unigram code for its word form.
double l2_cost(const Corpus& corpus, const Grammar& grammar);

MdlScore mdl_score(const Grammar& grammar, const Corpus& corpus,
                   const Vocabulary& vocab, std::uint32_t max_len = 8);

// Frequency-floor sweep with batched greedy forward selection on the
// held-out corpus: per floor, candidates sorted by frequency x mean score
// are offered in batches, a batch is kept iff it lowers the test MDL, and
// the scan stops after `patience` consecutive rejected batches. The best
// floor's selection wins. Deterministic for fixed inputs.
Grammar select_grammar(const ProvisionalGrammar& provisional,
                       const Corpus& train, const Corpus& test,
                       const Vocabulary& vocab,
                       const SelectionParams& params);

struct HoldoutSplit {
  Corpus train;
  Corpus test;
};

// Sentence-boundary split reserving the final `test_fraction` of the words
// as the held-out tail. Both parts are non-empty whenever the corpus has
// at least two sentences.
HoldoutSplit split_holdout(const Corpus& corpus, double test_fraction = 0.1);

}  // namespace cxg
