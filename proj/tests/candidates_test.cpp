#include <cmath>

#include "cxg/association.hpp"
#include "cxg/candidates.hpp"
#include "cxg/corpus.hpp"
#include "cxg/errors.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace cxg;

namespace {

Corpus parse(std::string_view text, Vocabulary& vocab) {
  return load_corpus_text(text, vocab, "", "test.tsv");
}

// A contingency with a=9, c=1, b=0, d>0 gives dp_lr exactly 9/10 - 0.
void add_strong_pair(PairCounts& counts, Filler left, Filler right) {
  counts.pairs[pack_pair(left, right)] = 9;
  counts.left_marginal[pack(left)] += 10;
  counts.right_marginal[pack(right)] += 9;
}

}  // namespace

TEST_CASE("search_sentence: a dominant path is the single winner") {
  Vocabulary vocab;
  const Corpus corpus = parse(
      "w0\tX\t_\nw1\tX\t_\nw2\tX\t_\nw3\tX\t_\n", vocab);
  const Sentence& sentence = corpus.sentences[0];

  // Lexical transitions w0->w1->w2->w3 carry 0.9 each; every other
  // transition is absent and reads 0.0.
  PairCounts counts;
  counts.total = 1000;
  for (int i = 0; i + 1 < 4; ++i) {
    add_strong_pair(counts,
                    {Dim::LEX, *vocab.find(Dim::LEX, "w" + std::to_string(i))},
                    {Dim::LEX,
                     *vocab.find(Dim::LEX, "w" + std::to_string(i + 1))});
  }
  const DeltaPMatrix matrix = delta_p(counts, 3);

  SearchParams params;
  params.delta_threshold = 0.2;
  const auto winners = search_sentence(sentence, matrix, params);

  REQUIRE(winners.size() == 1);
  const ScoredCandidate& w = winners[0];
  CHECK(w.score == doctest::Approx(0.9 * 3));  // 0.9 x (len - 1)
  CHECK(w.start == 0);
  REQUIRE(w.construction.size() == 4);
  for (const SlotConstraint& slot : w.construction)
    CHECK(slot.dim == Dim::LEX);
}

TEST_CASE("search_sentence: an all-zero matrix yields nothing") {
  Vocabulary vocab;
  const Corpus corpus = parse(
      "a\tX\t_\nb\tX\t_\nc\tX\t_\nd\tX\t_\n", vocab);
  const DeltaPMatrix matrix;  // empty: every lookup is 0.0
  SearchParams params;        // threshold 0.1 kills every extension
  CHECK(search_sentence(corpus.sentences[0], matrix, params).empty());
}

TEST_CASE("search_sentence: sentences shorter than min_len yield nothing") {
  Vocabulary vocab;
  const Corpus corpus = parse("a\tX\t_\nb\tX\t_\n", vocab);
  const DeltaPMatrix matrix;
  SearchParams params;
  params.min_len = 3;
  CHECK(search_sentence(corpus.sentences[0], matrix, params).empty());
}

TEST_CASE("search_sentence: parameter validation") {
  SearchParams params;
  params.beam_width = 0;
  CHECK_THROWS_AS(params.validate(), ArgumentError);
  params = {};
  params.min_len = 1;
  CHECK_THROWS_AS(params.validate(), ArgumentError);
  params = {};
  params.min_len = 5;
  params.max_len = 3;
  CHECK_THROWS_AS(params.validate(), ArgumentError);
  params = {};
  params.delta_threshold = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(params.validate(), ArgumentError);
  params = {};
  params.candidates_per_sentence = 0;
  CHECK_THROWS_AS(params.validate(), ArgumentError);
}

TEST_CASE("search_sentence: unbounded beam equals exhaustive enumeration") {
  Rng rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    const oracle::RandomVocab rv = oracle::make_vocab(
        2 + static_cast<std::uint32_t>(rng.below(4)), 3, 3);
    Rng trial_rng(rng.next_u64());
    const Corpus corpus = oracle::random_corpus(trial_rng, rv, 8, 6);
    const PairCounts counts = count_pairs(corpus);
    if (counts.total == 0) continue;
    const DeltaPMatrix matrix = delta_p(counts, 1);

    SearchParams params;
    params.beam_width = 1000000;               // larger than 3^max_len
    params.candidates_per_sentence = 1000000;  // keep every emission
    params.min_len = 2;
    params.max_len = 1 + static_cast<std::uint32_t>(trial_rng.below(5));
    if (params.max_len < 2) params.max_len = 2;
    params.delta_threshold = trial_rng.next_double() * 0.4 - 0.1;

    for (const Sentence& sentence : corpus.sentences) {
      if (sentence.size() > 6 || sentence.size() < params.min_len) continue;
      const auto got = search_sentence(sentence, matrix, params);
      const auto expected =
          oracle::enumerate_candidates(sentence, matrix, params);
      REQUIRE(got.size() == expected.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].construction == expected[i].construction);
        CHECK(got[i].start == expected[i].start);
        CHECK(got[i].score ==
              doctest::Approx(expected[i].score).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("search_sentence: emitted scores recompute from the matrix") {
  Rng rng(505);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::RandomVocab rv = oracle::make_vocab(4, 3, 3);
    Rng trial_rng(rng.next_u64());
    const Corpus corpus = oracle::random_corpus(trial_rng, rv, 10, 9);
    const PairCounts counts = count_pairs(corpus);
    if (counts.total == 0) continue;
    const DeltaPMatrix matrix = delta_p(counts, 1);

    SearchParams params;
    params.candidates_per_sentence = 5;
    for (const Sentence& sentence : corpus.sentences) {
      for (const ScoredCandidate& c :
           search_sentence(sentence, matrix, params)) {
        REQUIRE(c.construction.size() >= params.min_len);
        REQUIRE(c.construction.size() <= params.max_len);
        double recomputed = 0.0;
        for (std::size_t i = 0; i + 1 < c.construction.size(); ++i)
          recomputed += matrix.lookup(c.construction[i].filler(),
                                      c.construction[i + 1].filler(),
                                      Direction::LR);
        CHECK(c.score == doctest::Approx(recomputed).epsilon(1e-12));
        // The winner really occurs at its start position.
        for (std::size_t i = 0; i < c.construction.size(); ++i) {
          const SlotConstraint& slot = c.construction[i];
          CHECK(sentence.tokens[c.start + i].filler(slot.dim).id == slot.id);
        }
      }
    }
  }
}

// Winner scores are NOT monotone between finite widths: a wider beam can
// admit rivals whose children evict the narrow beam's eventual winner
// before it freezes, and the frozen line keeps its sub-threshold final
// increment, so it may end lower. The unbounded beam does bound every
// finite width, because freezing depends only on the path itself and
// nothing is ever pruned.
TEST_CASE("search_sentence: unbounded beam bounds every finite width") {
  Rng rng(606);
  for (int trial = 0; trial < 25; ++trial) {
    const oracle::RandomVocab rv = oracle::make_vocab(4, 3, 3);
    Rng trial_rng(rng.next_u64());
    const Corpus corpus = oracle::random_corpus(trial_rng, rv, 6, 7);
    const PairCounts counts = count_pairs(corpus);
    if (counts.total == 0) continue;
    const DeltaPMatrix matrix = delta_p(counts, 1);

    for (const Sentence& sentence : corpus.sentences) {
      SearchParams params;
      params.beam_width = 1000000;
      const auto unbounded = search_sentence(sentence, matrix, params);
      for (std::uint32_t width : {1u, 2u, 5u, 10u, 50u}) {
        params.beam_width = width;
        const auto winners = search_sentence(sentence, matrix, params);
        if (winners.empty()) continue;
        REQUIRE(!unbounded.empty());
        CHECK(winners[0].score <= unbounded[0].score + 1e-12);
      }
    }
  }
}

TEST_CASE("build_provisional: frequency accumulates over repeats") {
  Vocabulary vocab;
  std::string text;
  for (int i = 0; i < 10; ++i) text += "w0\tX\t_\nw1\tX\t_\nw2\tX\t_\n\n";
  const Corpus corpus = parse(text, vocab);

  PairCounts counts;
  counts.total = 1000;
  add_strong_pair(counts, {Dim::LEX, *vocab.find(Dim::LEX, "w0")},
                  {Dim::LEX, *vocab.find(Dim::LEX, "w1")});
  add_strong_pair(counts, {Dim::LEX, *vocab.find(Dim::LEX, "w1")},
                  {Dim::LEX, *vocab.find(Dim::LEX, "w2")});
  const DeltaPMatrix matrix = delta_p(counts, 3);

  SearchParams params;
  const ProvisionalGrammar provisional =
      build_provisional(corpus, matrix, params);
  REQUIRE(provisional.size() == 1);
  const auto& [construction, entry] = *provisional.entries().begin();
  CHECK(entry.frequency == 10);
  CHECK(entry.total_score == doctest::Approx(10 * 2 * 0.9));
  CHECK(construction.size() == 3);
}

TEST_CASE("build_provisional: per-sentence cap and empty corpus") {
  Vocabulary vocab;
  const Corpus corpus = parse("a\tX\t_\nb\tX\t_\nc\tX\t_\n", vocab);
  const PairCounts counts = count_pairs(corpus);
  const DeltaPMatrix matrix = delta_p(counts, 1);
  SearchParams params;
  params.delta_threshold = -2.0;  // everything extends to the end
  const ProvisionalGrammar one = build_provisional(corpus, matrix, params);
  CHECK(one.size() <= params.candidates_per_sentence);

  const ProvisionalGrammar none =
      build_provisional(Corpus{}, matrix, params);
  CHECK(none.empty());
}

TEST_CASE("provisional grammar: merge equals sequential adds") {
  const oracle::RandomVocab rv = oracle::make_vocab(4, 3, 2);
  Rng rng(77);
  std::vector<std::pair<Construction, double>> events;
  for (int i = 0; i < 40; ++i)
    events.emplace_back(oracle::random_construction(rng, rv, 2, 4),
                        rng.next_double());

  ProvisionalGrammar whole;
  for (const auto& [c, s] : events) whole.add(c, s);

  ProvisionalGrammar left, right, merged;
  for (std::size_t i = 0; i < events.size(); ++i)
    (i % 2 ? left : right).add(events[i].first, events[i].second);
  merged.merge(left);
  merged.merge(right);

  REQUIRE(merged.size() == whole.size());
  for (const auto& [c, entry] : whole.entries()) {
    const auto it = merged.entries().find(c);
    REQUIRE(it != merged.entries().end());
    CHECK(it->second.frequency == entry.frequency);
    CHECK(it->second.total_score ==
          doctest::Approx(entry.total_score).epsilon(1e-12));
  }
}
