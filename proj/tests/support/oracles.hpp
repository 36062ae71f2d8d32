// Independent reference implementations used to check the library. These
// deliberately avoid the library's own counting/search/DP code paths:
// everything here is a direct scan or an exhaustive enumeration.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "cxg/association.hpp"
#include "cxg/candidates.hpp"
#include "cxg/corpus.hpp"
#include "cxg/grammar.hpp"
#include "cxg/mdl.hpp"
#include "cxg/rng.hpp"

namespace oracle {

// ---- ΔP by direct corpus scan -------------------------------------------

struct BruteDeltaP {
  std::uint64_t a = 0;
  double lr = 0.0;
  double rl = 0.0;
};

inline double brute_conditional(double hits, double misses) {
  const double denom = hits + misses;
  return denom == 0.0 ? 0.0 : hits / denom;
}

// Rebuilds the 2x2 contingency table for one ordered pair by scanning
// every adjacency in the corpus.
inline BruteDeltaP brute_delta_p(const cxg::Corpus& corpus, cxg::Filler left,
                                 cxg::Filler right) {
  std::uint64_t a = 0, left_marginal = 0, right_marginal = 0, n = 0;
  for (const cxg::Sentence& sentence : corpus.sentences) {
    for (std::size_t i = 0; i + 1 < sentence.size(); ++i) {
      ++n;
      const bool l = sentence.tokens[i].filler(left.dim) == left;
      const bool r = sentence.tokens[i + 1].filler(right.dim) == right;
      if (l) ++left_marginal;
      if (r) ++right_marginal;
      if (l && r) ++a;
    }
  }
  const double da = static_cast<double>(a);
  const double b = static_cast<double>(right_marginal - a);
  const double c = static_cast<double>(left_marginal - a);
  const double d = static_cast<double>(n) - da - b - c;
  BruteDeltaP out;
  out.a = a;
  out.lr = brute_conditional(da, c) - brute_conditional(b, d);
  out.rl = brute_conditional(da, b) - brute_conditional(c, d);
  return out;
}

// Every ordered filler pair that occurs adjacently at least once.
inline std::vector<std::pair<cxg::Filler, cxg::Filler>> observed_pairs(
    const cxg::Corpus& corpus) {
  std::map<std::pair<std::uint32_t, std::uint32_t>,
           std::pair<cxg::Filler, cxg::Filler>>
      seen;
  for (const cxg::Sentence& sentence : corpus.sentences) {
    for (std::size_t i = 0; i + 1 < sentence.size(); ++i) {
      for (cxg::Dim dl : cxg::kAllDims) {
        for (cxg::Dim dr : cxg::kAllDims) {
          const cxg::Filler l = sentence.tokens[i].filler(dl);
          const cxg::Filler r = sentence.tokens[i + 1].filler(dr);
          seen.emplace(std::make_pair(cxg::pack(l), cxg::pack(r)),
                       std::make_pair(l, r));
        }
      }
    }
  }
  std::vector<std::pair<cxg::Filler, cxg::Filler>> out;
  out.reserve(seen.size());
  for (const auto& [key, pair] : seen) out.push_back(pair);
  return out;
}

// ---- Beam search by exhaustive path enumeration --------------------------

// Walks every dimension path from every start position, mirroring the
// documented stop semantics: a state freezes when its latest increment is
// below the threshold, it reaches max_len, or it hits the sentence end;
// frozen states of at least min_len are emitted with their full score
// (including a final sub-threshold increment).
inline void enumerate_paths(const cxg::Sentence& sentence,
                            const cxg::DeltaPMatrix& matrix,
                            const cxg::SearchParams& params,
                            std::uint32_t start, cxg::Construction& path,
                            double score, double last_increment,
                            std::vector<cxg::ScoredCandidate>& out) {
  const std::size_t len = path.size();
  const bool frozen = (len >= 2 && last_increment < params.delta_threshold) ||
                      len == params.max_len ||
                      start + len == sentence.size();
  if (frozen) {
    if (len >= params.min_len)
      out.push_back({path, score, 0, start});
    return;
  }
  const cxg::AnnotatedToken& next =
      sentence.tokens[start + len];
  const cxg::Filler last = path.back().filler();
  for (cxg::Dim d : cxg::kAllDims) {
    const cxg::Filler f = next.filler(d);
    const double inc = matrix.lookup(last, f, cxg::Direction::LR);
    path.push_back({d, f.id});
    enumerate_paths(sentence, matrix, params, start, path, score + inc, inc,
                    out);
    path.pop_back();
  }
}

inline bool dims_less(const cxg::Construction& a, const cxg::Construction& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].dim != b[i].dim) return a[i].dim < b[i].dim;
  }
  return a.size() < b.size();
}

// All candidates an unbounded-beam search would emit, in its final order.
inline std::vector<cxg::ScoredCandidate> enumerate_candidates(
    const cxg::Sentence& sentence, const cxg::DeltaPMatrix& matrix,
    const cxg::SearchParams& params) {
  std::vector<cxg::ScoredCandidate> all;
  for (std::uint32_t start = 0; start < sentence.size(); ++start) {
    for (cxg::Dim d : cxg::kAllDims) {
      cxg::Construction path{{d, sentence.tokens[start].filler(d).id}};
      enumerate_paths(sentence, matrix, params, start, path, 0.0,
                      std::numeric_limits<double>::infinity(), all);
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const cxg::ScoredCandidate& x,
                      const cxg::ScoredCandidate& y) {
                     if (x.score != y.score) return x.score > y.score;
                     if (x.start != y.start) return x.start < y.start;
                     return dims_less(x.construction, y.construction);
                   });
  if (all.size() > params.candidates_per_sentence)
    all.resize(params.candidates_per_sentence);
  return all;
}

// ---- LCS by exhaustive subsequence enumeration (|a| <= ~16) ---------------

inline bool is_subsequence(const cxg::Construction& needle,
                           const cxg::Construction& haystack) {
  std::size_t j = 0;
  for (const cxg::SlotConstraint& slot : haystack) {
    if (j < needle.size() && slot == needle[j]) ++j;
  }
  return j == needle.size();
}

inline std::size_t brute_lcs(const cxg::Construction& a,
                             const cxg::Construction& b) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
    cxg::Construction sub;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (mask & (1u << i)) sub.push_back(a[i]);
    if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
  }
  return best;
}

// ---- Exhaustive subset MDL (n <= ~14) -------------------------------------

struct SubsetOptimum {
  std::vector<cxg::Construction> constructions;
  double total_bits = 0.0;
};

inline SubsetOptimum best_subset_mdl(
    const std::vector<cxg::Construction>& pool, const cxg::Corpus& test,
    const cxg::Vocabulary& vocab, std::uint32_t max_len) {
  SubsetOptimum best;
  bool have = false;
  for (std::uint32_t mask = 0; mask < (1u << pool.size()); ++mask) {
    std::vector<cxg::Construction> subset;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask & (1u << i)) subset.push_back(pool[i]);
    const cxg::Grammar g = cxg::Grammar::build(subset, vocab);
    const double total =
        cxg::mdl_score(g, test, vocab, max_len).total_bits();
    if (!have || total < best.total_bits) {
      have = true;
      best.total_bits = total;
      best.constructions = std::move(subset);
    }
  }
  return best;
}

// ---- Random inputs ---------------------------------------------------------

struct RandomVocab {
  cxg::Vocabulary vocab;
  std::uint32_t lex = 0;
  std::uint32_t syn = 0;
  std::uint32_t sem = 0;  // interned ids 1..sem plus the reserved 0
};

// Interns `lex` word forms, the first `syn` universal tags, and `sem`
// cluster indices so random tokens and constructions can be built from
// dense id ranges.
inline RandomVocab make_vocab(std::uint32_t lex, std::uint32_t syn,
                              std::uint32_t sem) {
  RandomVocab rv;
  rv.lex = lex;
  rv.syn = syn;
  rv.sem = sem;
  for (std::uint32_t i = 0; i < lex; ++i)
    rv.vocab.intern(cxg::Dim::LEX, "w" + std::to_string(i));
  const auto tags = cxg::Vocabulary::upos_tags();
  for (std::uint32_t i = 0; i < syn; ++i)
    rv.vocab.intern(cxg::Dim::SYN, tags[i]);
  for (std::uint32_t i = 1; i <= sem; ++i)
    rv.vocab.intern(cxg::Dim::SEM, std::to_string(i));
  return rv;
}

inline cxg::AnnotatedToken random_token(cxg::Rng& rng,
                                        const RandomVocab& rv) {
  cxg::AnnotatedToken t;
  t.lex = static_cast<cxg::FillerId>(rng.below(rv.lex));
  t.syn = static_cast<cxg::FillerId>(rng.below(rv.syn));
  t.sem = static_cast<cxg::FillerId>(1 + rng.below(rv.sem));
  return t;
}

inline cxg::Corpus random_corpus(cxg::Rng& rng, const RandomVocab& rv,
                                 std::size_t max_sentences,
                                 std::size_t max_tokens) {
  cxg::Corpus corpus;
  const std::size_t n = 1 + rng.below(max_sentences);
  for (std::size_t s = 0; s < n; ++s) {
    cxg::Sentence sentence;
    const std::size_t len = 1 + rng.below(max_tokens);
    for (std::size_t i = 0; i < len; ++i)
      sentence.tokens.push_back(random_token(rng, rv));
    corpus.word_count += sentence.size();
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

inline cxg::Construction random_construction(cxg::Rng& rng,
                                             const RandomVocab& rv,
                                             std::size_t min_len,
                                             std::size_t max_len) {
  cxg::Construction c;
  const std::size_t len = min_len + rng.below(max_len - min_len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    switch (rng.below(3)) {
      case 0:
        c.push_back({cxg::Dim::LEX,
                     static_cast<cxg::FillerId>(rng.below(rv.lex))});
        break;
      case 1:
        c.push_back({cxg::Dim::SYN,
                     static_cast<cxg::FillerId>(rng.below(rv.syn))});
        break;
      default:
        c.push_back({cxg::Dim::SEM,
                     static_cast<cxg::FillerId>(1 + rng.below(rv.sem))});
        break;
    }
  }
  return c;
}

inline cxg::Grammar random_grammar(cxg::Rng& rng, const RandomVocab& rv,
                                   std::size_t max_size,
                                   std::size_t max_len = 6) {
  std::vector<cxg::Construction> pool;
  const std::size_t n = rng.below(max_size + 1);
  for (std::size_t i = 0; i < n; ++i)
    pool.push_back(random_construction(rng, rv, 2, max_len));
  return cxg::Grammar::build(std::move(pool), rv.vocab);
}

// ---- Rank statistics -------------------------------------------------------

// Average ranks (ties share the mean rank), 1-based.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return values[x] < values[y];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i) +
                              static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

// Spearman rank correlation (Pearson over average ranks).
inline double spearman(const std::vector<double>& x,
                       const std::vector<double>& y) {
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
