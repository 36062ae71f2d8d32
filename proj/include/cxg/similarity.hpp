#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cxg/corpus.hpp"
#include "cxg/grammar.hpp"

namespace cxg {

inline constexpr double kDefaultFuzzyThreshold = 0.71;

struct MatchedPair {
  std::uint32_t a_index = 0;
  std::uint32_t b_index = 0;
  double ratio = 0.0;
};

// One-to-one pairing of similar constructions across two grammars; every
// pair's ratio is at least the threshold and no construction is used twice.
struct MatchPairing {
  std::vector<MatchedPair> pairs;
  std::vector<std::uint32_t> unmatched_a;
  std::vector<std::uint32_t> unmatched_b;
};

// Exact set Jaccard over construction equality; J(empty, empty) = 1.
double jaccard(const Grammar& a, const Grammar& b);

// Ordered shared-subsequence ratio 2 * LCS(a, b) / (|a| + |b|), with slots
// compared by exact (dimension, filler) equality.
double subseq_ratio(const Construction& a, const Construction& b);

// Greedy one-to-one pairing over all cross pairs at or above the
// threshold, accepted by descending ratio. Ratio ties order by the
// unordered pair of serialized forms, so pairing(A, B) mirrors
// pairing(B, A) exactly.
MatchPairing fuzzy_pairing(const Grammar& a, const Grammar& b,
                           double threshold = kDefaultFuzzyThreshold);

// With m matched pairs: m / (|A| + |B| - m); 1 when both grammars are
// empty.
double fuzzy_jaccard(const Grammar& a, const Grammar& b,
                     double threshold = kDefaultFuzzyThreshold);

// Background-corpus frequency (plus smoothing) per construction.
class WeightTable {
 public:
  void set(const Construction& c, double weight);
  const double* find(const Construction& c) const;
  std::size_t size() const { return weights_.size(); }

 private:
  std::unordered_map<Construction, double, ConstructionHash> weights_;
};

// weight(c) = match frequency of c in the background corpus + epsilon, for
// every construction of either grammar.
WeightTable background_weights(const Grammar& a, const Grammar& b,
                               const Corpus& background,
                               double epsilon = 0.5);

// Fuzzy pairing aggregated by weight: sum of min weights over matched
// pairs, divided by the sum of max weights over matched pairs plus the
// weights of everything unmatched. 1 when both grammars are empty.
double weighted_jaccard(const Grammar& a, const Grammar& b,
                        const WeightTable& weights,
                        double threshold = kDefaultFuzzyThreshold);

}  // namespace cxg
