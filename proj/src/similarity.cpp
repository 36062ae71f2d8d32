#include "cxg/similarity.hpp"

#include <algorithm>

#include "cxg/errors.hpp"

namespace cxg {

double jaccard(const Grammar& a, const Grammar& b) {
  if (a.empty() && b.empty()) return 1.0;
  // Serials are canonical and sorted, so a merge walk counts the overlap.
  std::size_t shared = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int cmp = a.serial(i).compare(b.serial(j));
    if (cmp < 0) {
      ++i;
    } else if (cmp > 0) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(shared) /
         static_cast<double>(a.size() + b.size() - shared);
}

double subseq_ratio(const Construction& a, const Construction& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n + m == 0) return 1.0;
  if (n == 0 || m == 0) return 0.0;
  std::vector<std::uint32_t> previous(m + 1, 0);
  std::vector<std::uint32_t> current(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      if (a[i - 1] == b[j - 1])
        current[j] = previous[j - 1] + 1;
      else
        current[j] = std::max(previous[j], current[j - 1]);
    }
    std::swap(previous, current);
  }
  return 2.0 * static_cast<double>(previous[m]) /
         static_cast<double>(n + m);
}

namespace {

struct PairCandidate {
  double ratio;
  std::uint32_t a_index;
  std::uint32_t b_index;
  const std::string* low_serial;   // min/max of the two serialized forms,
  const std::string* high_serial;  // so ordering ignores argument order
};

bool pair_order(const PairCandidate& x, const PairCandidate& y) {
  if (x.ratio != y.ratio) return x.ratio > y.ratio;
  if (int cmp = x.low_serial->compare(*y.low_serial); cmp != 0)
    return cmp < 0;
  if (int cmp = x.high_serial->compare(*y.high_serial); cmp != 0)
    return cmp < 0;
  return x.a_index < y.a_index;
}

}  // namespace

MatchPairing fuzzy_pairing(const Grammar& a, const Grammar& b,
                           double threshold) {
  if (!(threshold > 0.0) || threshold > 1.0)
    throw ArgumentError("threshold must lie in (0, 1]");

  std::vector<PairCandidate> candidates;
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    for (std::uint32_t j = 0; j < b.size(); ++j) {
      double ratio = subseq_ratio(a.at(i), b.at(j));
      if (ratio < threshold) continue;
      const std::string& sa = a.serial(i);
      const std::string& sb = b.serial(j);
      bool a_low = sa.compare(sb) <= 0;
      candidates.push_back({ratio, i, j, a_low ? &sa : &sb,
                            a_low ? &sb : &sa});
    }
  }
  std::sort(candidates.begin(), candidates.end(), pair_order);

  MatchPairing pairing;
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  for (const PairCandidate& candidate : candidates) {
    if (used_a[candidate.a_index] || used_b[candidate.b_index]) continue;
    used_a[candidate.a_index] = true;
    used_b[candidate.b_index] = true;
    pairing.pairs.push_back(
        {candidate.a_index, candidate.b_index, candidate.ratio});
  }
  for (std::uint32_t i = 0; i < a.size(); ++i)
    if (!used_a[i]) pairing.unmatched_a.push_back(i);
  for (std::uint32_t j = 0; j < b.size(); ++j)
    if (!used_b[j]) pairing.unmatched_b.push_back(j);
  return pairing;
}

double fuzzy_jaccard(const Grammar& a, const Grammar& b, double threshold) {
  if (a.empty() && b.empty()) return 1.0;
  MatchPairing pairing = fuzzy_pairing(a, b, threshold);
  auto matched = static_cast<double>(pairing.pairs.size());
  return matched /
         (static_cast<double>(a.size() + b.size()) - matched);
}

void WeightTable::set(const Construction& c, double weight) {
  weights_[c] = weight;
}

const double* WeightTable::find(const Construction& c) const {
  auto it = weights_.find(c);
  return it == weights_.end() ? nullptr : &it->second;
}

WeightTable background_weights(const Grammar& a, const Grammar& b,
                               const Corpus& background, double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be positive");
  std::vector<Construction> unique;
  unique.reserve(a.size() + b.size());
  unique.insert(unique.end(), a.constructions().begin(),
                a.constructions().end());
  unique.insert(unique.end(), b.constructions().begin(),
                b.constructions().end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  // First-slot buckets so the background scan only tests constructions
  // whose first slot agrees with one of the token's fillers.
  std::unordered_map<std::uint32_t, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < unique.size(); ++i)
    buckets[pack(unique[i].front().filler())].push_back(i);

  std::vector<std::uint64_t> freq(unique.size(), 0);
  for (const Sentence& sentence : background.sentences) {
    for (std::size_t pos = 0; pos < sentence.size(); ++pos) {
      for (Dim d : kAllDims) {
        auto it = buckets.find(pack(sentence.tokens[pos].filler(d)));
        if (it == buckets.end()) continue;
        for (std::size_t i : it->second)
          if (matches_at(unique[i], sentence, pos)) ++freq[i];
      }
    }
  }

  WeightTable table;
  for (std::size_t i = 0; i < unique.size(); ++i)
    table.set(unique[i], static_cast<double>(freq[i]) + epsilon);
  return table;
}

double weighted_jaccard(const Grammar& a, const Grammar& b,
                        const WeightTable& weights, double threshold) {
  if (a.empty() && b.empty()) return 1.0;
  auto weight_of = [&](const Grammar& g, std::uint32_t index) {
    const double* w = weights.find(g.at(index));
    if (!w)
      throw ValidationError("missing weight for construction " +
                            g.serial(index));
    return *w;
  };

  MatchPairing pairing = fuzzy_pairing(a, b, threshold);
  double numerator = 0.0;
  double denominator = 0.0;
  for (const MatchedPair& pair : pairing.pairs) {
    double wa = weight_of(a, pair.a_index);
    double wb = weight_of(b, pair.b_index);
    numerator += std::min(wa, wb);
    denominator += std::max(wa, wb);
  }
  for (std::uint32_t i : pairing.unmatched_a)
    denominator += weight_of(a, i);
  for (std::uint32_t j : pairing.unmatched_b)
    denominator += weight_of(b, j);
  return denominator > 0.0 ? numerator / denominator : 1.0;
}

}  // namespace cxg
