#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>

#include "cxg/corpus.hpp"
#include "cxg/types.hpp"

namespace cxg {

// Raw adjacency statistics. For every adjacent token pair, each of the
// nine (left dimension, right dimension) combinations contributes one
// ordered filler pair; marginals count per-filler occupancy of the left
// and right position. total is the number of adjacency slots Sum(len - 1).
struct PairCounts {
  std::unordered_map<std::uint64_t, std::uint64_t> pairs;
  std::unordered_map<std::uint32_t, std::uint64_t> left_marginal;
  std::unordered_map<std::uint32_t, std::uint64_t> right_marginal;
  std::uint64_t total = 0;

  std::uint64_t pair_count(Filler left, Filler right) const;
  std::uint64_t left_count(Filler f) const;
  std::uint64_t right_count(Filler f) const;

  // Associative, so sharded counting then merging equals whole-corpus
  // counting.
  void merge(const PairCounts& other);
};

PairCounts count_pairs(const Corpus& corpus);

enum class Direction { LR, RL };

struct DeltaPEntry {
  double lr = 0.0;
  double rl = 0.0;
  std::uint64_t count = 0;  // the a cell, kept for the debug dump
};

// Sparse directional association scores. Pairs observed fewer than
// min_count times are absent and read as 0.0.
class DeltaPMatrix {
 public:
  DeltaPMatrix() = default;

  double lookup(Filler left, Filler right, Direction direction) const;
  const DeltaPEntry* find(Filler left, Filler right) const;
  std::size_t size() const { return entries_.size(); }
  std::uint32_t min_count() const { return min_count_; }

  const std::unordered_map<std::uint64_t, DeltaPEntry>& entries() const {
    return entries_;
  }

  // TSV rows `left<TAB>right<TAB>a<TAB>dp_lr<TAB>dp_rl`, sorted for
  // reproducible output.
  void dump(std::ostream& out, const Vocabulary& vocab) const;

 private:
  friend DeltaPMatrix delta_p(const PairCounts&, std::uint32_t);

  std::unordered_map<std::uint64_t, DeltaPEntry> entries_;
  std::uint32_t min_count_ = 1;
};

// 2x2 contingency evaluation per ordered pair (l, r):
//   a = #(l, r)   b = right_count(r) - a
//   c = #(l, !r)  d = total - a - b - c
//   dp_lr = a/(a+c) - b/(b+d)    (cue = left unit, outcome = right unit)
//   dp_rl = a/(a+b) - c/(c+d)
// A conditional term with zero denominator contributes 0.0.
DeltaPMatrix delta_p(const PairCounts& counts, std::uint32_t min_count = 3);

}  // namespace cxg
