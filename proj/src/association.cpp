#include "cxg/association.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <vector>

#include "cxg/errors.hpp"

namespace cxg {

std::uint64_t PairCounts::pair_count(Filler left, Filler right) const {
  auto it = pairs.find(pack_pair(left, right));
  return it == pairs.end() ? 0 : it->second;
}

std::uint64_t PairCounts::left_count(Filler f) const {
  auto it = left_marginal.find(pack(f));
  return it == left_marginal.end() ? 0 : it->second;
}

std::uint64_t PairCounts::right_count(Filler f) const {
  auto it = right_marginal.find(pack(f));
  return it == right_marginal.end() ? 0 : it->second;
}

void PairCounts::merge(const PairCounts& other) {
  for (const auto& [key, count] : other.pairs) pairs[key] += count;
  for (const auto& [key, count] : other.left_marginal)
    left_marginal[key] += count;
  for (const auto& [key, count] : other.right_marginal)
    right_marginal[key] += count;
  total += other.total;
}

PairCounts count_pairs(const Corpus& corpus) {
  PairCounts counts;
  for (const auto& sentence : corpus.sentences) {
    if (sentence.size() < 2) continue;
    for (std::size_t i = 0; i + 1 < sentence.size(); ++i) {
      const AnnotatedToken& left = sentence.tokens[i];
      const AnnotatedToken& right = sentence.tokens[i + 1];
      ++counts.total;
      for (Dim dl : kAllDims) ++counts.left_marginal[pack(left.filler(dl))];
      for (Dim dr : kAllDims) ++counts.right_marginal[pack(right.filler(dr))];
      for (Dim dl : kAllDims)
        for (Dim dr : kAllDims)
          ++counts.pairs[pack_pair(left.filler(dl), right.filler(dr))];
    }
  }
  return counts;
}

namespace {

double conditional(double hits, double misses) {
  double denom = hits + misses;
  return denom > 0.0 ? hits / denom : 0.0;
}

}  // namespace

DeltaPMatrix delta_p(const PairCounts& counts, std::uint32_t min_count) {
  if (min_count < 1) throw ArgumentError("min_count must be at least 1");
  if (counts.total == 0)
    throw ArgumentError("delta_p requires at least one adjacency");

  DeltaPMatrix matrix;
  matrix.min_count_ = min_count;
  for (const auto& [key, a] : counts.pairs) {
    if (a < min_count) continue;
    Filler left = unpack(static_cast<std::uint32_t>(key >> 32));
    Filler right = unpack(static_cast<std::uint32_t>(key));
    double av = static_cast<double>(a);
    double bv = static_cast<double>(counts.right_count(right) - a);
    double cv = static_cast<double>(counts.left_count(left) - a);
    double dv = static_cast<double>(counts.total) - av - bv - cv;
    DeltaPEntry entry;
    entry.lr = conditional(av, cv) - conditional(bv, dv);
    entry.rl = conditional(av, bv) - conditional(cv, dv);
    entry.count = a;
    matrix.entries_.emplace(key, entry);
  }
  return matrix;
}

double DeltaPMatrix::lookup(Filler left, Filler right,
                            Direction direction) const {
  auto it = entries_.find(pack_pair(left, right));
  if (it == entries_.end()) return 0.0;
  return direction == Direction::LR ? it->second.lr : it->second.rl;
}

const DeltaPEntry* DeltaPMatrix::find(Filler left, Filler right) const {
  auto it = entries_.find(pack_pair(left, right));
  return it == entries_.end() ? nullptr : &it->second;
}

void DeltaPMatrix::dump(std::ostream& out, const Vocabulary& vocab) const {
  std::vector<std::pair<std::string, const DeltaPEntry*>> rows;
  rows.reserve(entries_.size());
  for (const auto& [key, entry] : entries_) {
    Filler left = unpack(static_cast<std::uint32_t>(key >> 32));
    Filler right = unpack(static_cast<std::uint32_t>(key));
    std::string row;
    row.append(dim_name(left.dim));
    row.push_back(':');
    row.append(vocab.surface(left.dim, left.id));
    row.push_back('\t');
    row.append(dim_name(right.dim));
    row.push_back(':');
    row.append(vocab.surface(right.dim, right.id));
    rows.emplace_back(std::move(row), &entry);
  }
  std::sort(rows.begin(), rows.end());
  char buffer[64];
  for (const auto& [label, entry] : rows) {
    out << label << '\t' << entry->count;
    std::snprintf(buffer, sizeof buffer, "\t%.6f\t%.6f", entry->lr,
                  entry->rl);
    out << buffer << '\n';
  }
}

}  // namespace cxg
