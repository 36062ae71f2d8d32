#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cxg/association.hpp"
#include "cxg/corpus.hpp"
#include "cxg/grammar.hpp"

namespace cxg {

struct SearchParams {
  std::uint32_t beam_width = 10;
  double delta_threshold = 0.1;
  std::uint32_t min_len = 3;
  std::uint32_t max_len = 8;
  std::uint32_t candidates_per_sentence = 1;

  void validate() const;  // throws ArgumentError
};

struct ScoredCandidate {
  Construction construction;
  double score = 0.0;  // sum of the LR transition scores along the path
  std::uint32_t sentence_index = 0;
  std::uint32_t start = 0;
};

struct ProvisionalEntry {
  std::uint64_t frequency = 0;
  double total_score = 0.0;
};

// Pool of winning candidates, deduplicated by slot sequence, before MDL
// selection prunes it down to a grammar.
class ProvisionalGrammar {
 public:
  void add(const Construction& construction, double score);
  void merge(const ProvisionalGrammar& other);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::unordered_map<Construction, ProvisionalEntry, ConstructionHash>&
  entries() const {
    return entries_;
  }

 private:
  std::unordered_map<Construction, ProvisionalEntry, ConstructionHash>
      entries_;
};

// Association beam search over one sentence. All start positions share one
// beam: each position seeds three length-1 states (one per dimension), and
// every round extends each live state to the next token by each dimension,
// scored by the LR association between the last filler and the new one.
// After a round the best beam_width children survive (score descending,
// ties by dimension sequence LEX < SYN < SEM, then by start position). A
// state is frozen once its latest increment falls below delta_threshold,
// it reaches max_len, or it hits the sentence end; frozen states of at
// least min_len are candidates. Returns the best candidates_per_sentence
// of them (ties: earlier start, then dimension order).
std::vector<ScoredCandidate> search_sentence(const Sentence& sentence,
                                             const DeltaPMatrix& matrix,
                                             const SearchParams& params,
                                             std::uint32_t sentence_index = 0);

ProvisionalGrammar build_provisional(const Corpus& corpus,
                                     const DeltaPMatrix& matrix,
                                     const SearchParams& params);

}  // namespace cxg
