#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cxg/corpus.hpp"
#include "cxg/types.hpp"

namespace cxg {

// One position of a construction: the token filler that must appear there.
struct SlotConstraint {
  Dim dim;
  FillerId id;

  auto operator<=>(const SlotConstraint&) const = default;

  Filler filler() const { return {dim, id}; }
};

// Ordered slot-constraint sequence; equality and hashing are by exact
// sequence.
using Construction = std::vector<SlotConstraint>;

struct ConstructionHash {
  std::size_t operator()(const Construction& c) const {
    std::uint64_t h = 1469598103934665603ull;
    for (const SlotConstraint& slot : c) {
      h = (h ^ pack(slot.filler())) * 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

std::string slot_to_string(SlotConstraint slot, const Vocabulary& vocab);
std::string construction_to_string(const Construction& construction,
                                   const Vocabulary& vocab);

struct GrammarMeta {
  std::string register_label;
  std::uint64_t exposure_words = 0;
  std::string params;

  bool operator==(const GrammarMeta&) const = default;
};

// Deduplicated construction set held in canonical order (sorted by the
// serialized form), so two grammars with equal sets serialize identically.
class Grammar {
 public:
  Grammar() = default;
  static Grammar build(std::vector<Construction> constructions,
                       const Vocabulary& vocab, GrammarMeta meta = {});

  std::size_t size() const { return constructions_.size(); }
  bool empty() const { return constructions_.empty(); }
  const Construction& at(std::size_t index) const {
    return constructions_[index];
  }
  const std::string& serial(std::size_t index) const {
    return serials_[index];
  }
  const std::vector<Construction>& constructions() const {
    return constructions_;
  }
  const std::vector<std::string>& serials() const { return serials_; }
  bool contains(const Construction& c) const;

  const GrammarMeta& meta() const { return meta_; }
  GrammarMeta& meta() { return meta_; }

 private:
  std::vector<Construction> constructions_;
  std::vector<std::string> serials_;
  std::unordered_map<Construction, std::uint32_t, ConstructionHash> index_;
  GrammarMeta meta_;
};

bool matches_at(const Construction& construction, const Sentence& sentence,
                std::size_t position);

// First-slot lookup table over a grammar, so matching scans only the
// constructions whose first slot agrees with one of the token's fillers.
class GrammarIndex {
 public:
  explicit GrammarIndex(const Grammar& grammar);

  std::span<const std::uint32_t> starting_with(Filler f) const;
  const Grammar& grammar() const { return *grammar_; }

 private:
  const Grammar* grammar_;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> buckets_;
};

struct Span {
  std::uint32_t sentence = 0;
  std::uint32_t start = 0;

  auto operator<=>(const Span&) const = default;
};

// Exhaustive (possibly overlapping) match occurrences per construction,
// indexed in the grammar's canonical order.
struct MatchTable {
  std::vector<std::uint64_t> frequency;
  std::vector<std::vector<Span>> spans;
};

MatchTable match_corpus(const Grammar& grammar, const Corpus& corpus);

struct CoverSpan {
  std::uint32_t start = 0;
  std::uint32_t length = 0;
  std::uint32_t construction = 0;  // canonical index into the grammar

  auto operator<=>(const CoverSpan&) const = default;
};

struct Segmentation {
  std::vector<CoverSpan> spans;
  std::vector<std::uint32_t> uncovered;
};

// Left-to-right longest-match segmentation; ties go to the construction
// earliest in canonical order. Spans never overlap.
Segmentation greedy_cover(const Sentence& sentence, const Grammar& grammar);
Segmentation greedy_cover(const Sentence& sentence,
                          const GrammarIndex& index);

// One construction per line (`SYN:NOUN LEX:of SEM:587`), preceded by `#`
// provenance headers. serialize/deserialize round-trip exactly.
std::string serialize(const Grammar& grammar);
Grammar deserialize(std::string_view text, Vocabulary& vocab,
                    bool extend_vocab = false,
                    std::string_view source_name = "<text>");

void save_grammar(const Grammar& grammar, const std::filesystem::path& path);
Grammar load_grammar(const std::filesystem::path& path, Vocabulary& vocab,
                     bool extend_vocab = false);

}  // namespace cxg
