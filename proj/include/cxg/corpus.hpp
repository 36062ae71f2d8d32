#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cxg/types.hpp"

namespace cxg {

// Per-dimension interning of surface forms to dense, insertion-ordered ids.
// SYN surfaces are restricted to the 17 universal POS tags; SEM surfaces are
// decimal cluster indices with "0" pre-interned as the UNK cluster.
class Vocabulary {
 public:
  Vocabulary();

  FillerId intern(Dim dim, std::string_view surface);
  std::optional<FillerId> find(Dim dim, std::string_view surface) const;
  const std::string& surface(Dim dim, FillerId id) const;
  std::size_t size(Dim dim) const;

  static bool is_upos(std::string_view tag);
  static std::span<const std::string_view> upos_tags();

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  using Table =
      std::unordered_map<std::string, FillerId, StringHash, std::equal_to<>>;

  std::array<std::vector<std::string>, kNumDims> surfaces_;
  std::array<Table, kNumDims> ids_;
};

struct AnnotatedToken {
  FillerId lex = 0;
  FillerId syn = 0;
  FillerId sem = 0;

  Filler filler(Dim d) const {
    switch (d) {
      case Dim::LEX: return {Dim::LEX, lex};
      case Dim::SYN: return {Dim::SYN, syn};
      default: return {Dim::SEM, sem};
    }
  }

  bool operator==(const AnnotatedToken&) const = default;
};

struct Sentence {
  std::vector<AnnotatedToken> tokens;

  std::size_t size() const { return tokens.size(); }
};

struct Corpus {
  std::vector<Sentence> sentences;
  std::uint64_t word_count = 0;
  std::string register_label;

  std::size_t num_sentences() const { return sentences.size(); }
};

// Reads the annotated TSV format: `form<TAB>upos<TAB>cluster` per line,
// blank line between sentences, `#` lines ignored, cluster `_` = UNK.
// Extends `vocab` in place. Throws ParseError / ValidationError /
// EmptyCorpusError on the documented malformed cases.
Corpus load_corpus(const std::filesystem::path& path, Vocabulary& vocab,
                   std::string register_label = "");
Corpus load_corpus_text(std::string_view text, Vocabulary& vocab,
                        std::string register_label = "",
                        std::string_view source_name = "<text>");

// Fixed-dimension word vector table in the plain-text format
// `<vocab_size> <dim>` header followed by `word v1 ... vd` lines.
class EmbeddingTable {
 public:
  static EmbeddingTable load(const std::filesystem::path& path);
  static EmbeddingTable parse(std::string_view text,
                              std::string_view source_name = "<text>");

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return dim_; }
  const std::string& word(std::size_t index) const { return words_[index]; }
  std::span<const double> vector(std::size_t index) const {
    return {data_.data() + index * dim_, dim_};
  }
  std::optional<std::size_t> index_of(std::string_view word) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
  std::size_t dim_ = 0;
};

// k-means output: centroids plus a total word -> cluster map. Cluster
// indices are 1-based; index 0 is reserved for out-of-table words.
struct ClusterModel {
  std::uint32_t k = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<double> centroids;  // k * dim, row-major
  std::unordered_map<std::string, std::uint32_t> assignment;
  std::vector<double> inertia_history;  // objective after each assignment pass

  std::uint32_t cluster_of(std::string_view word) const;
  std::span<const double> centroid(std::uint32_t cluster_index) const;

  void save(const std::filesystem::path& path) const;
  static ClusterModel load(const std::filesystem::path& path);
};

// Lloyd k-means with seeded k-means++ init, Euclidean distance, at most
// 100 iterations, 1e-4 tolerance on centroid movement. Assignment ties go
// to the lowest centroid index, so the result is reproducible.
ClusterModel cluster_embeddings(const EmbeddingTable& table, std::uint32_t k,
                                std::uint64_t seed);

// Replaces every token's sem id with the model's cluster for its word form
// (UNK when absent). lex/syn ids are untouched. Total and idempotent.
Corpus assign_semantics(const Corpus& corpus, const ClusterModel& model,
                        Vocabulary& vocab);

struct SliceResult {
  Corpus corpus;
  bool truncated = false;
};

// Shortest whole-sentence prefix holding at least n_words tokens. Prefixes
// nest: slice(n) is a prefix of slice(m) for n <= m. When the corpus is
// smaller than n_words the full corpus is returned with truncated = true.
SliceResult slice_exposure(const Corpus& corpus, std::uint64_t n_words);

}  // namespace cxg
