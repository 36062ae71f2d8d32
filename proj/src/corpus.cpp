#include "cxg/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cxg/errors.hpp"
#include "cxg/rng.hpp"

namespace cxg {

namespace {

constexpr std::string_view kUposTags[17] = {
    "ADJ",  "ADP",   "ADV",  "AUX",  "CCONJ", "DET",  "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM",  "VERB", "X"};

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace

Vocabulary::Vocabulary() {
  intern(Dim::SEM, "0");  // UNK cluster keeps id 0 in every vocabulary
}

FillerId Vocabulary::intern(Dim dim, std::string_view surface) {
  auto& table = ids_[static_cast<int>(dim)];
  if (auto it = table.find(surface); it != table.end()) return it->second;
  auto& surfaces = surfaces_[static_cast<int>(dim)];
  FillerId id = static_cast<FillerId>(surfaces.size());
  surfaces.emplace_back(surface);
  table.emplace(surfaces.back(), id);
  return id;
}

std::optional<FillerId> Vocabulary::find(Dim dim,
                                         std::string_view surface) const {
  const auto& table = ids_[static_cast<int>(dim)];
  if (auto it = table.find(surface); it != table.end()) return it->second;
  return std::nullopt;
}

const std::string& Vocabulary::surface(Dim dim, FillerId id) const {
  const auto& surfaces = surfaces_[static_cast<int>(dim)];
  if (id >= surfaces.size())
    throw ArgumentError("filler id " + std::to_string(id) +
                        " out of range for dimension " +
                        std::string(dim_name(dim)));
  return surfaces[id];
}

std::size_t Vocabulary::size(Dim dim) const {
  return surfaces_[static_cast<int>(dim)].size();
}

bool Vocabulary::is_upos(std::string_view tag) {
  return std::find(std::begin(kUposTags), std::end(kUposTags), tag) !=
         std::end(kUposTags);
}

std::span<const std::string_view> Vocabulary::upos_tags() {
  return {kUposTags, std::size(kUposTags)};
}

Corpus load_corpus_text(std::string_view text, Vocabulary& vocab,
                        std::string register_label,
                        std::string_view source_name) {
  Corpus corpus;
  corpus.register_label = std::move(register_label);
  Sentence current;

  auto fail = [&](std::string_view what, std::size_t line_no) {
    std::ostringstream msg;
    msg << source_name << ":" << line_no << ": " << what;
    return msg.str();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (line.ends_with('\r')) line.remove_suffix(1);

    if (is_blank(line)) {
      if (!current.tokens.empty()) {
        corpus.word_count += current.tokens.size();
        corpus.sentences.push_back(std::move(current));
        current = {};
      }
      continue;
    }
    if (line.starts_with('#')) continue;

    std::size_t tab1 = line.find('\t');
    std::size_t tab2 =
        tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab1 == std::string_view::npos || tab2 == std::string_view::npos ||
        line.find('\t', tab2 + 1) != std::string_view::npos) {
      throw ParseError(
          fail("expected 3 tab-separated fields (form, upos, cluster)",
               line_no));
    }
    std::string_view form = line.substr(0, tab1);
    std::string_view upos = line.substr(tab1 + 1, tab2 - tab1 - 1);
    std::string_view cluster = line.substr(tab2 + 1);

    if (form.empty() || form.find_first_of(" \t") != std::string_view::npos)
      throw ParseError(fail("word form must be non-empty and contain no "
                            "spaces", line_no));
    if (!Vocabulary::is_upos(upos))
      throw ValidationError(fail("unknown UPOS tag '" + std::string(upos) +
                                 "'", line_no));

    AnnotatedToken token;
    token.lex = vocab.intern(Dim::LEX, form);
    token.syn = vocab.intern(Dim::SYN, upos);
    if (cluster == "_") {
      token.sem = 0;
    } else {
      std::uint32_t index = 0;
      auto [ptr, ec] =
          std::from_chars(cluster.data(), cluster.data() + cluster.size(),
                          index);
      if (ec != std::errc{} || ptr != cluster.data() + cluster.size())
        throw ParseError(
            fail("cluster must be a nonnegative integer or '_'", line_no));
      token.sem = vocab.intern(Dim::SEM, cluster);
    }
    current.tokens.push_back(token);
  }
  if (!current.tokens.empty()) {
    corpus.word_count += current.tokens.size();
    corpus.sentences.push_back(std::move(current));
  }
  if (corpus.sentences.empty())
    throw EmptyCorpusError(std::string(source_name) +
                           ": corpus contains no sentences");
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, Vocabulary& vocab,
                   std::string register_label) {
  return load_corpus_text(read_file(path), vocab, std::move(register_label),
                          path.string());
}

EmbeddingTable EmbeddingTable::parse(std::string_view text,
                                     std::string_view source_name) {
  EmbeddingTable table;
  std::istringstream in{std::string(text)};
  std::size_t vocab_size = 0;
  if (!(in >> vocab_size >> table.dim_) || table.dim_ == 0)
    throw ParseError(std::string(source_name) +
                     ": expected header '<vocab_size> <dim>' with dim > 0");
  table.words_.reserve(vocab_size);
  table.data_.reserve(vocab_size * table.dim_);
  std::string word, component;
  while (in >> word) {
    for (std::size_t j = 0; j < table.dim_; ++j) {
      if (!(in >> component))
        throw ParseError(std::string(source_name) + ": vector for '" + word +
                         "' has fewer than " + std::to_string(table.dim_) +
                         " components");
      // from_chars instead of stream extraction so "nan"/"inf" parse and
      // land in the non-finite check rather than a bogus count error.
      double v = 0.0;
      const char* last = component.data() + component.size();
      auto [ptr, ec] = std::from_chars(component.data(), last, v);
      if (ec == std::errc::result_out_of_range)
        throw ValidationError(std::string(source_name) + ": vector for '" +
                              word + "' contains an out-of-range value '" +
                              component + "'");
      if (ec != std::errc{} || ptr != last)
        throw ParseError(std::string(source_name) + ": vector for '" + word +
                         "' has a non-numeric component '" + component + "'");
      if (!std::isfinite(v))
        throw ValidationError(std::string(source_name) + ": vector for '" +
                              word + "' contains a non-finite value");
      table.data_.push_back(v);
    }
    table.index_.emplace(word, table.words_.size());
    table.words_.push_back(word);
  }
  if (table.words_.size() != vocab_size)
    throw ParseError(std::string(source_name) + ": header declared " +
                     std::to_string(vocab_size) + " words but file has " +
                     std::to_string(table.words_.size()));
  return table;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

std::optional<std::size_t> EmbeddingTable::index_of(
    std::string_view word) const {
  if (auto it = index_.find(std::string(word)); it != index_.end())
    return it->second;
  return std::nullopt;
}

std::uint32_t ClusterModel::cluster_of(std::string_view word) const {
  if (auto it = assignment.find(std::string(word)); it != assignment.end())
    return it->second;
  return 0;
}

std::span<const double> ClusterModel::centroid(
    std::uint32_t cluster_index) const {
  if (cluster_index == 0 || cluster_index > k)
    throw ArgumentError("cluster index " + std::to_string(cluster_index) +
                        " out of range [1, " + std::to_string(k) + "]");
  return {centroids.data() + (cluster_index - 1) * dim, dim};
}

void ClusterModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  nlohmann::json header{{"k", k}, {"dim", dim}, {"seed", seed}};
  out << header.dump() << "\n";
  std::vector<std::pair<std::string_view, std::uint32_t>> rows(
      assignment.begin(), assignment.end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [word, cluster] : rows)
    out << word << '\t' << cluster << '\n';
}

ClusterModel ClusterModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  ClusterModel model;
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path.string() + ": missing JSON header line");
  nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object())
    throw ParseError(path.string() + ": first line is not a JSON object");
  model.k = header.value("k", 0u);
  model.dim = header.value("dim", std::size_t{0});
  model.seed = header.value("seed", std::uint64_t{0});
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected `word<TAB>cluster`");
    std::uint32_t cluster = 0;
    const char* first = line.data() + tab + 1;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, cluster);
    if (ec != std::errc{} || ptr != last || cluster == 0 ||
        cluster > model.k)
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": cluster index must be in [1, k]");
    model.assignment.emplace(line.substr(0, tab), cluster);
  }
  return model;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

}  // namespace

ClusterModel cluster_embeddings(const EmbeddingTable& table, std::uint32_t k,
                                std::uint64_t seed) {
  const std::size_t n = table.size();
  if (k < 1) throw ArgumentError("k must be at least 1");
  if (k > n)
    throw ArgumentError("k = " + std::to_string(k) +
                        " exceeds embedding vocabulary size " +
                        std::to_string(n));

  const std::size_t d = table.dim();
  ClusterModel model;
  model.k = k;
  model.dim = d;
  model.seed = seed;
  model.centroids.assign(static_cast<std::size_t>(k) * d, 0.0);

  Rng rng(seed);
  auto centroid = [&](std::uint32_t j) {
    return std::span<double>(model.centroids.data() + std::size_t(j) * d, d);
  };

  // k-means++ seeding: first centroid uniform, the rest D^2-weighted.
  std::size_t first = rng.below(n);
  std::copy_n(table.vector(first).data(), d, centroid(0).data());
  std::vector<double> dist2(n);
  for (std::size_t i = 0; i < n; ++i)
    dist2[i] = squared_distance(table.vector(i), centroid(0));
  for (std::uint32_t j = 1; j < k; ++j) {
    std::size_t pick = rng.weighted(dist2);
    std::copy_n(table.vector(pick).data(), d, centroid(j).data());
    for (std::size_t i = 0; i < n; ++i)
      dist2[i] = std::min(dist2[i],
                          squared_distance(table.vector(i), centroid(j)));
  }

  std::vector<std::uint32_t> assignment(n, 0);
  std::vector<double> sums(static_cast<std::size_t>(k) * d);
  std::vector<std::uint64_t> sizes(k);
  constexpr int kMaxIterations = 100;
  constexpr double kTolerance = 1e-4;

  for (int iteration = 0; iteration < kMaxIterations; ++iteration) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t best_j = 0;
      for (std::uint32_t j = 0; j < k; ++j) {
        double dd = squared_distance(table.vector(i), centroid(j));
        if (dd < best) {  // strict: ties keep the lowest centroid index
          best = dd;
          best_j = j;
        }
      }
      assignment[i] = best_j;
      inertia += best;
    }
    model.inertia_history.push_back(inertia);

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto vec = table.vector(i);
      double* sum = sums.data() + std::size_t(assignment[i]) * d;
      for (std::size_t c = 0; c < d; ++c) sum[c] += vec[c];
      ++sizes[assignment[i]];
    }
    double movement = 0.0;
    for (std::uint32_t j = 0; j < k; ++j) {
      if (sizes[j] == 0) continue;  // empty cluster keeps its centroid
      double moved2 = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        double updated = sums[std::size_t(j) * d + c] / double(sizes[j]);
        double delta = updated - centroid(j)[c];
        moved2 += delta * delta;
        centroid(j)[c] = updated;
      }
      movement = std::max(movement, std::sqrt(moved2));
    }
    if (movement < kTolerance) break;
  }

  // Final pass so the stored assignment is a fixed point of the centroids.
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_j = 0;
    for (std::uint32_t j = 0; j < k; ++j) {
      double dd = squared_distance(table.vector(i), centroid(j));
      if (dd < best) {
        best = dd;
        best_j = j;
      }
    }
    model.assignment.emplace(table.word(i), best_j + 1);
  }
  return model;
}

Corpus assign_semantics(const Corpus& corpus, const ClusterModel& model,
                        Vocabulary& vocab) {
  Corpus out = corpus;
  for (auto& sentence : out.sentences) {
    for (auto& token : sentence.tokens) {
      std::uint32_t cluster =
          model.cluster_of(vocab.surface(Dim::LEX, token.lex));
      token.sem = cluster == 0
                      ? 0
                      : vocab.intern(Dim::SEM, std::to_string(cluster));
    }
  }
  return out;
}

SliceResult slice_exposure(const Corpus& corpus, std::uint64_t n_words) {
  if (n_words < 1) throw ArgumentError("n_words must be at least 1");
  SliceResult result;
  result.corpus.register_label = corpus.register_label;
  for (const auto& sentence : corpus.sentences) {
    if (result.corpus.word_count >= n_words) break;
    result.corpus.sentences.push_back(sentence);
    result.corpus.word_count += sentence.size();
  }
  result.truncated = result.corpus.word_count < n_words;
  return result;
}

}  // namespace cxg
