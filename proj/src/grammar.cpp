#include "cxg/grammar.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cxg/errors.hpp"

namespace cxg {

std::string slot_to_string(SlotConstraint slot, const Vocabulary& vocab) {
  std::string out{dim_name(slot.dim)};
  out.push_back(':');
  out.append(vocab.surface(slot.dim, slot.id));
  return out;
}

std::string construction_to_string(const Construction& construction,
                                   const Vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < construction.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out.append(slot_to_string(construction[i], vocab));
  }
  return out;
}

Grammar Grammar::build(std::vector<Construction> constructions,
                       const Vocabulary& vocab, GrammarMeta meta) {
  std::vector<std::pair<std::string, Construction>> keyed;
  keyed.reserve(constructions.size());
  for (auto& c : constructions)
    keyed.emplace_back(construction_to_string(c, vocab), std::move(c));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) {
                            return a.first == b.first;
                          }),
              keyed.end());

  Grammar grammar;
  grammar.meta_ = std::move(meta);
  grammar.constructions_.reserve(keyed.size());
  grammar.serials_.reserve(keyed.size());
  for (auto& [serial, construction] : keyed) {
    grammar.index_.emplace(construction,
                           static_cast<std::uint32_t>(
                               grammar.constructions_.size()));
    grammar.constructions_.push_back(std::move(construction));
    grammar.serials_.push_back(std::move(serial));
  }
  return grammar;
}

bool Grammar::contains(const Construction& c) const {
  return index_.contains(c);
}

bool matches_at(const Construction& construction, const Sentence& sentence,
                std::size_t position) {
  if (position + construction.size() > sentence.size()) return false;
  for (std::size_t k = 0; k < construction.size(); ++k) {
    const SlotConstraint& slot = construction[k];
    if (sentence.tokens[position + k].filler(slot.dim).id != slot.id)
      return false;
  }
  return true;
}

GrammarIndex::GrammarIndex(const Grammar& grammar) : grammar_(&grammar) {
  for (std::uint32_t i = 0; i < grammar.size(); ++i) {
    const Construction& c = grammar.at(i);
    if (c.empty()) continue;
    buckets_[pack(c.front().filler())].push_back(i);
  }
}

std::span<const std::uint32_t> GrammarIndex::starting_with(Filler f) const {
  auto it = buckets_.find(pack(f));
  if (it == buckets_.end()) return {};
  return it->second;
}

MatchTable match_corpus(const Grammar& grammar, const Corpus& corpus) {
  GrammarIndex index(grammar);
  MatchTable table;
  table.frequency.assign(grammar.size(), 0);
  table.spans.assign(grammar.size(), {});
  for (std::uint32_t s = 0; s < corpus.sentences.size(); ++s) {
    const Sentence& sentence = corpus.sentences[s];
    for (std::uint32_t pos = 0; pos < sentence.size(); ++pos) {
      for (Dim d : kAllDims) {
        Filler f = sentence.tokens[pos].filler(d);
        for (std::uint32_t ci : index.starting_with(f)) {
          if (matches_at(grammar.at(ci), sentence, pos)) {
            ++table.frequency[ci];
            table.spans[ci].push_back({s, pos});
          }
        }
      }
    }
  }
  return table;
}

Segmentation greedy_cover(const Sentence& sentence,
                          const GrammarIndex& index) {
  const Grammar& grammar = index.grammar();
  Segmentation seg;
  std::uint32_t pos = 0;
  while (pos < sentence.size()) {
    std::uint32_t best_len = 0;
    std::uint32_t best_ci = 0;
    for (Dim d : kAllDims) {
      Filler f = sentence.tokens[pos].filler(d);
      for (std::uint32_t ci : index.starting_with(f)) {
        const Construction& c = grammar.at(ci);
        auto len = static_cast<std::uint32_t>(c.size());
        bool improves = best_len == 0 || len > best_len ||
                        (len == best_len && ci < best_ci);
        if (improves && matches_at(c, sentence, pos)) {
          best_len = len;
          best_ci = ci;
        }
      }
    }
    if (best_len == 0) {
      seg.uncovered.push_back(pos);
      ++pos;
    } else {
      seg.spans.push_back({pos, best_len, best_ci});
      pos += best_len;
    }
  }
  return seg;
}

Segmentation greedy_cover(const Sentence& sentence, const Grammar& grammar) {
  return greedy_cover(sentence, GrammarIndex(grammar));
}

std::string serialize(const Grammar& grammar) {
  std::ostringstream out;
  out << "# cxg-grammar v1\n";
  out << "# register: " << grammar.meta().register_label << "\n";
  out << "# exposure_words: " << grammar.meta().exposure_words << "\n";
  out << "# params: " << grammar.meta().params << "\n";
  for (const std::string& serial : grammar.serials()) out << serial << "\n";
  return std::move(out).str();
}

Grammar deserialize(std::string_view text, Vocabulary& vocab,
                    bool extend_vocab, std::string_view source_name) {
  std::vector<Construction> constructions;
  GrammarMeta meta;

  auto location = [&](std::size_t line_no) {
    return std::string(source_name) + ":" + std::to_string(line_no);
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
    if (line.empty()) continue;

    if (line.starts_with('#')) {
      std::string_view body = line.substr(1);
      if (body.starts_with(' ')) body.remove_prefix(1);
      if (body.starts_with("register: "))
        meta.register_label = std::string(body.substr(10));
      else if (body.starts_with("exposure_words: "))
        std::from_chars(body.data() + 16, body.data() + body.size(),
                        meta.exposure_words);
      else if (body.starts_with("params: "))
        meta.params = std::string(body.substr(8));
      continue;
    }

    Construction construction;
    std::size_t cursor = 0;
    std::size_t slot_no = 0;
    while (cursor < line.size()) {
      std::size_t space = line.find(' ', cursor);
      std::string_view slot = (space == std::string_view::npos)
                                  ? line.substr(cursor)
                                  : line.substr(cursor, space - cursor);
      cursor = (space == std::string_view::npos) ? line.size() : space + 1;
      ++slot_no;
      if (slot.empty())
        throw ParseError(location(line_no) + ": empty slot " +
                         std::to_string(slot_no));
      std::size_t colon = slot.find(':');
      if (colon == std::string_view::npos)
        throw ParseError(location(line_no) + ": slot " +
                         std::to_string(slot_no) +
                         " is missing the DIM: prefix");
      auto dim = dim_from_name(slot.substr(0, colon));
      if (!dim)
        throw ParseError(location(line_no) + ": slot " +
                         std::to_string(slot_no) + " has unknown dimension '" +
                         std::string(slot.substr(0, colon)) + "'");
      std::string_view filler = slot.substr(colon + 1);
      if (filler.empty())
        throw ParseError(location(line_no) + ": slot " +
                         std::to_string(slot_no) + " has an empty filler");

      FillerId id = 0;
      if (extend_vocab) {
        if (*dim == Dim::SYN && !Vocabulary::is_upos(filler))
          throw ValidationError(location(line_no) + ": slot " +
                                std::to_string(slot_no) +
                                ": unknown UPOS tag '" + std::string(filler) +
                                "'");
        if (*dim == Dim::SEM) {
          std::uint32_t cluster = 0;
          auto [ptr, ec] = std::from_chars(
              filler.data(), filler.data() + filler.size(), cluster);
          if (ec != std::errc{} || ptr != filler.data() + filler.size())
            throw ValidationError(location(line_no) + ": slot " +
                                  std::to_string(slot_no) +
                                  ": semantic filler must be a cluster index");
        }
        id = vocab.intern(*dim, filler);
      } else {
        auto found = vocab.find(*dim, filler);
        if (!found)
          throw ValidationError(location(line_no) + ": slot " +
                                std::to_string(slot_no) + ": filler '" +
                                std::string(filler) +
                                "' does not resolve in the vocabulary");
        id = *found;
      }
      construction.push_back({*dim, id});
    }
    if (construction.size() < 2)
      throw ValidationError(location(line_no) +
                            ": constructions need at least 2 slots");
    constructions.push_back(std::move(construction));
  }
  return Grammar::build(std::move(constructions), vocab, std::move(meta));
}

void save_grammar(const Grammar& grammar,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << serialize(grammar);
}

Grammar load_grammar(const std::filesystem::path& path, Vocabulary& vocab,
                     bool extend_vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(std::move(buf).str(), vocab, extend_vocab,
                     path.string());
}

}  // namespace cxg
