#include "cxg/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cxg/errors.hpp"

namespace cxg {

void SearchParams::validate() const {
  if (beam_width < 1) throw ArgumentError("beam_width must be at least 1");
  if (min_len < 2) throw ArgumentError("min_len must be at least 2");
  if (min_len > max_len)
    throw ArgumentError("min_len (" + std::to_string(min_len) +
                        ") exceeds max_len (" + std::to_string(max_len) +
                        ")");
  if (!std::isfinite(delta_threshold))
    throw ArgumentError("delta_threshold must be finite");
  if (candidates_per_sentence < 1)
    throw ArgumentError("candidates_per_sentence must be at least 1");
}

namespace {

struct BeamState {
  Construction slots;
  double score = 0.0;
  double last_increment = std::numeric_limits<double>::infinity();
  std::uint32_t start = 0;

  std::size_t end(/*exclusive*/) const { return start + slots.size(); }
};

// Dimension sequences compared lexicographically with LEX < SYN < SEM.
int compare_dims(const Construction& a, const Construction& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].dim != b[i].dim) return a[i].dim < b[i].dim ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

bool beam_order(const BeamState& a, const BeamState& b) {
  if (a.score != b.score) return a.score > b.score;
  int dims = compare_dims(a.slots, b.slots);
  if (dims != 0) return dims < 0;
  return a.start < b.start;
}

bool emit_order(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.start != b.start) return a.start < b.start;
  return compare_dims(a.construction, b.construction) < 0;
}

}  // namespace

std::vector<ScoredCandidate> search_sentence(const Sentence& sentence,
                                             const DeltaPMatrix& matrix,
                                             const SearchParams& params,
                                             std::uint32_t sentence_index) {
  params.validate();
  const std::size_t len = sentence.size();
  if (len < params.min_len) return {};

  std::vector<BeamState> live;
  live.reserve(3 * len);
  for (std::uint32_t p = 0; p + 1 < len; ++p) {
    for (Dim d : kAllDims) {
      BeamState state;
      state.start = p;
      state.slots.push_back({d, sentence.tokens[p].filler(d).id});
      live.push_back(std::move(state));
    }
  }

  std::vector<ScoredCandidate> emitted;
  std::vector<BeamState> children;
  while (!live.empty()) {
    children.clear();
    children.reserve(live.size() * kNumDims);
    for (const BeamState& state : live) {
      Filler last = state.slots.back().filler();
      const AnnotatedToken& next = sentence.tokens[state.end()];
      for (Dim d : kAllDims) {
        Filler f = next.filler(d);
        BeamState child;
        child.slots = state.slots;
        child.slots.push_back({d, f.id});
        child.last_increment = matrix.lookup(last, f, Direction::LR);
        child.score = state.score + child.last_increment;
        child.start = state.start;
        children.push_back(std::move(child));
      }
    }
    std::sort(children.begin(), children.end(), beam_order);
    if (children.size() > params.beam_width)
      children.resize(params.beam_width);

    live.clear();
    for (BeamState& child : children) {
      bool stopped = child.last_increment < params.delta_threshold ||
                     child.slots.size() >= params.max_len ||
                     child.end() >= len;
      if (!stopped) {
        live.push_back(std::move(child));
      } else if (child.slots.size() >= params.min_len) {
        emitted.push_back({std::move(child.slots), child.score,
                           sentence_index, child.start});
      }
    }
  }

  std::sort(emitted.begin(), emitted.end(), emit_order);
  if (emitted.size() > params.candidates_per_sentence)
    emitted.resize(params.candidates_per_sentence);
  return emitted;
}

void ProvisionalGrammar::add(const Construction& construction, double score) {
  ProvisionalEntry& entry = entries_[construction];
  entry.frequency += 1;
  entry.total_score += score;
}

void ProvisionalGrammar::merge(const ProvisionalGrammar& other) {
  for (const auto& [construction, entry] : other.entries_) {
    ProvisionalEntry& mine = entries_[construction];
    mine.frequency += entry.frequency;
    mine.total_score += entry.total_score;
  }
}

ProvisionalGrammar build_provisional(const Corpus& corpus,
                                     const DeltaPMatrix& matrix,
                                     const SearchParams& params) {
  params.validate();
  ProvisionalGrammar provisional;
  for (std::uint32_t s = 0; s < corpus.sentences.size(); ++s) {
    for (const ScoredCandidate& candidate :
         search_sentence(corpus.sentences[s], matrix, params, s)) {
      provisional.add(candidate.construction, candidate.score);
    }
  }
  return provisional;
}

}  // namespace cxg
