#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nerlink/context.hpp"
#include "nerlink/kb.hpp"
#include "nerlink/segment.hpp"
#include "nerlink/text.hpp"

namespace nerlink {

/// Per-name-token overlap vector. Elements live in [0,1]; zero_count tracks
/// exact zeros because the overall score divides by (zeros + 1).
struct WordVector {
  std::vector<double> elements;
  int zero_count = 0;

  double sum() const {
    double s = 0.0;
    for (double e : elements) s += e;
    return s;
  }
};

/// A word vector plus the (name index, window index) pairs that produced it.
struct Alignment {
  WordVector vector;
  std::vector<std::pair<int, int>> matches;
};

namespace detail {

struct AlignCell {
  int matches = 0;
  int gap = 0;
  int next_i = -1;
  int next_j = -1;
  bool set = false;
};

inline bool better_chain(int m1, int g1, int m2, int g2) {
  if (m1 != m2) return m1 > m2;
  return g1 < g2;
}

}  // namespace detail

/// Aligns a candidate entity name against a token window. The alignment keeps
/// name-token order, maximizes the number of matched name tokens, and among
/// maximal alignments minimizes the total internal gap (skipped name tokens
/// plus skipped window tokens between consecutive matches), taking the
/// leftmost on remaining ties.
///
/// Vector construction: unmatched name tokens score 0. A matched token starts
/// at 1 and is multiplied by 1/(gap+1) for the name-side and window-side gaps
/// since the previous match (a first match carries no gap penalty), and by
/// `stop_penalty` when the token is a stop word. Window tokens before the
/// first and after the last match are free context.
inline Alignment align(const std::vector<Token>& name_tokens,
                       const std::vector<Token>& window_tokens,
                       double stop_penalty = 0.75) {
  int m = static_cast<int>(name_tokens.size());
  int n = static_cast<int>(window_tokens.size());
  Alignment out;
  out.vector.elements.assign(static_cast<std::size_t>(m), 0.0);
  out.vector.zero_count = m;
  if (m == 0 || n == 0) return out;

  std::vector<detail::AlignCell> dp(static_cast<std::size_t>(m) * n);
  auto cell = [&](int i, int j) -> detail::AlignCell& {
    return dp[static_cast<std::size_t>(i) * n + j];
  };

  // suffix DP: best chain starting with the match (i, j).
  for (int i = m - 1; i >= 0; --i) {
    for (int j = n - 1; j >= 0; --j) {
      if (name_tokens[static_cast<std::size_t>(i)].surface !=
          window_tokens[static_cast<std::size_t>(j)].surface) {
        continue;
      }
      detail::AlignCell best;
      best.matches = 1;
      best.gap = 0;
      best.set = true;
      for (int i2 = i + 1; i2 < m; ++i2) {
        for (int j2 = j + 1; j2 < n; ++j2) {
          const detail::AlignCell& next = cell(i2, j2);
          if (!next.set) continue;
          int matches = next.matches + 1;
          int gap = next.gap + (i2 - i - 1) + (j2 - j - 1);
          if (detail::better_chain(matches, gap, best.matches, best.gap)) {
            best.matches = matches;
            best.gap = gap;
            best.next_i = i2;
            best.next_j = j2;
          }
        }
      }
      cell(i, j) = best;
    }
  }

  int best_i = -1, best_j = -1, best_m = 0, best_g = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const detail::AlignCell& c = cell(i, j);
      if (!c.set) continue;
      if (best_i < 0 || detail::better_chain(c.matches, c.gap, best_m, best_g)) {
        best_i = i;
        best_j = j;
        best_m = c.matches;
        best_g = c.gap;
      }
    }
  }
  if (best_i < 0) return out;  // nothing matched

  int i = best_i, j = best_j;
  while (i >= 0) {
    out.matches.emplace_back(i, j);
    const detail::AlignCell& c = cell(i, j);
    i = c.next_i;
    j = c.next_j;
  }

  int prev_i = -1, prev_j = -1;
  for (const auto& [mi, mj] : out.matches) {
    double value = 1.0;
    if (prev_i >= 0) {
      value *= 1.0 / static_cast<double>(mi - prev_i - 1 + 1);
      value *= 1.0 / static_cast<double>(mj - prev_j - 1 + 1);
    }
    if (name_tokens[static_cast<std::size_t>(mi)].is_stop) value *= stop_penalty;
    out.vector.elements[static_cast<std::size_t>(mi)] = value;
    prev_i = mi;
    prev_j = mj;
  }
  out.vector.zero_count = 0;
  for (double e : out.vector.elements) {
    if (e == 0.0) ++out.vector.zero_count;
  }
  return out;
}

/// sum(word_vector) * 1/(zero_count + 1) * base_score.
inline double overlap_score(const WordVector& vector, double base_score) {
  return vector.sum() * (1.0 / static_cast<double>(vector.zero_count + 1)) * base_score;
}

/// overlap_score * (num_matches + 1).
inline double context_score(double overlap, int matches) {
  return overlap * static_cast<double>(matches + 1);
}

/// Web-source link carried by a mention: the article URL (if the knowledge
/// graph had one) plus the (canonical name, primary type) key used for
/// follow-up database queries.
struct WebLink {
  std::optional<std::string> article_url;
  std::string kb_name;
  std::string kb_type;
};

/// A (span, entity) pair with its vector and scores. After ranking, `span` is
/// the strong-overlap region: the longest contiguous run of utterance tokens
/// the winning entity name actually matched.
struct ScoredCandidate {
  CandidateSpan span;
  KgEntity entity;
  WordVector vector;
  double overlap = 0.0;
  int matches = 0;
  double final_score = 0.0;
};

/// A surviving, non-overlapping entity mention.
struct Mention {
  CandidateSpan span;
  KgEntity entity;
  double final_score = 0.0;
  WebLink link;
};

namespace detail {

/// Longest contiguous run of matched window positions, leftmost on ties,
/// shifted into utterance coordinates.
inline std::pair<int, int> strong_overlap_region(const std::vector<std::pair<int, int>>& matches,
                                                 int offset) {
  int best_start = -1, best_len = 0;
  int run_start = -1, prev_j = -2;
  for (const auto& [mi, mj] : matches) {
    (void)mi;
    if (mj != prev_j + 1) run_start = mj;
    prev_j = mj;
    int len = mj - run_start + 1;
    if (len > best_len) {
      best_len = len;
      best_start = run_start;
    }
  }
  return {offset + best_start, offset + best_start + best_len};
}

}  // namespace detail

/// Scores every pooled entity against the span's token slice and returns the
/// best, or nothing when the pool is empty or no entity name overlaps the
/// span at all. Ties break toward higher base_score, then lower id.
inline std::optional<ScoredCandidate> rank_span(const CandidateSpan& span,
                                                const std::vector<KgEntity>& pool,
                                                const std::vector<Token>& utterance_tokens,
                                                const ActiveExpectations& active,
                                                const StopList& stops,
                                                double stop_penalty = 0.75) {
  std::optional<ScoredCandidate> best;
  std::vector<Token> slice(utterance_tokens.begin() + span.start,
                           utterance_tokens.begin() + span.end);
  for (const auto& entity : pool) {
    std::vector<Token> name_tokens = tokenize(normalize(entity.name), stops);
    if (name_tokens.empty()) continue;
    Alignment aligned = align(name_tokens, slice, stop_penalty);
    if (aligned.matches.empty()) continue;
    ScoredCandidate cand;
    cand.entity = entity;
    cand.vector = aligned.vector;
    cand.overlap = overlap_score(aligned.vector, entity.base_score);
    cand.matches = num_matches(entity, active);
    cand.final_score = context_score(cand.overlap, cand.matches);
    auto [rs, re] = detail::strong_overlap_region(aligned.matches, span.start);
    cand.span = CandidateSpan{rs, re, join_tokens(utterance_tokens, rs, re), span.source};
    bool take = !best.has_value();
    if (!take) {
      if (cand.final_score != best->final_score) {
        take = cand.final_score > best->final_score;
      } else if (cand.entity.base_score != best->entity.base_score) {
        take = cand.entity.base_score > best->entity.base_score;
      } else {
        take = cand.entity.id < best->entity.id;
      }
    }
    if (take) best = std::move(cand);
  }
  if (best && best->overlap <= 0.0) return std::nullopt;
  return best;
}

enum class ThresholdStage { PreContext, PostContext };

/// Keeps candidates whose score clears the threshold (strictly greater, so a
/// threshold of 0 means "keep everything positive"). The stage selects which
/// score the gate reads: the plain overlap score or the context-boosted one.
inline std::vector<ScoredCandidate> prune(std::vector<ScoredCandidate> candidates,
                                          double threshold,
                                          ThresholdStage stage = ThresholdStage::PostContext) {
  std::vector<ScoredCandidate> out;
  for (auto& c : candidates) {
    double score = stage == ThresholdStage::PostContext ? c.final_score : c.overlap;
    if (score > threshold) out.push_back(std::move(c));
  }
  return out;
}

/// Resolves overlapping candidates into non-overlapping mentions:
/// overlapping spans with the same entity collapse to the wider span, while
/// overlapping spans with different entities keep the higher final score
/// (ties: wider span, then lower start, then id). Output is sorted by start.
inline std::vector<Mention> merge(std::vector<ScoredCandidate> candidates) {
  // Same-entity collapse.
  std::map<std::string, std::vector<ScoredCandidate>> by_entity;
  for (auto& c : candidates) by_entity[c.entity.id].push_back(std::move(c));

  std::vector<ScoredCandidate> survivors;
  for (auto& [id, group] : by_entity) {
    (void)id;
    std::sort(group.begin(), group.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
      if (a.span.width() != b.span.width()) return a.span.width() > b.span.width();
      if (a.final_score != b.final_score) return a.final_score > b.final_score;
      return a.span.start < b.span.start;
    });
    std::vector<ScoredCandidate> kept;
    for (auto& c : group) {
      bool clashes = false;
      for (const auto& k : kept) {
        if (c.span.overlaps(k.span)) {
          clashes = true;
          break;
        }
      }
      if (!clashes) kept.push_back(std::move(c));
    }
    for (auto& c : kept) survivors.push_back(std::move(c));
  }

  // Cross-entity conflicts.
  std::sort(survivors.begin(), survivors.end(),
            [](const ScoredCandidate& a, const ScoredCandidate& b) {
              if (a.final_score != b.final_score) return a.final_score > b.final_score;
              if (a.span.width() != b.span.width()) return a.span.width() > b.span.width();
              if (a.span.start != b.span.start) return a.span.start < b.span.start;
              return a.entity.id < b.entity.id;
            });
  std::vector<ScoredCandidate> kept;
  for (auto& c : survivors) {
    bool clashes = false;
    for (const auto& k : kept) {
      if (c.span.overlaps(k.span)) {
        clashes = true;
        break;
      }
    }
    if (!clashes) kept.push_back(std::move(c));
  }

  std::sort(kept.begin(), kept.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    return a.span.start < b.span.start;
  });
  std::vector<Mention> mentions;
  mentions.reserve(kept.size());
  for (auto& c : kept) {
    mentions.push_back(Mention{std::move(c.span), std::move(c.entity), c.final_score, WebLink{}});
  }
  return mentions;
}

}  // namespace nerlink
