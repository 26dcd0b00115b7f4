#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nerlink/errors.hpp"
#include "nerlink/text.hpp"

namespace nerlink {

enum class SpanSource { ParseChunk, NounCluster, NgramFallback };

inline const char* to_string(SpanSource s) {
  switch (s) {
    case SpanSource::ParseChunk: return "parse-chunk";
    case SpanSource::NounCluster: return "noun-cluster";
    case SpanSource::NgramFallback: return "ngram-fallback";
  }
  return "?";
}

/// A contiguous token range proposed as an entity mention. `end` exclusive.
struct CandidateSpan {
  int start = 0;
  int end = 0;
  std::string text;
  SpanSource source = SpanSource::NgramFallback;

  int width() const { return end - start; }
  bool overlaps(const CandidateSpan& other) const {
    return start < other.end && other.start < end;
  }
};

inline CandidateSpan make_span(const std::vector<Token>& tokens, int start, int end,
                               SpanSource source) {
  return CandidateSpan{start, end, join_tokens(tokens, start, end), source};
}

// ---------------------------------------------------------------------------
// Bracketed constituency trees (PTB-style S-expressions).
// ---------------------------------------------------------------------------

struct ParseNode {
  std::string label;   // empty for leaf word nodes
  std::string word;    // set only on leaves
  std::vector<ParseNode> children;

  bool is_leaf() const { return children.empty() && !word.empty(); }
};

namespace detail {

inline void skip_ws(std::string_view s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

inline std::string read_atom(std::string_view s, std::size_t& i) {
  std::size_t start = i;
  while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) &&
         s[i] != '(' && s[i] != ')') {
    ++i;
  }
  return std::string(s.substr(start, i - start));
}

inline ParseNode parse_node(std::string_view s, std::size_t& i) {
  skip_ws(s, i);
  if (i >= s.size() || s[i] != '(') throw InputError("parse tree: expected '('");
  ++i;
  skip_ws(s, i);
  ParseNode node;
  node.label = read_atom(s, i);
  if (node.label.empty()) throw InputError("parse tree: node without label");
  skip_ws(s, i);
  while (i < s.size() && s[i] != ')') {
    if (s[i] == '(') {
      node.children.push_back(parse_node(s, i));
    } else {
      ParseNode leaf;
      leaf.word = read_atom(s, i);
      node.children.push_back(std::move(leaf));
    }
    skip_ws(s, i);
  }
  if (i >= s.size()) throw InputError("parse tree: unbalanced brackets");
  ++i;  // consume ')'
  return node;
}

inline void collect_leaves(const ParseNode& node, const std::string& tag,
                           std::vector<std::pair<std::string, std::string>>& out) {
  if (node.is_leaf()) {
    out.emplace_back(node.word, tag);
    return;
  }
  for (const auto& child : node.children) collect_leaves(child, node.label, out);
}

}  // namespace detail

/// Parses a PTB-style bracketed tree, e.g. "(S (NP (NN dog)))".
inline ParseNode parse_sexpr(std::string_view text) {
  std::size_t i = 0;
  ParseNode root = detail::parse_node(text, i);
  detail::skip_ws(text, i);
  if (i != text.size()) throw InputError("parse tree: trailing characters");
  return root;
}

/// Leaf words in left-to-right order.
inline std::vector<std::string> parse_leaves(const ParseNode& root) {
  std::vector<std::pair<std::string, std::string>> pairs;
  detail::collect_leaves(root, root.label, pairs);
  std::vector<std::string> words;
  words.reserve(pairs.size());
  for (auto& p : pairs) words.push_back(p.first);
  return words;
}

/// Preterminal label per leaf, usable as POS tags when a parse is supplied.
inline std::vector<std::string> preterminal_tags(const ParseNode& root) {
  std::vector<std::pair<std::string, std::string>> pairs;
  detail::collect_leaves(root, root.label, pairs);
  std::vector<std::string> tags;
  tags.reserve(pairs.size());
  for (auto& p : pairs) tags.push_back(p.second);
  return tags;
}

namespace detail {

inline std::string base_label(std::string_view label) {
  std::size_t cut = label.find_first_of("-=|");
  return std::string(label.substr(0, cut));
}

inline bool is_chunk_label(std::string_view label) {
  std::string base = base_label(label);
  return base == "NP" || base == "VP" || base == "S";
}

inline int collapse_walk(const ParseNode& node, int offset,
                         std::vector<CandidateSpan>& out,
                         const std::vector<Token>& tokens) {
  if (node.is_leaf()) return offset + 1;
  int end = offset;
  // Extent first requires walking children; record spans in pre-order anyway
  // by reserving the slot before descending.
  std::size_t slot = std::string::npos;
  if (is_chunk_label(node.label)) {
    slot = out.size();
    out.push_back(CandidateSpan{});
  }
  for (const auto& child : node.children) end = collapse_walk(child, end, out, tokens);
  if (slot != std::string::npos) {
    out[slot] = make_span(tokens, offset, end, SpanSource::ParseChunk);
  }
  return end;
}

}  // namespace detail

/// Collapses every NP, VP, and S constituent into a candidate span. The tree's
/// leaves must equal the token surfaces, in order.
inline std::vector<CandidateSpan> collapse_parse(const ParseNode& tree,
                                                 const std::vector<Token>& tokens) {
  std::vector<std::string> leaves = parse_leaves(tree);
  if (leaves.size() != tokens.size()) {
    throw InputError("parse tree has " + std::to_string(leaves.size()) +
                     " leaves for " + std::to_string(tokens.size()) + " tokens");
  }
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i] != tokens[i].surface) {
      throw InputError("parse leaf '" + leaves[i] + "' does not match token '" +
                       tokens[i].surface + "' at position " + std::to_string(i));
    }
  }
  std::vector<CandidateSpan> raw;
  detail::collapse_walk(tree, 0, raw, tokens);

  std::vector<CandidateSpan> out;
  std::set<std::pair<int, int>> seen;
  for (auto& span : raw) {
    if (seen.insert({span.start, span.end}).second) out.push_back(std::move(span));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shallow tagging fallback.
// ---------------------------------------------------------------------------

/// token -> coarse POS tag map; unknown tokens default to noun so no potential
/// entity name is lost before querying.
class TagLexicon {
public:
  TagLexicon() = default;
  explicit TagLexicon(std::unordered_map<std::string, std::string> tags)
      : tags_(std::move(tags)) {}

  std::string tag(std::string_view token) const {
    auto it = tags_.find(std::string(token));
    return it == tags_.end() ? std::string("noun") : it->second;
  }
  std::size_t size() const { return tags_.size(); }

private:
  std::unordered_map<std::string, std::string> tags_;
};

namespace detail {

inline TagLexicon parse_tag_lexicon(std::istream& in, const std::string& origin) {
  std::unordered_map<std::string, std::string> tags;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw ParseError("tag lexicon row needs token<TAB>tag in " + origin, line_no);
    }
    tags[normalize(line.substr(0, tab))] = line.substr(tab + 1);
  }
  return TagLexicon(std::move(tags));
}

}  // namespace detail

/// Loads a TSV tag lexicon: `token<TAB>tag`, '#' comments.
inline TagLexicon load_tag_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tag lexicon: " + path);
  return detail::parse_tag_lexicon(in, path);
}

/// Function words and common conversational verbs/adjectives mirrored in
/// `data/tags.tsv`. Everything absent here falls back to noun.
inline const char* default_tag_lexicon_text() {
  return
      "# token\ttag\n"
      "i\tpron\nme\tpron\nmy\tpron\nmine\tpron\nyou\tpron\nyour\tpron\nyours\tpron\n"
      "he\tpron\nhim\tpron\nhis\tpron\nshe\tpron\nher\tpron\nhers\tpron\nit\tpron\n"
      "its\tpron\nwe\tpron\nus\tpron\nour\tpron\nours\tpron\nthey\tpron\nthem\tpron\n"
      "their\tpron\ntheirs\tpron\nthis\tpron\nthat\tpron\nthese\tpron\nthose\tpron\n"
      "who\tpron\nwhom\tpron\nwhat\tpron\nwhich\tpron\nsomething\tpron\nanything\tpron\n"
      "the\tdet\na\tdet\nan\tdet\nsome\tdet\nany\tdet\neach\tdet\nevery\tdet\nno\tdet\n"
      "of\tprep\nin\tprep\non\tprep\nat\tprep\nby\tprep\nfor\tprep\nwith\tprep\n"
      "from\tprep\nto\tprep\ninto\tprep\nover\tprep\nunder\tprep\nabout\tprep\n"
      "after\tprep\nbefore\tprep\nbetween\tprep\nduring\tprep\nthrough\tprep\n"
      "against\tprep\naround\tprep\nnear\tprep\nsince\tprep\nwithout\tprep\n"
      "and\tconj\nor\tconj\nbut\tconj\nso\tconj\nbecause\tconj\nif\tconj\nwhen\tconj\n"
      "while\tconj\nthough\tconj\nalthough\tconj\nwhether\tconj\n"
      "is\tverb\nare\tverb\nwas\tverb\nwere\tverb\nbe\tverb\nbeen\tverb\nbeing\tverb\n"
      "am\tverb\ndo\tverb\ndoes\tverb\ndid\tverb\ndone\tverb\nhave\tverb\nhas\tverb\n"
      "had\tverb\nhaving\tverb\nwill\tverb\nwould\tverb\ncan\tverb\ncould\tverb\n"
      "shall\tverb\nshould\tverb\nmay\tverb\nmight\tverb\nmust\tverb\n"
      "get\tverb\ngot\tverb\ngets\tverb\ngetting\tverb\ngo\tverb\ngoes\tverb\n"
      "going\tverb\nwent\tverb\ngone\tverb\nmake\tverb\nmakes\tverb\nmade\tverb\n"
      "making\tverb\nsay\tverb\nsays\tverb\nsaid\tverb\nsee\tverb\nsees\tverb\n"
      "saw\tverb\nseen\tverb\nseeing\tverb\nwatch\tverb\nwatches\tverb\nwatched\tverb\n"
      "watching\tverb\nthink\tverb\nthinks\tverb\nthought\tverb\nthinking\tverb\n"
      "know\tverb\nknows\tverb\nknew\tverb\nknown\tverb\nlike\tverb\nlikes\tverb\n"
      "liked\tverb\nliking\tverb\nlove\tverb\nloves\tverb\nloved\tverb\nloving\tverb\n"
      "hate\tverb\nhates\tverb\nhated\tverb\nwant\tverb\nwants\tverb\nwanted\tverb\n"
      "play\tverb\nplays\tverb\nplayed\tverb\nplaying\tverb\nread\tverb\nreads\tverb\n"
      "reading\tverb\nlisten\tverb\nlistens\tverb\nlistened\tverb\nlistening\tverb\n"
      "visit\tverb\nvisits\tverb\nvisited\tverb\nvisiting\tverb\nlive\tverb\n"
      "lives\tverb\nlived\tverb\nliving\tverb\ntravel\tverb\ntraveled\tverb\n"
      "traveling\tverb\neat\tverb\neats\tverb\nate\tverb\neating\tverb\ntalk\tverb\n"
      "talks\tverb\ntalked\tverb\ntalking\tverb\nguess\tverb\nwonder\tverb\n"
      "wondered\tverb\nlet\tverb\nlets\tverb\nappear\tverb\nappeared\tverb\n"
      "debuted\tverb\nsing\tverb\nsang\tverb\nheard\tverb\nhear\tverb\nwrote\tverb\n"
      "written\tverb\nmet\tverb\nmeet\tverb\nmoved\tverb\nkind\tadv\n"
      "very\tadv\nreally\tadv\nquite\tadv\njust\tadv\nright\tadv\nnow\tadv\nhere\tadv\n"
      "there\tadv\nthen\tadv\ntoo\tadv\nalso\tadv\nnot\tadv\nnever\tadv\nalways\tadv\n"
      "often\tadv\nsometimes\tadv\nagain\tadv\nstill\tadv\nyet\tadv\nsoon\tadv\n"
      "away\tadv\nback\tadv\nonly\tadv\neven\tadv\nprobably\tadv\nmaybe\tadv\n"
      "pretty\tadv\nfirst\tadv\nlast\tadv\never\tadv\nhow\tadv\nwhy\tadv\nwhere\tadv\n"
      "favorite\tadj\ngood\tadj\ngreat\tadj\nbad\tadj\nnew\tadj\nold\tadj\nbest\tadj\n"
      "worst\tadj\ncool\tadj\nscary\tadj\nfunny\tadj\nsmart\tadj\nbig\tadj\nsmall\tadj\n"
      "little\tadj\nlong\tadj\nshort\tadj\nhigh\tadj\nlow\tadj\npopular\tadj\n"
      "famous\tadj\nrecent\tadj\nnice\tadj\nawesome\tadj\namazing\tadj\nbusy\tadj\n"
      "dead\tadj\nhello\tintj\nhi\tintj\nhey\tintj\nyeah\tintj\nyes\tintj\nokay\tintj\n"
      "ok\tintj\noh\tintj\nwow\tintj\n";
}

inline TagLexicon default_tag_lexicon() {
  std::istringstream in(default_tag_lexicon_text());
  return detail::parse_tag_lexicon(in, "<built-in>");
}

inline std::vector<std::string> pos_tag(const std::vector<Token>& tokens,
                                        const TagLexicon& lexicon) {
  std::vector<std::string> tags;
  tags.reserve(tokens.size());
  for (const auto& t : tokens) tags.push_back(lexicon.tag(t.surface));
  return tags;
}

/// Accepts both the coarse lexicon tags and PTB preterminals.
inline bool is_noun_tag(std::string_view tag) {
  if (tag == "noun" || tag == "num" || tag == "CD") return true;
  return tag.size() >= 2 && tag[0] == 'N' && tag[1] == 'N';
}

/// Maximal runs of noun-tagged tokens become spans.
inline std::vector<CandidateSpan> noun_clusters(const std::vector<Token>& tokens,
                                                const std::vector<std::string>& tags) {
  if (tags.size() != tokens.size()) {
    throw InputError("tag list length " + std::to_string(tags.size()) +
                     " does not match token count " + std::to_string(tokens.size()));
  }
  std::vector<CandidateSpan> out;
  int n = static_cast<int>(tokens.size());
  int i = 0;
  while (i < n) {
    if (!is_noun_tag(tags[static_cast<std::size_t>(i)])) {
      ++i;
      continue;
    }
    int j = i;
    while (j < n && is_noun_tag(tags[static_cast<std::size_t>(j)])) ++j;
    out.push_back(make_span(tokens, i, j, SpanSource::NounCluster));
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Candidate generation.
// ---------------------------------------------------------------------------

/// Single-pronoun spans are dropped unless the pronoun appears in `exceptions`
/// with a type set intersecting the active expected types (the "it while
/// discussing movies" case).
struct PronounPolicy {
  std::set<std::string> pronouns;
  std::map<std::string, std::set<std::string>> exceptions;
};

inline PronounPolicy default_pronoun_policy() {
  PronounPolicy p;
  p.pronouns = {"i",    "me",  "my",    "mine",  "you",  "your", "yours", "he",
                "him",  "his", "she",   "her",   "hers", "it",   "its",   "we",
                "us",   "our", "ours",  "they",  "them", "their", "theirs",
                "this", "that", "these", "those"};
  p.exceptions = {{"it", {"Movie"}}, {"us", {"Country"}}};
  return p;
}

struct SegmenterOptions {
  int max_ngram = 8;
  int span_budget = 32;
};

namespace detail {

inline bool types_intersect(const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& t : a) {
    if (b.count(t)) return true;
  }
  return false;
}

}  // namespace detail

/// Whether a bare pronoun may stand as an entity span under the current
/// context: it must be on the exception list and the active expected types
/// must intersect the exception's types. Applied both when generating spans
/// and again to ranked mention regions, which can shrink onto a pronoun.
inline bool single_pronoun_allowed(const PronounPolicy& policy, const std::string& surface,
                                   const std::set<std::string>& active_types) {
  if (!policy.pronouns.count(surface)) return true;
  auto it = policy.exceptions.find(surface);
  return it != policy.exceptions.end() && detail::types_intersect(it->second, active_types);
}

namespace detail {

// Keeps linguistically motivated spans first, then fills the remaining budget
// with n-gram spans by length descending.
inline std::vector<CandidateSpan> apply_budget(std::vector<CandidateSpan> spans, int budget) {
  if (static_cast<int>(spans.size()) <= budget) return spans;
  auto rank = [](const CandidateSpan& s) {
    return s.source == SpanSource::NgramFallback ? 1 : 0;
  };
  std::stable_sort(spans.begin(), spans.end(),
                   [&](const CandidateSpan& a, const CandidateSpan& b) {
                     if (rank(a) != rank(b)) return rank(a) < rank(b);
                     if (a.width() != b.width()) return a.width() > b.width();
                     return a.start < b.start;
                   });
  spans.resize(static_cast<std::size_t>(budget));
  return spans;
}

}  // namespace detail

/// Two-pass candidate generation: parse constituents (or an n-gram fallback
/// when no parse is available) unioned with sequential noun clusters, with
/// single pronouns excluded and (start, end) duplicates removed.
inline std::vector<CandidateSpan> generate_candidates(
    const std::vector<Token>& tokens, const ParseNode* parse, const TagLexicon& lexicon,
    const PronounPolicy& pronouns, const std::set<std::string>& active_types,
    const SegmenterOptions& opts = {}) {
  std::vector<CandidateSpan> all;
  std::vector<std::string> tags;
  if (parse != nullptr) {
    auto chunks = collapse_parse(*parse, tokens);
    all.insert(all.end(), chunks.begin(), chunks.end());
    tags = preterminal_tags(*parse);
  } else {
    tags = pos_tag(tokens, lexicon);
  }

  auto clusters = noun_clusters(tokens, tags);
  all.insert(all.end(), clusters.begin(), clusters.end());

  if (parse == nullptr) {
    int n = static_cast<int>(tokens.size());
    std::vector<bool> noun(tokens.size());
    for (std::size_t i = 0; i < tags.size(); ++i) noun[i] = is_noun_tag(tags[i]);
    for (int s = 0; s < n; ++s) {
      bool has_noun = false;
      for (int e = s + 1; e <= std::min(n, s + opts.max_ngram); ++e) {
        has_noun = has_noun || noun[static_cast<std::size_t>(e - 1)];
        if (has_noun) all.push_back(make_span(tokens, s, e, SpanSource::NgramFallback));
      }
    }
  }

  std::vector<CandidateSpan> out;
  std::set<std::pair<int, int>> seen;
  for (auto& span : all) {
    if (!seen.insert({span.start, span.end}).second) continue;
    if (span.width() == 1 &&
        !single_pronoun_allowed(pronouns, tokens[static_cast<std::size_t>(span.start)].surface,
                                active_types)) {
      continue;
    }
    out.push_back(std::move(span));
  }

  // Excepted pronouns still need a span even when nothing tags them as nouns.
  for (const auto& token : tokens) {
    if (!pronouns.pronouns.count(token.surface)) continue;
    if (!single_pronoun_allowed(pronouns, token.surface, active_types)) continue;
    if (seen.insert({token.position, token.position + 1}).second) {
      out.push_back(make_span(tokens, token.position, token.position + 1,
                              SpanSource::NgramFallback));
    }
  }

  out = detail::apply_budget(std::move(out), opts.span_budget);
  std::sort(out.begin(), out.end(), [](const CandidateSpan& a, const CandidateSpan& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });
  return out;
}

}  // namespace nerlink
