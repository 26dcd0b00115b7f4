#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "nerlink/errors.hpp"

namespace nerlink {

/// One utterance token after normalization.
struct Token {
  std::string surface;
  int position = 0;
  bool is_stop = false;
};

/// Immutable stop-word membership set. Loaded once, shared read-only.
class StopList {
public:
  StopList() = default;
  explicit StopList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  bool contains(std::string_view w) const {
    return words_.count(std::string(w)) > 0;
  }
  std::size_t size() const { return words_.size(); }
  const std::unordered_set<std::string>& words() const { return words_; }

private:
  std::unordered_set<std::string> words_;
};

namespace detail {

inline void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Case folding for Latin-1 Supplement and Latin Extended-A. Anything else
// above ASCII passes through unchanged.
inline uint32_t fold_codepoint(uint32_t cp) {
  if ((cp >= 0xC0 && cp <= 0xD6) || (cp >= 0xD8 && cp <= 0xDE)) return cp + 0x20;
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (cp >= 0x139 && cp <= 0x148) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  if (cp == 0x178) return 0xFF;
  if (cp == 0x179 || cp == 0x17B || cp == 0x17D) return cp + 1;
  return cp;
}

}  // namespace detail

/// Normalizes raw text to the ASR-like form the pipeline assumes: lowercase,
/// every non-alphanumeric character replaced by a space, whitespace collapsed.
/// Codepoints above ASCII count as word characters and are case-folded where
/// we have a table (Latin-1 Supplement, Latin Extended-A). Idempotent.
inline std::string normalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  auto put = [&](auto&& emit) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    emit();
  };

  std::size_t i = 0;
  while (i < raw.size()) {
    unsigned char c = static_cast<unsigned char>(raw[i]);
    if (c < 0x80) {
      if (std::isalnum(c)) {
        put([&] { out.push_back(static_cast<char>(std::tolower(c))); });
      } else {
        pending_space = true;
      }
      ++i;
      continue;
    }
    // Decode one UTF-8 sequence; invalid bytes become separators.
    uint32_t cp = 0;
    int len = 0;
    if ((c & 0xE0) == 0xC0) { cp = c & 0x1F; len = 2; }
    else if ((c & 0xF0) == 0xE0) { cp = c & 0x0F; len = 3; }
    else if ((c & 0xF8) == 0xF0) { cp = c & 0x07; len = 4; }
    if (len == 0 || i + len > raw.size()) {
      pending_space = true;
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(raw[i + k]);
      if ((cc & 0xC0) != 0x80) { ok = false; break; }
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Reject overlong forms, surrogates, and out-of-range codepoints.
    if (ok) {
      if (len == 2 && cp < 0x80) ok = false;
      if (len == 3 && cp < 0x800) ok = false;
      if (len == 4 && cp < 0x10000) ok = false;
      if (cp >= 0xD800 && cp <= 0xDFFF) ok = false;
      if (cp > 0x10FFFF) ok = false;
    }
    if (!ok) {
      pending_space = true;
      ++i;
      continue;
    }
    cp = detail::fold_codepoint(cp);
    put([&] { detail::append_utf8(out, cp); });
    i += len;
  }
  return out;
}

/// Splits normalized text on single spaces and flags tokens against the stop
/// list. Positions are consecutive from 0. Empty input yields an empty list.
inline std::vector<Token> tokenize(std::string_view normalized, const StopList& stops) {
  std::vector<Token> tokens;
  std::size_t start = 0;
  int pos = 0;
  while (start <= normalized.size()) {
    std::size_t end = normalized.find(' ', start);
    if (end == std::string_view::npos) end = normalized.size();
    if (end > start) {
      std::string surface(normalized.substr(start, end - start));
      bool stop = stops.contains(surface);
      tokens.push_back(Token{std::move(surface), pos++, stop});
    }
    if (end == normalized.size()) break;
    start = end + 1;
  }
  return tokens;
}

inline std::string join_tokens(const std::vector<Token>& tokens, int start, int end) {
  std::string out;
  for (int i = start; i < end; ++i) {
    if (i > start) out.push_back(' ');
    out += tokens[static_cast<std::size_t>(i)].surface;
  }
  return out;
}

namespace detail {

inline StopList parse_stoplist(std::istream& in, const std::string& origin) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    std::string norm = normalize(line);
    if (norm.empty()) continue;
    std::istringstream parts(norm);
    std::string w;
    while (parts >> w) words.insert(w);
  }
  if (words.empty()) {
    throw ConfigError("stop list is empty: " + origin);
  }
  return StopList(std::move(words));
}

}  // namespace detail

/// Loads a stop list: one word per line, blank lines and '#' comments ignored.
inline StopList load_stoplist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open stop list: " + path);
  return detail::parse_stoplist(in, path);
}

/// The stop-word list `data/stopwords.txt` ships with. English function words;
/// the 0.75 alignment penalty keys off membership here.
inline const char* default_stoplist_text() {
  return "a\nan\nand\nare\nas\nat\nbe\nbeen\nbut\nby\ncan\ncould\ndid\ndo\n"
         "does\nfor\nfrom\nhad\nhas\nhave\nhe\nher\nhers\nhim\nhis\nhow\ni\n"
         "if\nin\nis\nit\nits\nme\nmy\nno\nnot\nof\non\nor\nour\nours\nshe\n"
         "so\nthat\nthe\ntheir\nthem\nthey\nthis\nto\nus\nwas\nwe\nwere\n"
         "what\nwhen\nwhere\nwhich\nwho\nwill\nwith\nyou\nyour\nyours\n";
}

inline StopList default_stoplist() {
  std::istringstream in(default_stoplist_text());
  return detail::parse_stoplist(in, "<built-in>");
}

}  // namespace nerlink
