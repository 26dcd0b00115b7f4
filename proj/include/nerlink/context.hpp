#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nerlink/errors.hpp"
#include "nerlink/kb.hpp"
#include "nerlink/text.hpp"

namespace nerlink {

enum class TriggerKind { Verb, Keyword, Phrase };

inline const char* to_string(TriggerKind k) {
  switch (k) {
    case TriggerKind::Verb: return "verb";
    case TriggerKind::Keyword: return "keyword";
    case TriggerKind::Phrase: return "phrase";
  }
  return "?";
}

/// A lexeme (or short phrase) whose presence makes certain entity types
/// expected, e.g. "seen" -> {Movie, MovieSeries}.
struct ExpectationRule {
  std::string trigger;  // normalized
  TriggerKind kind = TriggerKind::Keyword;
  std::set<std::string> target_types;
  double weight = 1.0;
};

/// Rules that fired on an utterance, with the match position of the first
/// occurrence. expected_types is the union of the triggered targets.
struct ActiveExpectations {
  std::vector<std::pair<ExpectationRule, int>> triggered;
  std::set<std::string> expected_types;
};

namespace detail {

inline TriggerKind parse_kind(std::string_view s, int line_no) {
  if (s == "verb") return TriggerKind::Verb;
  if (s == "keyword") return TriggerKind::Keyword;
  if (s == "phrase") return TriggerKind::Phrase;
  throw ParseError("unknown trigger kind '" + std::string(s) + "'", line_no);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(sep, start);
    if (end == std::string_view::npos) end = s.size();
    if (end > start) parts.emplace_back(s.substr(start, end - start));
    if (end == s.size()) break;
    start = end + 1;
  }
  return parts;
}

/// Duplicate (trigger, kind) rows merge: union of targets, max weight.
inline std::vector<ExpectationRule> merge_rules(std::vector<ExpectationRule> rules) {
  std::map<std::pair<std::string, int>, std::size_t> index;
  std::vector<ExpectationRule> out;
  for (auto& rule : rules) {
    auto key = std::make_pair(rule.trigger, static_cast<int>(rule.kind));
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, out.size());
      out.push_back(std::move(rule));
    } else {
      ExpectationRule& existing = out[it->second];
      existing.target_types.insert(rule.target_types.begin(), rule.target_types.end());
      existing.weight = std::max(existing.weight, rule.weight);
    }
  }
  return out;
}

inline std::vector<ExpectationRule> parse_lexicon(std::istream& in, const std::string& origin) {
  std::vector<ExpectationRule> rules;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 4) {
      throw ParseError("lexicon row needs trigger<TAB>kind<TAB>types<TAB>weight in " + origin,
                       line_no);
    }
    ExpectationRule rule;
    rule.trigger = normalize(cols[0]);
    if (rule.trigger.empty()) throw ParseError("empty trigger", line_no);
    rule.kind = parse_kind(cols[1], line_no);
    for (auto& t : split(cols[2], ',')) rule.target_types.insert(t);
    if (rule.target_types.empty()) throw ParseError("rule has no target types", line_no);
    try {
      rule.weight = std::stod(cols[3]);
    } catch (const std::exception&) {
      throw ParseError("weight is not a number", line_no);
    }
    if (!(rule.weight > 0.0 && rule.weight <= 1.0)) {
      throw ParseError("weight must be in (0,1]", line_no);
    }
    rules.push_back(std::move(rule));
  }
  return merge_rules(std::move(rules));
}

}  // namespace detail

/// Loads the trigger lexicon: `trigger<TAB>kind<TAB>type1,type2<TAB>weight`,
/// '#' comments. Duplicate (trigger, kind) rows are merged.
inline std::vector<ExpectationRule> load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon: " + path);
  return detail::parse_lexicon(in, path);
}

inline std::vector<ExpectationRule> load_lexicon_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return detail::parse_lexicon(in, "<string>");
}

/// A rule fires when its trigger occurs as a contiguous token subsequence and
/// its weight clears min_weight. Each rule fires at most once per utterance.
inline ActiveExpectations extract_expectations(const std::vector<Token>& tokens,
                                               const std::vector<ExpectationRule>& rules,
                                               double min_weight) {
  ActiveExpectations active;
  for (const auto& rule : rules) {
    if (rule.weight < min_weight) continue;
    std::vector<std::string> trigger_tokens = detail::split(rule.trigger, ' ');
    if (trigger_tokens.empty()) continue;
    int n = static_cast<int>(tokens.size());
    int m = static_cast<int>(trigger_tokens.size());
    for (int s = 0; s + m <= n; ++s) {
      bool hit = true;
      for (int k = 0; k < m; ++k) {
        if (tokens[static_cast<std::size_t>(s + k)].surface !=
            trigger_tokens[static_cast<std::size_t>(k)]) {
          hit = false;
          break;
        }
      }
      if (hit) {
        active.triggered.emplace_back(rule, s);
        active.expected_types.insert(rule.target_types.begin(), rule.target_types.end());
        break;
      }
    }
  }
  return active;
}

/// Number of triggered rules whose target types intersect the entity's types.
/// This is the num_matches factor of the context boost.
inline int num_matches(const KgEntity& entity, const ActiveExpectations& active) {
  int count = 0;
  for (const auto& [rule, pos] : active.triggered) {
    (void)pos;
    bool hit = false;
    for (const auto& t : entity.types) {
      if (rule.target_types.count(t)) {
        hit = true;
        break;
      }
    }
    if (hit) ++count;
  }
  return count;
}

/// Expands rules along a synonym table (`lexeme<TAB>syn1,syn2,...`): each rule
/// whose trigger has synonyms gains clones per synonym at 0.9x weight, then
/// duplicates merge under the usual rule.
inline std::vector<ExpectationRule> merge_synonym_table(std::vector<ExpectationRule> rules,
                                                        const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open synonym table: " + path);
  std::map<std::string, std::vector<std::string>> synonyms;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols = detail::split(line, '\t');
    if (cols.size() != 2) {
      throw ParseError("synonym row needs lexeme<TAB>syn1,syn2,... in " + path, line_no);
    }
    std::string lexeme = normalize(cols[0]);
    if (lexeme.empty()) throw ParseError("empty lexeme", line_no);
    for (auto& syn : detail::split(cols[1], ',')) {
      std::string norm = normalize(syn);
      if (norm.empty()) throw ParseError("empty synonym", line_no);
      synonyms[lexeme].push_back(std::move(norm));
    }
  }

  std::vector<ExpectationRule> expanded = rules;
  for (const auto& rule : rules) {
    auto it = synonyms.find(rule.trigger);
    if (it == synonyms.end()) continue;
    for (const auto& syn : it->second) {
      ExpectationRule clone = rule;
      clone.trigger = syn;
      clone.weight = rule.weight * 0.9;
      expanded.push_back(std::move(clone));
    }
  }
  return detail::merge_rules(std::move(expanded));
}

/// Seed lexicon mirrored in `data/lexicon.tsv`. Verbs, keywords, and a few
/// phrases covering everyday conversational domains.
inline const char* default_lexicon_text();

inline std::vector<ExpectationRule> default_rules() {
  return load_lexicon_string(default_lexicon_text());
}

inline const char* default_lexicon_text() {
  return
      "# trigger\tkind\ttypes\tweight\n"
      "watch\tverb\tMovie,MovieSeries,TVSeries,SportsTeam\t0.9\n"
      "watching\tverb\tMovie,MovieSeries,TVSeries,SportsTeam\t0.9\n"
      "watched\tverb\tMovie,MovieSeries,TVSeries,SportsTeam\t0.9\n"
      "seen\tverb\tMovie,MovieSeries\t0.9\n"
      "see\tverb\tMovie,MovieSeries\t0.6\n"
      "saw\tverb\tMovie,MovieSeries\t0.8\n"
      "read\tverb\tBook,BookSeries\t0.9\n"
      "reading\tverb\tBook,BookSeries\t0.9\n"
      "reread\tverb\tBook,BookSeries\t0.8\n"
      "play\tverb\tVideoGame,VideoGameSeries,SportsTeam\t0.8\n"
      "playing\tverb\tVideoGame,VideoGameSeries,SportsTeam\t0.8\n"
      "played\tverb\tVideoGame,VideoGameSeries,SportsTeam\t0.8\n"
      "listen\tverb\tMusicRecording,MusicAlbum,MusicGroup\t0.9\n"
      "listening\tverb\tMusicRecording,MusicAlbum,MusicGroup\t0.9\n"
      "heard\tverb\tMusicRecording,MusicAlbum,MusicGroup\t0.6\n"
      "sing\tverb\tMusicRecording,MusicGroup,Person\t0.7\n"
      "sang\tverb\tMusicRecording,MusicGroup,Person\t0.7\n"
      "visit\tverb\tCity,Country,Place,TouristAttraction\t0.9\n"
      "visiting\tverb\tCity,Country,Place,TouristAttraction\t0.9\n"
      "visited\tverb\tCity,Country,Place,TouristAttraction\t0.9\n"
      "travel\tverb\tCity,Country,Place\t0.8\n"
      "traveling\tverb\tCity,Country,Place\t0.8\n"
      "live\tverb\tCity,State,Country\t0.8\n"
      "living\tverb\tCity,State,Country\t0.8\n"
      "lived\tverb\tCity,State,Country\t0.8\n"
      "moved\tverb\tCity,State,Country\t0.7\n"
      "eat\tverb\tRestaurant\t0.7\n"
      "eating\tverb\tRestaurant\t0.7\n"
      "ate\tverb\tRestaurant\t0.7\n"
      "met\tverb\tPerson\t0.6\n"
      "meet\tverb\tPerson\t0.6\n"
      "wrote\tverb\tBook,BookSeries,Person\t0.8\n"
      "written\tverb\tBook,BookSeries,Person\t0.8\n"
      "directed\tverb\tMovie,Person\t0.8\n"
      "starred\tverb\tMovie,TVSeries,Person\t0.8\n"
      "movie\tkeyword\tMovie,MovieSeries\t0.9\n"
      "movies\tkeyword\tMovie,MovieSeries\t0.9\n"
      "film\tkeyword\tMovie,MovieSeries\t0.9\n"
      "films\tkeyword\tMovie,MovieSeries\t0.9\n"
      "flick\tkeyword\tMovie\t0.8\n"
      "flicks\tkeyword\tMovie\t0.8\n"
      "cinema\tkeyword\tMovie\t0.7\n"
      "sequel\tkeyword\tMovie,MovieSeries\t0.7\n"
      "trilogy\tkeyword\tMovieSeries,BookSeries\t0.7\n"
      "show\tkeyword\tTVSeries\t0.6\n"
      "series\tkeyword\tTVSeries,MovieSeries,BookSeries,VideoGameSeries\t0.6\n"
      "season\tkeyword\tTVSeries\t0.6\n"
      "book\tkeyword\tBook,BookSeries\t0.9\n"
      "books\tkeyword\tBook,BookSeries\t0.9\n"
      "novel\tkeyword\tBook\t0.9\n"
      "novels\tkeyword\tBook\t0.9\n"
      "author\tkeyword\tPerson,Book\t0.8\n"
      "comics\tkeyword\tBook\t0.6\n"
      "song\tkeyword\tMusicRecording\t0.9\n"
      "songs\tkeyword\tMusicRecording\t0.9\n"
      "album\tkeyword\tMusicAlbum\t0.9\n"
      "albums\tkeyword\tMusicAlbum\t0.9\n"
      "track\tkeyword\tMusicRecording\t0.7\n"
      "band\tkeyword\tMusicGroup\t0.9\n"
      "music\tkeyword\tMusicRecording,MusicAlbum,MusicGroup\t0.7\n"
      "game\tkeyword\tVideoGame,VideoGameSeries\t0.8\n"
      "games\tkeyword\tVideoGame,VideoGameSeries\t0.8\n"
      "team\tkeyword\tSportsTeam\t0.9\n"
      "teams\tkeyword\tSportsTeam\t0.9\n"
      "city\tkeyword\tCity\t0.9\n"
      "town\tkeyword\tCity\t0.7\n"
      "state\tkeyword\tState\t0.9\n"
      "country\tkeyword\tCountry\t0.9\n"
      "nation\tkeyword\tCountry\t0.7\n"
      "actor\tkeyword\tPerson,Movie\t0.8\n"
      "actress\tkeyword\tPerson,Movie\t0.8\n"
      "character\tkeyword\tPerson\t0.6\n"
      "scientist\tkeyword\tPerson\t0.8\n"
      "player\tkeyword\tPerson,SportsTeam\t0.7\n"
      "singer\tkeyword\tPerson,MusicGroup\t0.8\n"
      "mountain\tkeyword\tMountain,Place,TouristAttraction\t0.8\n"
      "park\tkeyword\tPark,Place,TouristAttraction\t0.8\n"
      "beach\tkeyword\tBeach,Place,TouristAttraction\t0.8\n"
      "airport\tkeyword\tAirport,Place\t0.8\n"
      "restaurant\tkeyword\tRestaurant\t0.9\n"
      "cafe\tkeyword\tRestaurant\t0.8\n"
      "school\tkeyword\tEducationalOrganization,Organization\t0.8\n"
      "university\tkeyword\tEducationalOrganization,Organization\t0.9\n"
      "college\tkeyword\tEducationalOrganization,Organization\t0.8\n"
      "company\tkeyword\tCorporation,Organization\t0.8\n"
      "arrive at\tphrase\tCity,Place\t0.8\n"
      "listen to\tphrase\tMusicRecording,MusicAlbum,MusicGroup\t0.9\n"
      "check out\tphrase\tPlace,Movie,Book\t0.5\n"
      "fan of\tphrase\tMovie,MusicGroup,SportsTeam,Person\t0.6\n";
}

}  // namespace nerlink
