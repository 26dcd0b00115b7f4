#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nerlink/errors.hpp"
#include "nerlink/kb.hpp"
#include "nerlink/rank.hpp"
#include "nerlink/text.hpp"

namespace nerlink {

/// Packages the web-source link for an entity: the associated article URL and
/// the (canonical name, primary type) pair downstream knowledge bases key on.
inline WebLink web_link(const KgEntity& entity) {
  return WebLink{entity.source_url, entity.name, primary_type(entity)};
}

struct Turn {
  int index = 0;
  std::string speaker;
  std::string utterance;  // normalized
  std::vector<Mention> mentions;
};

struct DiscourseEntity {
  KgEntity entity;
  int first_turn = 0;
  int last_turn = 0;
  int mention_count = 0;
};

/// Per-conversation record of turns and linked mentions. Append-only with a
/// single-writer contract; distinct conversations are fully independent.
struct DiscourseState {
  std::string conversation_id;
  std::vector<Turn> turns;
  std::map<std::string, DiscourseEntity> registry;

  int last_index() const { return turns.empty() ? -1 : turns.back().index; }
  int next_index() const { return last_index() + 1; }
};

/// Appends a turn and updates the entity registry. Turn indices must be
/// strictly increasing.
inline void sync(DiscourseState& state, Turn turn) {
  if (turn.index <= state.last_index()) {
    throw SequencingError("turn index " + std::to_string(turn.index) +
                          " not greater than last index " + std::to_string(state.last_index()));
  }
  for (const auto& mention : turn.mentions) {
    auto it = state.registry.find(mention.entity.id);
    if (it == state.registry.end()) {
      state.registry.emplace(mention.entity.id,
                             DiscourseEntity{mention.entity, turn.index, turn.index, 1});
    } else {
      it->second.last_turn = turn.index;
      it->second.mention_count += 1;
    }
  }
  state.turns.push_back(std::move(turn));
}

/// A pronoun token linked back to a previously mentioned discourse entity.
struct PronounLink {
  int position = 0;
  std::string entity_id;
  int antecedent_turn = 0;
};

namespace detail {

enum class PronounClass { Masculine, Feminine, Neuter, Plural };

inline std::optional<PronounClass> pronoun_class(std::string_view surface) {
  if (surface == "he" || surface == "him" || surface == "his") return PronounClass::Masculine;
  if (surface == "she" || surface == "her" || surface == "hers") return PronounClass::Feminine;
  if (surface == "it") return PronounClass::Neuter;
  if (surface == "they" || surface == "them") return PronounClass::Plural;
  return std::nullopt;
}

/// he/she rules: prefer Person-typed antecedents, but fall back to anything
/// typed Thing — fictional characters are often classified as plain Thing.
inline bool compatible(PronounClass cls, const KgEntity& entity, bool person_available) {
  bool is_person = entity_has_type(entity, "Person");
  switch (cls) {
    case PronounClass::Masculine:
    case PronounClass::Feminine:
      return person_available ? is_person : entity_has_type(entity, "Thing");
    case PronounClass::Neuter:
      return !is_person;
    case PronounClass::Plural:
      return true;
  }
  return false;
}

}  // namespace detail

/// Rule-based anaphora: each pronoun scans mentions from the most recent turn
/// backward, within `window` turns, and links to the most recent mention with
/// compatible types. Never links forward; unresolved pronouns yield no link.
inline std::vector<PronounLink> resolve_pronouns(const DiscourseState& state,
                                                 const std::vector<Token>& tokens,
                                                 int window) {
  std::vector<PronounLink> links;
  if (state.turns.empty() || window <= 0) return links;
  int first_turn_pos = std::max(0, static_cast<int>(state.turns.size()) - window);

  for (const auto& token : tokens) {
    auto cls = detail::pronoun_class(token.surface);
    if (!cls) continue;

    bool person_available = false;
    if (*cls == detail::PronounClass::Masculine || *cls == detail::PronounClass::Feminine) {
      for (int t = static_cast<int>(state.turns.size()) - 1; t >= first_turn_pos; --t) {
        for (const auto& mention : state.turns[static_cast<std::size_t>(t)].mentions) {
          if (entity_has_type(mention.entity, "Person")) person_available = true;
        }
      }
    }

    bool resolved = false;
    for (int t = static_cast<int>(state.turns.size()) - 1; t >= first_turn_pos && !resolved; --t) {
      const Turn& turn = state.turns[static_cast<std::size_t>(t)];
      for (auto it = turn.mentions.rbegin(); it != turn.mentions.rend(); ++it) {
        if (detail::compatible(*cls, it->entity, person_available)) {
          links.push_back(PronounLink{token.position, it->entity.id, turn.index});
          resolved = true;
          break;
        }
      }
    }
  }
  return links;
}

// ---------------------------------------------------------------------------
// Session persistence: one line-delimited record per turn.
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json mention_to_json(const Mention& m) {
  nlohmann::ordered_json j;
  j["start"] = m.span.start;
  j["end"] = m.span.end;
  j["surface"] = m.span.text;
  j["entity_id"] = m.entity.id;
  j["canonical"] = m.entity.name;
  j["types"] = m.entity.types;
  j["score"] = m.final_score;
  if (m.link.article_url) j["url"] = *m.link.article_url;
  return j;
}

inline Mention mention_from_json(const nlohmann::json& j, int line_no) {
  Mention m;
  try {
    m.span.start = j.at("start").get<int>();
    m.span.end = j.at("end").get<int>();
    m.span.text = j.at("surface").get<std::string>();
    m.entity.id = j.at("entity_id").get<std::string>();
    m.entity.name = j.at("canonical").get<std::string>();
    for (const auto& t : j.at("types")) m.entity.types.push_back(t.get<std::string>());
    m.final_score = j.at("score").get<double>();
    if (j.contains("url")) m.link.article_url = j["url"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad mention record: ") + e.what(), line_no);
  }
  m.link.kb_name = m.entity.name;
  m.link.kb_type = primary_type(m.entity);
  return m;
}

}  // namespace detail

inline void save_state(const DiscourseState& state, std::ostream& out) {
  for (const auto& turn : state.turns) {
    nlohmann::ordered_json j;
    j["turn"] = turn.index;
    j["speaker"] = turn.speaker;
    j["utterance"] = turn.utterance;
    j["mentions"] = nlohmann::ordered_json::array();
    for (const auto& m : turn.mentions) j["mentions"].push_back(detail::mention_to_json(m));
    out << j.dump() << "\n";
  }
}

inline DiscourseState load_state(std::istream& in, std::string conversation_id) {
  DiscourseState state;
  state.conversation_id = std::move(conversation_id);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON", line_no);
    Turn turn;
    try {
      turn.index = j.at("turn").get<int>();
      turn.speaker = j.at("speaker").get<std::string>();
      turn.utterance = j.at("utterance").get<std::string>();
      for (const auto& mj : j.at("mentions")) {
        turn.mentions.push_back(detail::mention_from_json(mj, line_no));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad turn record: ") + e.what(), line_no);
    }
    sync(state, std::move(turn));
  }
  return state;
}

}  // namespace nerlink
