#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nerlink/pipeline.hpp"

namespace nerlink {

/// Wire/file record for one linked utterance. discourse_id is the entity id
/// under which the mention was registered in the conversation state.
inline nlohmann::ordered_json output_record(const std::string& normalized_utterance,
                                            const LinkResult& result) {
  nlohmann::ordered_json j;
  j["utterance"] = normalized_utterance;
  j["mentions"] = nlohmann::ordered_json::array();
  for (const auto& m : result.mentions) {
    nlohmann::ordered_json mj;
    mj["start"] = m.span.start;
    mj["end"] = m.span.end;
    mj["surface"] = m.span.text;
    mj["canonical"] = m.entity.name;
    mj["types"] = m.entity.types;
    mj["score"] = m.final_score;
    if (m.link.article_url) mj["url"] = *m.link.article_url;
    mj["discourse_id"] = m.entity.id;
    j["mentions"].push_back(std::move(mj));
  }
  j["pronoun_links"] = nlohmann::ordered_json::array();
  for (const auto& p : result.pronoun_links) {
    nlohmann::ordered_json pj;
    pj["position"] = p.position;
    pj["discourse_id"] = p.entity_id;
    pj["antecedent_turn"] = p.antecedent_turn;
    j["pronoun_links"].push_back(std::move(pj));
  }
  return j;
}

}  // namespace nerlink
