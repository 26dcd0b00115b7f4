#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "nerlink/errors.hpp"
#include "nerlink/kb.hpp"

namespace nerlink {

/// Wiring for the public knowledge-graph search endpoint. The API key is only
/// ever read from the environment, never from flags or files.
struct RemoteConfig {
  std::string base_url = "https://kgsearch.googleapis.com";
  std::string path = "/v1/entities:search";
  std::string api_key;
  int timeout_ms = 2000;
  int max_retries = 1;

  static RemoteConfig from_env(std::string base_url = "https://kgsearch.googleapis.com") {
    RemoteConfig cfg;
    cfg.base_url = std::move(base_url);
    const char* key = std::getenv("KG_API_KEY");
    if (key == nullptr || *key == '\0') {
      throw ConfigError("remote backend requires KG_API_KEY in the environment");
    }
    cfg.api_key = key;
    return cfg;
  }
};

/// Maps one search response onto KgEntity records:
/// resultScore -> base_score, result.name -> name, result["@type"] -> types,
/// result.description -> short_desc, detailedDescription.articleBody/url ->
/// detailed_desc/source_url. Unknown fields are ignored.
inline std::vector<KgEntity> parse_kg_response(std::string_view body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("itemListElement") ||
      !j["itemListElement"].is_array()) {
    throw ProtocolError("knowledge-graph response is not a result list");
  }
  std::vector<KgEntity> out;
  for (const auto& item : j["itemListElement"]) {
    if (!item.is_object() || !item.contains("result") || !item["result"].is_object()) {
      throw ProtocolError("knowledge-graph result item is malformed");
    }
    const auto& r = item["result"];
    if (!r.contains("name") || !r["name"].is_string()) {
      throw ProtocolError("knowledge-graph result is missing a name");
    }
    KgEntity e;
    e.name = r["name"].get<std::string>();
    if (r.contains("@id") && r["@id"].is_string()) e.id = r["@id"].get<std::string>();
    if (e.id.empty()) e.id = "kg:" + e.name;
    if (r.contains("@type") && r["@type"].is_array()) {
      for (const auto& t : r["@type"]) {
        if (t.is_string()) e.types.push_back(t.get<std::string>());
      }
    }
    if (item.contains("resultScore") && item["resultScore"].is_number()) {
      e.base_score = std::max(0.0, item["resultScore"].get<double>());
    }
    if (r.contains("description") && r["description"].is_string()) {
      e.short_desc = r["description"].get<std::string>();
    }
    if (r.contains("detailedDescription") && r["detailedDescription"].is_object()) {
      const auto& d = r["detailedDescription"];
      if (d.contains("articleBody") && d["articleBody"].is_string()) {
        e.detailed_desc = d["articleBody"].get<std::string>();
      }
      if (d.contains("url") && d["url"].is_string()) {
        e.source_url = d["url"].get<std::string>();
      }
    }
    ensure_thing_type(e);
    out.push_back(std::move(e));
  }
  return out;
}

/// HTTP client for the live knowledge graph. One retry on transport failure,
/// short timeouts; the deployment target is a real-time conversational loop.
class RemoteBackend : public KgBackend {
public:
  explicit RemoteBackend(RemoteConfig cfg) : cfg_(std::move(cfg)) {}

  std::vector<KgEntity> query(std::string_view phrase, int limit) const override {
    httplib::Params params{{"query", std::string(phrase)},
                           {"limit", std::to_string(limit)},
                           {"key", cfg_.api_key}};
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      httplib::Client client(cfg_.base_url);
      client.set_connection_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
      client.set_read_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
      client.set_follow_location(true);
      httplib::Result res = client.Get(cfg_.path, params, httplib::Headers{});
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "server returned status " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw BackendError("knowledge-graph request rejected with status " +
                               std::to_string(res->status),
                           /*retryable=*/false);
      }
      std::vector<KgEntity> entities = parse_kg_response(res->body);
      // Defend the ordering contract even if the service reorders ties.
      std::stable_sort(entities.begin(), entities.end(),
                       [](const KgEntity& a, const KgEntity& b) {
                         return a.base_score > b.base_score;
                       });
      std::vector<KgEntity> out;
      std::unordered_set<std::string> seen;
      for (auto& e : entities) {
        if (static_cast<int>(out.size()) >= limit) break;
        if (seen.insert(e.id).second) out.push_back(std::move(e));
      }
      return out;
    }
    throw BackendError("knowledge-graph request failed: " + last_error, /*retryable=*/true);
  }

private:
  RemoteConfig cfg_;
};

}  // namespace nerlink
