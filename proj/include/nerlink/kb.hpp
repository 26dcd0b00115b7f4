#pragma once

#include <algorithm>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "nerlink/errors.hpp"
#include "nerlink/text.hpp"

namespace nerlink {

/// One knowledge-graph record: canonical name, Schema.org types (ordered,
/// most specific first, always ending in "Thing"), an unbounded popularity
/// score, and description/article metadata.
struct KgEntity {
  std::string id;
  std::string name;
  std::vector<std::string> types;
  double base_score = 0.0;
  std::string short_desc;
  std::string detailed_desc;
  std::optional<std::string> source_url;
};

/// First listed type other than "Thing", or "Thing" if there is none.
inline std::string primary_type(const KgEntity& e) {
  for (const auto& t : e.types) {
    if (t != "Thing") return t;
  }
  return "Thing";
}

inline void ensure_thing_type(KgEntity& e) {
  for (const auto& t : e.types) {
    if (t == "Thing") return;
  }
  e.types.push_back("Thing");
}

inline bool entity_has_type(const KgEntity& e, std::string_view type) {
  return std::find(e.types.begin(), e.types.end(), type) != e.types.end();
}

/// Popularity damped by how much of the entity's name the phrase covers.
/// Acts as the relevance gate for snapshot queries (zero means "not a
/// candidate"); the stored base_score is what downstream scoring consumes.
inline double local_score(const KgEntity& entity, const std::vector<Token>& phrase_tokens) {
  std::vector<std::string> name_tokens;
  {
    std::istringstream parts(normalize(entity.name));
    std::string tok;
    while (parts >> tok) name_tokens.push_back(tok);
  }
  if (name_tokens.empty()) return 0.0;
  std::unordered_set<std::string_view> phrase;
  for (const auto& t : phrase_tokens) phrase.insert(t.surface);
  int matched = 0;
  for (const auto& nt : name_tokens) {
    if (phrase.count(nt)) ++matched;
  }
  return entity.base_score * (static_cast<double>(matched) /
                              static_cast<double>(name_tokens.size()));
}

/// Read-only inverted index over normalized entity-name tokens.
class SnapshotIndex {
public:
  SnapshotIndex() = default;

  explicit SnapshotIndex(std::vector<KgEntity> entities) {
    entities_ = std::move(entities);
    name_tokens_.resize(entities_.size());
    for (std::size_t i = 0; i < entities_.size(); ++i) {
      KgEntity& e = entities_[i];
      ensure_thing_type(e);
      if (!by_id_.emplace(e.id, i).second) {
        throw IntegrityError("duplicate entity id: " + e.id);
      }
      std::string norm = normalize(e.name);
      std::istringstream parts(norm);
      std::string tok;
      std::unordered_set<std::string> uniq;
      while (parts >> tok) {
        name_tokens_[i].push_back(tok);
        if (uniq.insert(tok).second) {
          token_index_[tok].push_back(static_cast<int>(i));
        }
      }
    }
  }

  std::size_t size() const { return entities_.size(); }
  const std::vector<KgEntity>& entities() const { return entities_; }
  const std::vector<std::string>& name_tokens(std::size_t i) const { return name_tokens_[i]; }

  const KgEntity* find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &entities_[it->second];
  }

  /// Entity indices whose name shares at least one token with the phrase.
  std::vector<int> candidates(const std::vector<Token>& phrase_tokens) const {
    std::vector<int> hits;
    std::unordered_set<int> seen;
    for (const auto& t : phrase_tokens) {
      auto it = token_index_.find(t.surface);
      if (it == token_index_.end()) continue;
      for (int idx : it->second) {
        if (seen.insert(idx).second) hits.push_back(idx);
      }
    }
    return hits;
  }

private:
  std::vector<KgEntity> entities_;
  std::vector<std::vector<std::string>> name_tokens_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<int>> token_index_;
};

namespace detail {

inline KgEntity entity_from_json(const nlohmann::json& j, int line_no) {
  if (!j.is_object()) throw ParseError("entity record is not an object", line_no);
  KgEntity e;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
    throw ParseError("entity record missing \"id\"", line_no);
  }
  if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty()) {
    throw ParseError("entity record missing \"name\"", line_no);
  }
  e.id = j["id"].get<std::string>();
  e.name = j["name"].get<std::string>();
  if (j.contains("types")) {
    if (!j["types"].is_array()) throw ParseError("\"types\" must be an array", line_no);
    for (const auto& t : j["types"]) {
      if (!t.is_string()) throw ParseError("\"types\" entries must be strings", line_no);
      e.types.push_back(t.get<std::string>());
    }
  }
  if (j.contains("score")) {
    if (!j["score"].is_number()) throw ParseError("\"score\" must be a number", line_no);
    e.base_score = j["score"].get<double>();
    if (e.base_score < 0) throw ParseError("\"score\" must be non-negative", line_no);
  }
  if (j.contains("description") && j["description"].is_string()) {
    e.short_desc = j["description"].get<std::string>();
  }
  if (j.contains("detailed_description") && j["detailed_description"].is_string()) {
    e.detailed_desc = j["detailed_description"].get<std::string>();
  }
  if (j.contains("url") && j["url"].is_string()) {
    e.source_url = j["url"].get<std::string>();
  }
  ensure_thing_type(e);
  return e;
}

}  // namespace detail

/// Loads a line-delimited entity file into an index. Malformed lines and
/// duplicate ids are rejected with the offending line number.
inline SnapshotIndex build_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open entity file: " + path);
  std::vector<KgEntity> entities;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON", line_no);
    entities.push_back(detail::entity_from_json(j, line_no));
  }
  return SnapshotIndex(std::move(entities));
}

/// Writes the index back out as canonical line-delimited records.
inline void save_snapshot(const SnapshotIndex& index, std::ostream& out) {
  for (const auto& e : index.entities()) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["name"] = e.name;
    j["types"] = e.types;
    j["score"] = e.base_score;
    if (!e.short_desc.empty()) j["description"] = e.short_desc;
    if (!e.detailed_desc.empty()) j["detailed_description"] = e.detailed_desc;
    if (e.source_url) j["url"] = *e.source_url;
    out << j.dump() << "\n";
  }
}

// ---------------------------------------------------------------------------
// Query backends.
// ---------------------------------------------------------------------------

/// Phrase -> ranked entity candidates. Implementations must be safe for
/// concurrent queries and deterministic for fixed underlying data.
class KgBackend {
public:
  virtual ~KgBackend() = default;
  virtual std::vector<KgEntity> query(std::string_view phrase, int limit) const = 0;
};

/// Offline stand-in for the live knowledge-graph API. Filters by name-token
/// overlap and returns the most popular matches: base_score descending, ids
/// ascending on ties, truncated to `limit`.
///
/// Overlap on stop words alone does not qualify (querying "the lakers" must
/// not pool every "The ..." title); an entity whose name consists entirely of
/// stop words is still reachable by matching its full name ("It").
class SnapshotBackend : public KgBackend {
public:
  explicit SnapshotBackend(SnapshotIndex index, StopList stops = default_stoplist())
      : index_(std::move(index)), stops_(std::move(stops)) {}

  const SnapshotIndex& index() const { return index_; }

  std::vector<KgEntity> query(std::string_view phrase, int limit) const override {
    std::vector<KgEntity> out;
    if (limit < 1) return out;
    StopList no_stops;  // stop flags are irrelevant for query tokens
    std::vector<Token> phrase_tokens = tokenize(normalize(phrase), no_stops);
    if (phrase_tokens.empty()) return out;
    std::unordered_set<std::string_view> phrase_set;
    for (const auto& t : phrase_tokens) phrase_set.insert(t.surface);

    std::vector<int> hits;
    for (int idx : index_.candidates(phrase_tokens)) {
      const auto& name_tokens = index_.name_tokens(static_cast<std::size_t>(idx));
      std::size_t matched = 0;
      bool content_match = false;
      for (const auto& nt : name_tokens) {
        if (!phrase_set.count(nt)) continue;
        ++matched;
        if (!stops_.contains(nt)) content_match = true;
      }
      if (content_match || matched == name_tokens.size()) hits.push_back(idx);
    }
    std::sort(hits.begin(), hits.end(), [&](int a, int b) {
      const KgEntity& ea = index_.entities()[static_cast<std::size_t>(a)];
      const KgEntity& eb = index_.entities()[static_cast<std::size_t>(b)];
      if (ea.base_score != eb.base_score) return ea.base_score > eb.base_score;
      return ea.id < eb.id;
    });
    for (int idx : hits) {
      if (static_cast<int>(out.size()) >= limit) break;
      out.push_back(index_.entities()[static_cast<std::size_t>(idx)]);
    }
    return out;
  }

private:
  SnapshotIndex index_;
  StopList stops_;
};

/// Memoizes (phrase, limit) -> results for the lifetime of the process run.
class CachingBackend : public KgBackend {
public:
  explicit CachingBackend(std::shared_ptr<KgBackend> inner) : inner_(std::move(inner)) {}

  std::vector<KgEntity> query(std::string_view phrase, int limit) const override {
    std::string key = std::string(phrase) + '\x1f' + std::to_string(limit);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    std::vector<KgEntity> result = inner_->query(phrase, limit);
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(std::move(key), std::move(result)).first->second;
  }

  std::size_t cache_size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.size();
  }

private:
  std::shared_ptr<KgBackend> inner_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, std::vector<KgEntity>> cache_;
};

}  // namespace nerlink
