#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "nerlink/errors.hpp"
#include "nerlink/output.hpp"
#include "nerlink/pipeline.hpp"

namespace nerlink {

/// JSON linking endpoint over a shared Linker. Discourse state lives in
/// memory per conversation_id; requests for the same conversation are
/// serialized, different conversations run concurrently. Idle sessions are
/// evicted lazily.
class LinkService {
public:
  LinkService(std::shared_ptr<const Linker> linker,
              std::chrono::seconds idle_ttl = std::chrono::seconds(600))
      : linker_(std::move(linker)), idle_ttl_(idle_ttl) {}

  /// POST /link -> one output record; GET /health -> "ok".
  void attach(httplib::Server& server) {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });
    server.Post("/link", [this](const httplib::Request& req, httplib::Response& res) {
      handle_link(req, res);
    });
  }

  std::size_t session_count() {
    std::lock_guard<std::mutex> lock(sessions_mutex_);
    return sessions_.size();
  }

private:
  struct Session {
    DiscourseState state;
    std::chrono::steady_clock::time_point last_used;
    std::mutex mutex;
  };

  void handle_link(const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("conversation_id") ||
        !body["conversation_id"].is_string() || !body.contains("utterance") ||
        !body["utterance"].is_string()) {
      res.status = 400;
      res.set_content(R"({"error":"body must be {\"conversation_id\":...,\"utterance\":...}"})",
                      "application/json");
      return;
    }
    std::string conversation = body["conversation_id"].get<std::string>();
    std::string utterance = body["utterance"].get<std::string>();
    std::string speaker = "user";
    if (body.contains("speaker") && body["speaker"].is_string()) {
      speaker = body["speaker"].get<std::string>();
    }

    std::shared_ptr<Session> session = acquire(conversation);
    try {
      std::lock_guard<std::mutex> turn_lock(session->mutex);
      LinkResult result = linker_->link_turn(session->state, utterance, nullptr, speaker);
      res.set_content(output_record(normalize(utterance), result).dump(), "application/json");
    } catch (const BackendError& e) {
      res.status = 502;
      res.set_content(std::string(R"({"error":")") + e.what() + "\"}", "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(std::string(R"({"error":")") + e.what() + "\"}", "application/json");
    }
  }

  // last_used is only touched under sessions_mutex_, so eviction scans and
  // request handling never race on it.
  std::shared_ptr<Session> acquire(const std::string& conversation) {
    std::lock_guard<std::mutex> lock(sessions_mutex_);
    auto now = std::chrono::steady_clock::now();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (it->first != conversation && now - it->second->last_used > idle_ttl_) {
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
    auto [it, inserted] = sessions_.try_emplace(conversation);
    if (inserted) {
      it->second = std::make_shared<Session>();
      it->second->state.conversation_id = conversation;
    }
    it->second->last_used = now;
    return it->second;
  }

  std::shared_ptr<const Linker> linker_;
  std::chrono::seconds idle_ttl_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace nerlink
