#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <thread>
#include <vector>

#include <httplib.h>

#include "fixtures.hpp"
#include "nerlink/kb.hpp"
#include "nerlink/output.hpp"
#include "nerlink/service.hpp"

using namespace nerlink;

TEST_CASE("the query cache is safe under concurrent lookups and inserts") {
  auto inner = fixtures::snapshot_backend(fixtures::sith_entities());
  CachingBackend cache(inner);
  std::vector<std::string> phrases = {"revenge of the sith", "star wars", "sith",
                                      "episode iii",         "zxqv",      "wars movie"};
  std::atomic<int> mismatches{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 200; ++i) {
        const std::string& phrase = phrases[(t + i) % phrases.size()];
        auto cached = cache.query(phrase, 6);
        auto direct = inner->query(phrase, 6);
        if (cached.size() != direct.size()) {
          ++mismatches;
          continue;
        }
        for (std::size_t k = 0; k < cached.size(); ++k) {
          if (cached[k].id != direct[k].id) ++mismatches;
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(mismatches.load() == 0);
  CHECK(cache.cache_size() == phrases.size());
}

TEST_CASE("independent conversations can run in parallel on one linker") {
  auto backend = std::make_shared<CachingBackend>(
      fixtures::snapshot_backend(fixtures::sith_entities()));
  Linker linker = fixtures::make_linker(backend);

  std::vector<std::string> script = {
      "i think my favorite star wars movie is revenge of the sith",
      "have you seen the new star wars movie",
      "hello there",
  };

  // Sequential reference transcript.
  std::vector<std::string> expected;
  {
    DiscourseState state;
    for (const auto& u : script) {
      expected.push_back(output_record(normalize(u), linker.link_turn(state, u)).dump());
    }
  }

  std::atomic<int> mismatches{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      for (int round = 0; round < 20; ++round) {
        DiscourseState state;
        for (std::size_t i = 0; i < script.size(); ++i) {
          std::string got =
              output_record(normalize(script[i]), linker.link_turn(state, script[i])).dump();
          if (got != expected[i]) ++mismatches;
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(mismatches.load() == 0);
}

TEST_CASE("the service handles concurrent conversations") {
  auto linker = std::make_shared<const Linker>(fixtures::sith_linker());
  LinkService service(linker);
  httplib::Server server;
  service.attach(server);
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  std::atomic<int> failures{0};
  std::vector<std::thread> clients;
  for (int t = 0; t < 6; ++t) {
    clients.emplace_back([&, t] {
      httplib::Client client("127.0.0.1", port);
      for (int i = 0; i < 10; ++i) {
        nlohmann::json body = {
            {"conversation_id", "c" + std::to_string(t)},
            {"utterance", "i think my favorite star wars movie is revenge of the sith"}};
        auto res = client.Post("/link", body.dump(), "application/json");
        if (!res || res->status != 200) {
          ++failures;
          continue;
        }
        auto j = nlohmann::json::parse(res->body, nullptr, false);
        if (j.is_discarded() || j["mentions"].size() != 2) ++failures;
      }
    });
  }
  for (auto& th : clients) th.join();
  server.stop();
  server_thread.join();
  CHECK(failures.load() == 0);
  CHECK(service.session_count() == 6);
}
