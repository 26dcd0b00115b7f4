// Shared in-memory fixtures and helpers for the test suites.
#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "nerlink/kb.hpp"
#include "nerlink/pipeline.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) {
  return std::string(NERLINK_TEST_DATA_DIR) + "/" + name;
}

inline std::string repo_data_path(const std::string& name) {
  return std::string(NERLINK_DATA_DIR) + "/" + name;
}

inline nerlink::KgEntity entity(std::string id, std::string name,
                                std::vector<std::string> types, double score,
                                std::string url = "") {
  nerlink::KgEntity e;
  e.id = std::move(id);
  e.name = std::move(name);
  e.types = std::move(types);
  e.base_score = score;
  if (!url.empty()) e.source_url = url;
  nerlink::ensure_thing_type(e);
  return e;
}

inline const std::string kSithName = "Star Wars: Episode III - Revenge of the Sith";

/// The five same-titled entities plus the Star Wars series entity.
inline std::vector<nerlink::KgEntity> sith_entities() {
  return {
      entity("sith-movie", kSithName, {"Movie", "Thing"}, 795.59,
             "https://en.wikipedia.org/wiki/Star_Wars_Episode_III"),
      entity("sith-bookseries", kSithName, {"BookSeries", "Thing"}, 138.05),
      entity("sith-videogame", kSithName, {"VideoGame", "Thing"}, 240.0),
      entity("sith-book", kSithName, {"Book", "Thing"}, 98.0),
      entity("sith-album", kSithName, {"MusicAlbum", "Thing"}, 71.0),
      entity("starwars-series", "Star Wars", {"MovieSeries", "Thing"}, 500.0,
             "https://en.wikipedia.org/wiki/Star_Wars"),
  };
}

inline std::shared_ptr<nerlink::KgBackend> snapshot_backend(std::vector<nerlink::KgEntity> es) {
  return std::make_shared<nerlink::SnapshotBackend>(nerlink::SnapshotIndex(std::move(es)));
}

inline nerlink::Linker make_linker(std::shared_ptr<nerlink::KgBackend> backend,
                                   nerlink::PipelineConfig cfg = {}) {
  return nerlink::Linker(cfg, std::move(backend), nerlink::default_stoplist(),
                         nerlink::default_rules(), nerlink::default_tag_lexicon());
}

inline nerlink::Linker sith_linker(nerlink::PipelineConfig cfg = {}) {
  return make_linker(snapshot_backend(sith_entities()), cfg);
}

/// Writes content to a unique temp file and returns its path.
class TempFile {
public:
  explicit TempFile(const std::string& content, const std::string& suffix = ".txt") {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("nerlink_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
              suffix))
                .string();
    std::ofstream out(path_);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

}  // namespace fixtures
