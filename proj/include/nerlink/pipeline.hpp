#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nerlink/context.hpp"
#include "nerlink/discourse.hpp"
#include "nerlink/errors.hpp"
#include "nerlink/kb.hpp"
#include "nerlink/rank.hpp"
#include "nerlink/segment.hpp"
#include "nerlink/text.hpp"

namespace nerlink {

enum class ExpectationHorizon { Utterance, Conversation };
enum class ScoringMode { SegmentationOnly, Overlap, OverlapContext };

struct BackendChoice {
  enum class Kind { Snapshot, Remote } kind = Kind::Snapshot;
  std::string snapshot_path;
};

/// Single configuration surface for the whole linker.
struct PipelineConfig {
  double threshold = 150.0;
  int pool_size = 6;
  double stop_penalty = 0.75;
  double min_rule_weight = 0.5;
  ExpectationHorizon horizon = ExpectationHorizon::Utterance;
  ThresholdStage threshold_stage = ThresholdStage::PostContext;
  int window = 3;
  BackendChoice backend;
  bool coarse = false;
  ScoringMode scoring = ScoringMode::OverlapContext;
  int max_ngram = 8;
  int span_budget = 32;

  void validate() const {
    if (threshold < 0) throw ConfigError("threshold must be >= 0");
    if (pool_size < 1) throw ConfigError("pool_size must be >= 1");
    if (!(stop_penalty > 0.0 && stop_penalty <= 1.0)) {
      throw ConfigError("stop_penalty must be in (0,1]");
    }
    if (window < 1) throw ConfigError("window must be >= 1");
  }
};

/// Applies one `key=value` setting; shared by the config file and CLI flags
/// so precedence is just application order.
inline void apply_config_entry(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  std::string v(value);
  auto bad = [&](const char* what) {
    throw ConfigError(std::string("config ") + what + " for key '" + std::string(key) +
                      "': " + v);
  };
  try {
    if (key == "threshold") cfg.threshold = std::stod(v);
    else if (key == "pool_size") cfg.pool_size = std::stoi(v);
    else if (key == "stop_penalty") cfg.stop_penalty = std::stod(v);
    else if (key == "min_rule_weight") cfg.min_rule_weight = std::stod(v);
    else if (key == "window") cfg.window = std::stoi(v);
    else if (key == "coarse") cfg.coarse = (v == "true" || v == "1" || v == "yes");
    else if (key == "expectation_horizon") {
      if (v == "utterance") cfg.horizon = ExpectationHorizon::Utterance;
      else if (v == "conversation") cfg.horizon = ExpectationHorizon::Conversation;
      else bad("unknown value");
    } else if (key == "threshold_stage") {
      if (v == "pre-context") cfg.threshold_stage = ThresholdStage::PreContext;
      else if (v == "post-context") cfg.threshold_stage = ThresholdStage::PostContext;
      else bad("unknown value");
    } else if (key == "backend") {
      if (v == "remote") {
        cfg.backend.kind = BackendChoice::Kind::Remote;
        cfg.backend.snapshot_path.clear();
      } else {
        cfg.backend.kind = BackendChoice::Kind::Snapshot;
        cfg.backend.snapshot_path = v;
      }
    } else {
      throw ConfigError("unknown config key: " + std::string(key));
    }
  } catch (const std::invalid_argument&) {
    bad("bad value");
  } catch (const std::out_of_range&) {
    bad("bad value");
  }
}

/// Line-based `key=value` config file; '#' comments and blank lines ignored.
inline void load_config_file(PipelineConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError("config line is not key=value in " + path, line_no);
    }
    apply_config_entry(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

/// Everything one utterance produced: surviving mentions (already web-linked)
/// and the pronoun links resolved against earlier turns.
struct LinkResult {
  int turn_index = 0;
  std::vector<Mention> mentions;
  std::vector<PronounLink> pronoun_links;
};

/// The composed engine. Immutable after construction; one instance may serve
/// any number of conversations concurrently as long as each DiscourseState
/// has a single writer.
class Linker {
public:
  Linker(PipelineConfig cfg, std::shared_ptr<KgBackend> backend, StopList stops,
         std::vector<ExpectationRule> rules, TagLexicon tags,
         PronounPolicy pronouns = default_pronoun_policy())
      : cfg_(std::move(cfg)),
        backend_(std::move(backend)),
        stops_(std::move(stops)),
        rules_(std::move(rules)),
        tags_(std::move(tags)),
        pronouns_(std::move(pronouns)) {
    cfg_.validate();
    // Only the full scoring mode consults the lexicon.
    if (cfg_.scoring != ScoringMode::OverlapContext) rules_.clear();
  }

  const PipelineConfig& config() const { return cfg_; }
  const StopList& stops() const { return stops_; }
  const std::vector<ExpectationRule>& rules() const { return rules_; }

  /// Runs the full pipeline on one turn: normalize, tokenize, expectations,
  /// candidate spans, per-span pooling and ranking, prune, merge, web links,
  /// pronoun resolution, then syncs the turn into the state. Backend errors
  /// propagate with the state untouched. An empty utterance advances the
  /// state with an empty turn.
  LinkResult link_turn(DiscourseState& state, std::string_view raw,
                       const std::string* parse_text = nullptr,
                       std::string_view speaker = "user") const {
    LinkResult result;
    result.turn_index = state.next_index();

    std::string norm = normalize(raw);
    std::vector<Token> tokens = tokenize(norm, stops_);
    if (tokens.empty()) {
      sync(state, Turn{result.turn_index, std::string(speaker), norm, {}});
      return result;
    }

    ActiveExpectations active = gather_expectations(tokens, state);

    std::optional<ParseNode> parse;
    if (parse_text != nullptr && !parse_text->empty()) {
      parse = parse_sexpr(*parse_text);
    }
    SegmenterOptions seg_opts{cfg_.max_ngram, cfg_.span_budget};
    std::vector<CandidateSpan> spans =
        generate_candidates(tokens, parse ? &*parse : nullptr, tags_, pronouns_,
                            active.expected_types, seg_opts);

    // One backend query per unique span text within the utterance.
    std::unordered_map<std::string, std::vector<KgEntity>> pools;
    for (const auto& span : spans) {
      if (!pools.count(span.text)) {
        pools.emplace(span.text, backend_->query(span.text, cfg_.pool_size));
      }
    }

    std::vector<ScoredCandidate> candidates;
    for (const auto& span : spans) {
      const std::vector<KgEntity>& pool = pools[span.text];
      if (pool.empty()) continue;
      if (cfg_.scoring == ScoringMode::SegmentationOnly) {
        // Rank purely on the pool's popularity ordering; the span stands as-is.
        ScoredCandidate cand;
        cand.span = span;
        cand.entity = pool.front();
        cand.overlap = cand.entity.base_score;
        cand.final_score = cand.entity.base_score;
        candidates.push_back(std::move(cand));
      } else if (auto ranked =
                     rank_span(span, pool, tokens, active, stops_, cfg_.stop_penalty)) {
        // The strong-overlap rewrite can shrink a span onto a bare pronoun;
        // such regions face the same exception policy as generated spans.
        if (ranked->span.width() == 1 &&
            !single_pronoun_allowed(pronouns_,
                                    tokens[static_cast<std::size_t>(ranked->span.start)].surface,
                                    active.expected_types)) {
          continue;
        }
        candidates.push_back(std::move(*ranked));
      }
    }

    candidates = prune(std::move(candidates), cfg_.threshold, cfg_.threshold_stage);
    result.mentions = merge(std::move(candidates));
    for (auto& mention : result.mentions) mention.link = web_link(mention.entity);

    result.pronoun_links = resolve_pronouns(state, tokens, cfg_.window);

    sync(state, Turn{result.turn_index, std::string(speaker), norm, result.mentions});
    return result;
  }

private:
  ActiveExpectations gather_expectations(const std::vector<Token>& tokens,
                                         const DiscourseState& state) const {
    ActiveExpectations active =
        extract_expectations(tokens, rules_, cfg_.min_rule_weight);
    if (cfg_.horizon == ExpectationHorizon::Conversation) {
      for (const auto& turn : state.turns) {
        std::vector<Token> prior = tokenize(turn.utterance, stops_);
        ActiveExpectations extra =
            extract_expectations(prior, rules_, cfg_.min_rule_weight);
        for (auto& [rule, pos] : extra.triggered) {
          bool present = false;
          for (const auto& [have, p] : active.triggered) {
            (void)p;
            if (have.trigger == rule.trigger && have.kind == rule.kind) present = true;
          }
          if (!present) {
            active.expected_types.insert(rule.target_types.begin(), rule.target_types.end());
            active.triggered.emplace_back(rule, pos);
          }
        }
      }
    }
    return active;
  }

  PipelineConfig cfg_;
  std::shared_ptr<KgBackend> backend_;
  StopList stops_;
  std::vector<ExpectationRule> rules_;
  TagLexicon tags_;
  PronounPolicy pronouns_;
};

}  // namespace nerlink
