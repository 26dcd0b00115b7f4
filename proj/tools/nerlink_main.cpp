// nerlink — open-domain entity recognition and linking for noisy
// conversational text. Subcommands: kb-build, kb-query, link, eval, serve.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nerlink/nerlink.hpp"

namespace {

struct CommonFlags {
  std::string config_file;
  std::string kb;
  std::string stopwords;
  std::string lexicon;
  std::string tags;
  std::string synonyms;
  std::optional<double> threshold;
  std::optional<int> pool_size;
  std::optional<double> stop_penalty;
  std::optional<double> min_rule_weight;
  std::optional<int> window;
  std::optional<std::string> threshold_stage;
  std::optional<std::string> horizon;
  bool no_context = false;
  bool coarse = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_file, "key=value config file");
  cmd->add_option("--kb", f.kb, "entity snapshot path, or 'remote' for the live API");
  cmd->add_option("--stopwords", f.stopwords, "stop-word list (one token per line)");
  cmd->add_option("--lexicon", f.lexicon, "expectation lexicon TSV");
  cmd->add_option("--tags", f.tags, "tag lexicon TSV for the shallow chunker");
  cmd->add_option("--synonyms", f.synonyms, "synonym table TSV merged into the lexicon");
  cmd->add_option("--threshold", f.threshold, "minimum accepted score (default 150)");
  cmd->add_option("--pool-size", f.pool_size, "candidates pooled per query (default 6)");
  cmd->add_option("--stop-penalty", f.stop_penalty, "stop-word multiplier (default 0.75)");
  cmd->add_option("--min-rule-weight", f.min_rule_weight,
                  "minimum lexicon rule weight (default 0.5)");
  cmd->add_option("--window", f.window, "pronoun resolution window in turns (default 3)");
  cmd->add_option("--threshold-stage", f.threshold_stage, "pre-context or post-context");
  cmd->add_option("--expectation-horizon", f.horizon, "utterance or conversation");
  cmd->add_flag("--no-context", f.no_context, "disable the expectation lexicon");
  cmd->add_flag("--coarse", f.coarse, "evaluate over PERSON/LOCATION/ORGANIZATION/MISC");
}

nerlink::PipelineConfig build_config(const CommonFlags& f) {
  nerlink::PipelineConfig cfg;
  if (!f.config_file.empty()) nerlink::load_config_file(cfg, f.config_file);
  if (!f.kb.empty()) nerlink::apply_config_entry(cfg, "backend", f.kb);
  if (f.threshold) cfg.threshold = *f.threshold;
  if (f.pool_size) cfg.pool_size = *f.pool_size;
  if (f.stop_penalty) cfg.stop_penalty = *f.stop_penalty;
  if (f.min_rule_weight) cfg.min_rule_weight = *f.min_rule_weight;
  if (f.window) cfg.window = *f.window;
  if (f.threshold_stage) nerlink::apply_config_entry(cfg, "threshold_stage", *f.threshold_stage);
  if (f.horizon) nerlink::apply_config_entry(cfg, "expectation_horizon", *f.horizon);
  if (f.coarse) cfg.coarse = true;
  cfg.validate();
  return cfg;
}

nerlink::StopList build_stops(const CommonFlags& f) {
  return f.stopwords.empty() ? nerlink::default_stoplist() : nerlink::load_stoplist(f.stopwords);
}

std::shared_ptr<nerlink::KgBackend> build_backend(const nerlink::PipelineConfig& cfg,
                                                  const nerlink::StopList& stops) {
  std::shared_ptr<nerlink::KgBackend> inner;
  if (cfg.backend.kind == nerlink::BackendChoice::Kind::Remote) {
    inner = std::make_shared<nerlink::RemoteBackend>(nerlink::RemoteConfig::from_env());
  } else {
    if (cfg.backend.snapshot_path.empty()) {
      throw nerlink::ConfigError("no knowledge backend configured; pass --kb <path|remote>");
    }
    inner = std::make_shared<nerlink::SnapshotBackend>(
        nerlink::build_snapshot(cfg.backend.snapshot_path), stops);
  }
  return std::make_shared<nerlink::CachingBackend>(std::move(inner));
}

nerlink::Linker build_linker(const nerlink::PipelineConfig& cfg, const CommonFlags& f,
                             std::shared_ptr<nerlink::KgBackend> backend,
                             nerlink::StopList stops) {
  std::vector<nerlink::ExpectationRule> rules;
  if (!f.no_context) {
    rules = f.lexicon.empty() ? nerlink::default_rules() : nerlink::load_lexicon(f.lexicon);
    if (!f.synonyms.empty()) rules = nerlink::merge_synonym_table(std::move(rules), f.synonyms);
  }
  nerlink::TagLexicon tags =
      f.tags.empty() ? nerlink::default_tag_lexicon() : nerlink::load_tag_lexicon(f.tags);
  return nerlink::Linker(cfg, std::move(backend), std::move(stops), std::move(rules),
                         std::move(tags));
}

// ---------------------------------------------------------------------------

int cmd_kb_build(const std::string& input, const std::string& output) {
  nerlink::SnapshotIndex index = nerlink::build_snapshot(input);
  if (index.size() == 0) {
    std::cerr << "error: empty snapshot: " << input << "\n";
    return 1;
  }
  std::ofstream out(output);
  if (!out) {
    std::cerr << "error: cannot write " << output << "\n";
    return 1;
  }
  nerlink::save_snapshot(index, out);
  std::cout << index.size() << " entities indexed\n";
  return 0;
}

int cmd_kb_query(const CommonFlags& flags, const std::string& phrase, int limit) {
  nerlink::PipelineConfig cfg = build_config(flags);
  auto backend = build_backend(cfg, build_stops(flags));
  nerlink::StopList no_stops;
  auto phrase_tokens = nerlink::tokenize(nerlink::normalize(phrase), no_stops);
  for (const auto& e : backend->query(phrase, limit)) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["name"] = e.name;
    j["types"] = e.types;
    j["score"] = e.base_score;
    j["local_score"] = nerlink::local_score(e, phrase_tokens);
    std::cout << j.dump() << "\n";
  }
  return 0;
}

struct ScriptRecord {
  std::string utterance;
  std::optional<std::string> conversation_id;
  std::optional<std::string> parse;
  std::string speaker = "user";
};

ScriptRecord parse_script_line(const std::string& line, int line_no) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("utterance") ||
      !j["utterance"].is_string()) {
    throw nerlink::ParseError("script record needs an \"utterance\" field", line_no);
  }
  ScriptRecord rec;
  rec.utterance = j["utterance"].get<std::string>();
  if (j.contains("conversation_id") && j["conversation_id"].is_string()) {
    rec.conversation_id = j["conversation_id"].get<std::string>();
  }
  if (j.contains("parse") && j["parse"].is_string()) rec.parse = j["parse"].get<std::string>();
  if (j.contains("speaker") && j["speaker"].is_string()) {
    rec.speaker = j["speaker"].get<std::string>();
  }
  return rec;
}

int link_stream(const nerlink::Linker& linker, std::istream& in, std::ostream& out) {
  std::map<std::string, nerlink::DiscourseState> states;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ScriptRecord rec = parse_script_line(line, line_no);
    nerlink::DiscourseState fresh;
    nerlink::DiscourseState* state = &fresh;
    if (rec.conversation_id) {
      auto [it, inserted] = states.try_emplace(*rec.conversation_id);
      if (inserted) it->second.conversation_id = *rec.conversation_id;
      state = &it->second;
    }
    nerlink::LinkResult result = linker.link_turn(
        *state, rec.utterance, rec.parse ? &*rec.parse : nullptr, rec.speaker);
    out << nerlink::output_record(nerlink::normalize(rec.utterance), result).dump() << "\n";
    out.flush();
  }
  return 0;
}

int cmd_link(const CommonFlags& flags, const std::string& utterance,
             const std::string& script) {
  nerlink::PipelineConfig cfg = build_config(flags);
  nerlink::StopList stops = build_stops(flags);
  nerlink::Linker linker = build_linker(cfg, flags, build_backend(cfg, stops), stops);
  if (!utterance.empty()) {
    nerlink::DiscourseState state;
    nerlink::LinkResult result = linker.link_turn(state, utterance);
    std::cout << nerlink::output_record(nerlink::normalize(utterance), result).dump() << "\n";
    return 0;
  }
  if (!script.empty()) {
    std::ifstream in(script);
    if (!in) throw nerlink::ConfigError("cannot open script: " + script);
    return link_stream(linker, in, std::cout);
  }
  return link_stream(linker, std::cin, std::cout);
}

struct GridRow {
  std::string name;
  nerlink::Metrics metrics;
};

nlohmann::ordered_json metrics_json(const nerlink::Metrics& m) {
  nlohmann::ordered_json j;
  j["accuracy"] = nerlink::format_score(m.accuracy);
  j["macro_f1"] = nerlink::format_score(m.macro_f1);
  j["micro_f1"] = nerlink::format_score(m.micro_f1);
  j["weighted_f1"] = nerlink::format_score(m.weighted_f1);
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (const auto& [label, stats] : m.per_class) {
    per_class[label] = {{"precision", nerlink::format_score(stats.precision())},
                        {"recall", nerlink::format_score(stats.recall())},
                        {"f1", nerlink::format_score(stats.f1())},
                        {"support", stats.support}};
  }
  j["per_class"] = std::move(per_class);
  return j;
}

int cmd_eval(const CommonFlags& flags, const std::string& corpus_path, bool grid,
             const std::string& json_path) {
  nerlink::Corpus corpus = nerlink::load_corpus(corpus_path);
  for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << "\n";

  nerlink::PipelineConfig base_cfg = build_config(flags);
  nerlink::StopList stops = build_stops(flags);
  auto backend = build_backend(base_cfg, stops);

  std::vector<GridRow> rows;
  std::vector<std::vector<nerlink::Mention>> last_predictions;
  std::ostringstream report;

  auto run_one = [&](const std::string& name, double threshold, nerlink::ScoringMode mode,
                     bool context) {
    nerlink::PipelineConfig cfg = base_cfg;
    cfg.threshold = threshold;
    cfg.scoring = mode;
    CommonFlags f = flags;
    f.no_context = f.no_context || !context;
    nerlink::Linker linker = build_linker(cfg, f, backend, stops);
    last_predictions = nerlink::run_corpus(linker, corpus);
    rows.push_back(GridRow{
        name, nerlink::evaluate(last_predictions, corpus, nerlink::MatchLevel::Full,
                                cfg.coarse)});
  };

  if (grid) {
    for (double t : {0.0, 150.0}) {
      std::string suffix = " @ threshold " + nerlink::format_score(t);
      run_one("segmentation" + suffix, t, nerlink::ScoringMode::SegmentationOnly, false);
      run_one("scoring" + suffix, t, nerlink::ScoringMode::Overlap, false);
      run_one("scoring+lexicon" + suffix, t, nerlink::ScoringMode::OverlapContext, true);
    }
  } else {
    run_one("configured run", base_cfg.threshold, base_cfg.scoring, !flags.no_context);
  }

  report << nerlink::render_metrics_header() << "\n";
  for (const auto& row : rows) report << nerlink::render_metrics_row(row.name, row.metrics) << "\n";
  report << "\n";
  auto hist = nerlink::type_distribution(last_predictions);
  report << nerlink::render_histogram(hist);

  if (!grid) {
    report << "\nper-class (precision / recall / F1 / support)\n";
    for (const auto& [label, stats] : rows.back().metrics.per_class) {
      report << "  " << std::left << std::setw(28) << label << std::right
             << nerlink::format_score(stats.precision()) << "  "
             << nerlink::format_score(stats.recall()) << "  "
             << nerlink::format_score(stats.f1()) << "  " << std::setw(4) << stats.support
             << "\n";
    }
  }
  std::cout << report.str();

  if (!json_path.empty()) {
    nlohmann::ordered_json j;
    j["corpus"] = corpus_path;
    j["configurations"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json rj = metrics_json(row.metrics);
      rj["name"] = row.name;
      j["configurations"].push_back(std::move(rj));
    }
    j["histogram"] = nlohmann::ordered_json::array();
    for (const auto& [type, count] : hist) {
      j["histogram"].push_back({{"type", type}, {"count", count}});
    }
    if (json_path == "-") {
      std::cout << j.dump(2) << "\n";
    } else {
      std::ofstream out(json_path);
      out << j.dump(2) << "\n";
    }
  }
  return 0;
}

int cmd_serve(const CommonFlags& flags, int port, int idle_ttl_s) {
  nerlink::PipelineConfig cfg = build_config(flags);
  nerlink::StopList stops = build_stops(flags);
  auto linker = std::make_shared<const nerlink::Linker>(
      build_linker(cfg, flags, build_backend(cfg, stops), stops));
  nerlink::LinkService service(linker, std::chrono::seconds(idle_ttl_s));
  httplib::Server server;
  service.attach(server);
  std::cout << "listening on 0.0.0.0:" << port << " (POST /link, GET /health)" << std::endl;
  if (!server.listen("0.0.0.0", port)) {
    std::cerr << "error: cannot bind port " << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"open-domain entity recognition and linking for conversational text"};
  app.require_subcommand(1);

  // kb-build
  auto* kb_build = app.add_subcommand("kb-build", "validate an entity file and write an index");
  std::string kb_input, kb_output;
  kb_build->add_option("input", kb_input, "line-delimited entity records")->required();
  kb_build->add_option("-o,--output", kb_output, "index output path")->required();

  // kb-query
  auto* kb_query = app.add_subcommand("kb-query", "query the configured backend");
  CommonFlags query_flags;
  std::string query_phrase;
  int query_limit = 6;
  kb_query->add_option("phrase", query_phrase, "query phrase")->required();
  kb_query->add_option("--limit", query_limit, "result limit (default 6)");
  add_common_flags(kb_query, query_flags);

  // link
  auto* link = app.add_subcommand("link", "link one utterance, a script file, or stdin");
  CommonFlags link_flags;
  std::string link_utterance, link_script;
  link->add_option("utterance", link_utterance, "single utterance to link");
  link->add_option("--script", link_script, "JSONL script file (one record per line)");
  add_common_flags(link, link_flags);

  // eval
  auto* eval = app.add_subcommand("eval", "run the linker over a corpus and score it");
  CommonFlags eval_flags;
  std::string corpus_path, json_path;
  bool grid = false;
  eval->add_option("corpus", corpus_path, "annotated corpus (JSONL)")->required();
  eval->add_flag("--grid", grid, "run the threshold {0,150} x configuration grid");
  eval->add_option("--json", json_path, "write machine-readable report ('-' for stdout)");
  add_common_flags(eval, eval_flags);

  // serve
  auto* serve = app.add_subcommand("serve", "run the JSON linking service");
  CommonFlags serve_flags;
  int port = 8080, idle_ttl = 600;
  serve->add_option("--port", port, "listen port (default 8080)");
  serve->add_option("--idle-ttl", idle_ttl, "seconds before idle conversations evict");
  add_common_flags(serve, serve_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (kb_build->parsed()) return cmd_kb_build(kb_input, kb_output);
    if (kb_query->parsed()) return cmd_kb_query(query_flags, query_phrase, query_limit);
    if (link->parsed()) return cmd_link(link_flags, link_utterance, link_script);
    if (eval->parsed()) return cmd_eval(eval_flags, corpus_path, grid, json_path);
    if (serve->parsed()) return cmd_serve(serve_flags, port, idle_ttl);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
