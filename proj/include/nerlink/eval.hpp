#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nerlink/errors.hpp"
#include "nerlink/pipeline.hpp"
#include "nerlink/rank.hpp"
#include "nerlink/text.hpp"

namespace nerlink {

/// One gold annotation: the surface as it occurs in the utterance, the typed
/// classification (most specific first), and the full canonical entity name.
struct AnnotationTuple {
  std::string surface;
  std::vector<std::string> types;
  std::string canonical;

  const std::string& most_specific() const { return types.front(); }
};

struct CorpusRecord {
  std::string utterance;
  std::vector<AnnotationTuple> annotations;
  std::optional<std::string> parse;
  std::optional<std::string> conversation_id;
  std::optional<int> turn;
};

struct Corpus {
  std::vector<CorpusRecord> records;
  std::vector<std::string> warnings;

  std::size_t gold_count() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.annotations.size();
    return n;
  }
};

/// Loads a line-delimited corpus. Utterances must already be in normalized
/// form; annotation surfaces that do not occur in their utterance are kept
/// but reported as warnings.
inline Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open corpus: " + path);
  Corpus corpus;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON", line_no);
    CorpusRecord rec;
    try {
      rec.utterance = j.at("utterance").get<std::string>();
      if (j.contains("annotations")) {
        for (const auto& a : j["annotations"]) {
          AnnotationTuple t;
          t.surface = a.at("surface").get<std::string>();
          for (const auto& ty : a.at("types")) t.types.push_back(ty.get<std::string>());
          t.canonical = a.at("canonical").get<std::string>();
          if (t.surface.empty()) throw ParseError("empty annotation surface", line_no);
          if (t.types.empty()) throw ParseError("annotation without types", line_no);
          rec.annotations.push_back(std::move(t));
        }
      }
      if (j.contains("parse") && j["parse"].is_string()) {
        rec.parse = j["parse"].get<std::string>();
      }
      if (j.contains("conversation_id") && j["conversation_id"].is_string()) {
        rec.conversation_id = j["conversation_id"].get<std::string>();
      }
      if (j.contains("turn") && j["turn"].is_number_integer()) {
        rec.turn = j["turn"].get<int>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad corpus record: ") + e.what(), line_no);
    }
    if (normalize(rec.utterance) != rec.utterance) {
      throw ParseError("utterance is not in normalized form", line_no);
    }
    for (const auto& t : rec.annotations) {
      if ((" " + rec.utterance + " ").find(" " + t.surface + " ") == std::string::npos) {
        corpus.warnings.push_back("line " + std::to_string(line_no) + ": surface '" +
                                  t.surface + "' not found in utterance");
      }
    }
    corpus.records.push_back(std::move(rec));
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Prediction matching and metrics.
// ---------------------------------------------------------------------------

enum class MatchVerdict { None, TypeOnly, NameOnly, Full };

namespace detail {

inline std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace detail

/// full: canonical names equal (case-insensitive) and the gold's most specific
/// type appears among the prediction's types. name-only / type-only cover the
/// partial cases.
inline MatchVerdict match_prediction(const Mention& pred, const AnnotationTuple& gold) {
  bool name = detail::lower_ascii(pred.entity.name) == detail::lower_ascii(gold.canonical);
  bool type = entity_has_type(pred.entity, gold.most_specific());
  if (name && type) return MatchVerdict::Full;
  if (name) return MatchVerdict::NameOnly;
  if (type) return MatchVerdict::TypeOnly;
  return MatchVerdict::None;
}

/// Which verdicts count as "matched" when aligning predictions to gold.
enum class MatchLevel { Full, Name, Type };

struct ClassStats {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int support = 0;

  double precision() const { return tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp); }
  double recall() const { return tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn); }
  double f1() const {
    double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
};

struct Metrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  double weighted_f1 = 0.0;
  std::map<std::string, ClassStats> per_class;
};

/// Hierarchy-free table mapping onto the four coarse labels older NER systems
/// emit. First matching type wins, scanning most specific first; everything
/// unmapped is MISC.
inline std::string coarse_map(const std::vector<std::string>& types) {
  static const std::map<std::string, std::string> table = {
      {"Person", "PERSON"},
      {"Place", "LOCATION"},
      {"City", "LOCATION"},
      {"State", "LOCATION"},
      {"Country", "LOCATION"},
      {"TouristAttraction", "LOCATION"},
      {"Mountain", "LOCATION"},
      {"Organization", "ORGANIZATION"},
      {"Corporation", "ORGANIZATION"},
      {"SportsTeam", "ORGANIZATION"},
      {"EducationalOrganization", "ORGANIZATION"},
  };
  for (const auto& t : types) {
    auto it = table.find(t);
    if (it != table.end()) return it->second;
  }
  return "MISC";
}

namespace detail {

inline bool qualifies(MatchVerdict v, MatchLevel level) {
  switch (level) {
    case MatchLevel::Full: return v == MatchVerdict::Full;
    case MatchLevel::Name: return v == MatchVerdict::Full || v == MatchVerdict::NameOnly;
    case MatchLevel::Type: return v == MatchVerdict::Full || v == MatchVerdict::TypeOnly;
  }
  return false;
}

inline std::string predicted_label(const Mention& m, bool coarse) {
  std::string label = primary_type(m.entity);
  return coarse ? coarse_map(m.entity.types) : label;
}

inline std::string gold_label(const AnnotationTuple& t, bool coarse) {
  return coarse ? coarse_map(t.types) : t.most_specific();
}

}  // namespace detail

/// Classification framing: every gold tuple is an instance labeled by its
/// most-specific type. Gold tuples are aligned one-to-one with the record's
/// mentions at the requested match level (highest-scoring qualifying mention
/// first); unmatched gold counts as predicted NONE and unconsumed mentions
/// count as false positives of their predicted class. Accuracy is the
/// fraction of gold tuples with a full-verdict match.
inline Metrics evaluate(const std::vector<std::vector<Mention>>& predictions,
                        const Corpus& corpus, MatchLevel level = MatchLevel::Full,
                        bool coarse = false) {
  if (predictions.size() != corpus.records.size()) {
    throw InputError("predictions are not aligned to corpus records");
  }
  Metrics metrics;
  int gold_total = 0;
  int fully_matched = 0;

  for (std::size_t r = 0; r < corpus.records.size(); ++r) {
    const CorpusRecord& rec = corpus.records[r];
    const std::vector<Mention>& mentions = predictions[r];
    std::vector<bool> consumed(mentions.size(), false);

    for (const auto& gold : rec.annotations) {
      ++gold_total;
      std::string gold_class = detail::gold_label(gold, coarse);
      metrics.per_class[gold_class].support += 1;

      int best = -1;
      bool best_full = false;
      for (std::size_t m = 0; m < mentions.size(); ++m) {
        if (consumed[m]) continue;
        MatchVerdict v = match_prediction(mentions[m], gold);
        if (!detail::qualifies(v, level)) continue;
        if (best < 0 || mentions[m].final_score > mentions[static_cast<std::size_t>(best)].final_score) {
          best = static_cast<int>(m);
          best_full = v == MatchVerdict::Full;
        }
      }
      if (best < 0) {
        metrics.per_class[gold_class].fn += 1;  // predicted NONE
        continue;
      }
      consumed[static_cast<std::size_t>(best)] = true;
      if (best_full) ++fully_matched;
      std::string pred_class =
          detail::predicted_label(mentions[static_cast<std::size_t>(best)], coarse);
      if (pred_class == gold_class) {
        metrics.per_class[gold_class].tp += 1;
      } else {
        metrics.per_class[gold_class].fn += 1;
        metrics.per_class[pred_class].fp += 1;
      }
    }

    for (std::size_t m = 0; m < mentions.size(); ++m) {
      if (!consumed[m]) {
        metrics.per_class[detail::predicted_label(mentions[m], coarse)].fp += 1;
      }
    }
  }

  metrics.accuracy = gold_total == 0 ? 0.0 : double(fully_matched) / double(gold_total);

  double macro_sum = 0.0, weighted_sum = 0.0;
  int classes = 0, support_total = 0;
  long tp_all = 0, fp_all = 0, fn_all = 0;
  for (const auto& [label, stats] : metrics.per_class) {
    (void)label;
    macro_sum += stats.f1();
    weighted_sum += stats.f1() * stats.support;
    classes += 1;
    support_total += stats.support;
    tp_all += stats.tp;
    fp_all += stats.fp;
    fn_all += stats.fn;
  }
  metrics.macro_f1 = classes == 0 ? 0.0 : macro_sum / classes;
  metrics.weighted_f1 = support_total == 0 ? 0.0 : weighted_sum / support_total;
  double micro_p = tp_all + fp_all == 0 ? 0.0 : double(tp_all) / double(tp_all + fp_all);
  double micro_r = tp_all + fn_all == 0 ? 0.0 : double(tp_all) / double(tp_all + fn_all);
  metrics.micro_f1 =
      micro_p + micro_r == 0.0 ? 0.0 : 2.0 * micro_p * micro_r / (micro_p + micro_r);
  return metrics;
}

/// Counts by most-specific predicted type, descending (ties alphabetical).
inline std::vector<std::pair<std::string, int>> type_distribution(
    const std::vector<std::vector<Mention>>& predictions) {
  std::map<std::string, int> counts;
  for (const auto& mentions : predictions) {
    for (const auto& m : mentions) counts[primary_type(m.entity)] += 1;
  }
  std::vector<std::pair<std::string, int>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Corpus runner and reports.
// ---------------------------------------------------------------------------

/// Links every record, keeping discourse state per conversation_id (records
/// without one are independent). Returns per-record mention lists.
inline std::vector<std::vector<Mention>> run_corpus(const Linker& linker, const Corpus& corpus) {
  std::vector<std::vector<Mention>> predictions;
  predictions.reserve(corpus.records.size());
  std::map<std::string, DiscourseState> states;
  for (const auto& rec : corpus.records) {
    DiscourseState fresh;
    DiscourseState* state = &fresh;
    if (rec.conversation_id) {
      auto [it, inserted] = states.try_emplace(*rec.conversation_id);
      if (inserted) it->second.conversation_id = *rec.conversation_id;
      state = &it->second;
    }
    LinkResult result =
        linker.link_turn(*state, rec.utterance, rec.parse ? &*rec.parse : nullptr);
    predictions.push_back(std::move(result.mentions));
  }
  return predictions;
}

inline std::string format_score(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << v;
  return out.str();
}

inline std::string render_metrics_row(const std::string& label, const Metrics& m) {
  std::ostringstream out;
  out << std::left << std::setw(38) << label << std::right << std::setw(9)
      << format_score(m.accuracy) << std::setw(10) << format_score(m.macro_f1) << std::setw(10)
      << format_score(m.micro_f1) << std::setw(13) << format_score(m.weighted_f1);
  return out.str();
}

inline std::string render_metrics_header() {
  std::ostringstream out;
  out << std::left << std::setw(38) << "configuration" << std::right << std::setw(9)
      << "accuracy" << std::setw(10) << "macro-F1" << std::setw(10) << "micro-F1"
      << std::setw(13) << "weighted-F1";
  return out.str();
}

inline std::string render_histogram(const std::vector<std::pair<std::string, int>>& hist,
                                    int top_k = 15) {
  std::ostringstream out;
  out << "top " << top_k << " predicted entity types\n";
  int shown = 0, other = 0;
  for (const auto& [type, count] : hist) {
    if (shown < top_k) {
      out << "  " << std::left << std::setw(28) << type << std::right << std::setw(6) << count
          << "\n";
      ++shown;
    } else {
      other += count;
    }
  }
  if (other > 0) {
    out << "  " << std::left << std::setw(28) << "(other)" << std::right << std::setw(6) << other
        << "\n";
  }
  return out.str();
}

}  // namespace nerlink
