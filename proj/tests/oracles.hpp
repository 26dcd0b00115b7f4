// Independent reference implementations used to cross-check the engine.
// Everything here is deliberately brute force and shares no code with the
// library paths it verifies.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nerlink/rank.hpp"
#include "nerlink/text.hpp"

namespace oracles {

struct BruteAlignment {
  int matches = 0;
  int gap = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> vector;
};

// Enumerates every order-preserving matching between name and window tokens,
// keeps the ones with maximal matches then minimal internal gap (ties:
// lexicographically smallest pair sequence), and prices the vector by the
// stated per-element rules.
inline void enumerate_matchings(const std::vector<nerlink::Token>& name,
                                const std::vector<nerlink::Token>& window, std::size_t ni,
                                std::size_t wi, std::vector<std::pair<int, int>>& current,
                                std::vector<std::vector<std::pair<int, int>>>& all) {
  all.push_back(current);
  for (std::size_t i = ni; i < name.size(); ++i) {
    for (std::size_t j = wi; j < window.size(); ++j) {
      if (name[i].surface != window[j].surface) continue;
      current.emplace_back(static_cast<int>(i), static_cast<int>(j));
      enumerate_matchings(name, window, i + 1, j + 1, current, all);
      current.pop_back();
    }
  }
}

inline BruteAlignment brute_align(const std::vector<nerlink::Token>& name,
                                  const std::vector<nerlink::Token>& window,
                                  double stop_penalty = 0.75) {
  std::vector<std::vector<std::pair<int, int>>> all;
  std::vector<std::pair<int, int>> current;
  enumerate_matchings(name, window, 0, 0, current, all);

  const std::vector<std::pair<int, int>>* best = nullptr;
  int best_matches = -1, best_gap = 0;
  for (const auto& m : all) {
    int matches = static_cast<int>(m.size());
    int gap = 0;
    for (std::size_t k = 1; k < m.size(); ++k) {
      gap += (m[k].first - m[k - 1].first - 1) + (m[k].second - m[k - 1].second - 1);
    }
    bool take = false;
    if (matches > best_matches) take = true;
    else if (matches == best_matches && gap < best_gap) take = true;
    else if (matches == best_matches && gap == best_gap && best != nullptr && m < *best) take = true;
    if (take) {
      best = &m;
      best_matches = matches;
      best_gap = gap;
    }
  }

  BruteAlignment out;
  out.vector.assign(name.size(), 0.0);
  if (best == nullptr || best->empty()) return out;
  out.matches = best_matches;
  out.gap = best_gap;
  out.pairs = *best;
  for (std::size_t k = 0; k < best->size(); ++k) {
    auto [ci, wj] = (*best)[k];
    double v = 1.0;
    if (k > 0) {
      auto [pi, pj] = (*best)[k - 1];
      v *= 1.0 / double(ci - pi);
      v *= 1.0 / double(wj - pj);
    }
    if (name[static_cast<std::size_t>(ci)].is_stop) v *= stop_penalty;
    out.vector[static_cast<std::size_t>(ci)] = v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Confusion-matrix metrics oracle over (gold label, predicted label) pairs.
// "" as predicted label means NONE (missed gold); "" as gold label marks a
// spurious prediction.
// ---------------------------------------------------------------------------

struct BruteMetrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  double weighted_f1 = 0.0;
};

inline BruteMetrics brute_metrics(const std::vector<std::pair<std::string, std::string>>& pairs,
                                  int fully_matched, int gold_total) {
  std::set<std::string> classes;
  for (const auto& [g, p] : pairs) {
    if (!g.empty()) classes.insert(g);
    if (!p.empty()) classes.insert(p);
  }
  std::map<std::string, int> tp, fp, fn, support;
  for (const auto& c : classes) {
    for (const auto& [g, p] : pairs) {
      if (g == c) support[c] += 1;
      if (g == c && p == c) tp[c] += 1;
      if (g != c && p == c) fp[c] += 1;
      if (g == c && p != c) fn[c] += 1;
    }
  }
  BruteMetrics out;
  out.accuracy = gold_total == 0 ? 0.0 : double(fully_matched) / double(gold_total);
  double macro = 0.0, weighted = 0.0;
  int support_sum = 0;
  long TP = 0, FP = 0, FN = 0;
  for (const auto& c : classes) {
    double prec = tp[c] + fp[c] == 0 ? 0.0 : double(tp[c]) / double(tp[c] + fp[c]);
    double rec = tp[c] + fn[c] == 0 ? 0.0 : double(tp[c]) / double(tp[c] + fn[c]);
    double f1 = prec + rec == 0.0 ? 0.0 : 2 * prec * rec / (prec + rec);
    macro += f1;
    weighted += f1 * support[c];
    support_sum += support[c];
    TP += tp[c];
    FP += fp[c];
    FN += fn[c];
  }
  out.macro_f1 = classes.empty() ? 0.0 : macro / double(classes.size());
  out.weighted_f1 = support_sum == 0 ? 0.0 : weighted / double(support_sum);
  double mp = TP + FP == 0 ? 0.0 : double(TP) / double(TP + FP);
  double mr = TP + FN == 0 ? 0.0 : double(TP) / double(TP + FN);
  out.micro_f1 = mp + mr == 0.0 ? 0.0 : 2 * mp * mr / (mp + mr);
  return out;
}

}  // namespace oracles
