#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenicgen/dataset.hpp"

namespace scenicgen {

inline constexpr std::size_t kIndicatorCount = 8;

// Fixed indicator order; also the CSV column order.
inline constexpr std::array<std::string_view, kIndicatorCount> kIndicatorNames = {
    "loc",         "custom_behaviors", "sub_behaviors",  "actions",
    "pids",        "static_agents",    "dynamic_agents", "requirements"};

struct IndicatorVector {
  int loc = 0;
  int custom_behaviors = 0;
  int sub_behaviors = 0;
  int actions = 0;
  int pids = 0;
  int static_agents = 0;
  int dynamic_agents = 0;
  int requirements = 0;

  std::array<int, kIndicatorCount> to_array() const {
    return {loc,  custom_behaviors, sub_behaviors,  actions,
            pids, static_agents,    dynamic_agents, requirements};
  }
  static IndicatorVector from_array(const std::array<int, kIndicatorCount>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
  }

  friend bool operator==(const IndicatorVector&, const IndicatorVector&) = default;
};

struct IndicatorSummary {
  double min = 0;
  double mean = 0;
  double max = 0;
  double q25 = 0;
  double median = 0;
  double q75 = 0;
};

struct IndicatorStats {
  std::array<IndicatorSummary, kIndicatorCount> per_indicator;
};

struct WeightProfile {
  std::array<double, kIndicatorCount> weights{};

  bool valid(double tolerance = 1e-9) const;
};

// LoC 0.35, custom behaviors 0.15, sub-behaviors 0.05, actions 0.05,
// PIDs 0.15, static agents 0.075, dynamic agents 0.125, requirements 0.05.
WeightProfile default_weight_profile();

// Lexical pass over Scenic source; the source does not need to compile.
// loc counts lines that are neither blank nor comment-only; agents are the
// `new`-introduced objects, dynamic iff their statement block (including
// comma-continued lines) carries a `with behavior` clause.
IndicatorVector extract_indicators(std::string_view scenic_source);

IndicatorStats compute_population_stats(std::span<const IndicatorVector> vectors);

// Piecewise-linear score in [0, 100]. Bounds are q75 + 0.5*IQR (score 100)
// and max(0, q25 - 0.5*IQR) (score 0); when use_min_max_bounds is set the
// indicator's min/max replace them (used when q25 == q75).
double normalize_indicator(double value, const IndicatorSummary& stats, bool use_min_max_bounds);

// Weighted average of normalized indicator scores. min/max bounds kick in
// automatically for indicators whose q25 equals q75.
double difficulty_score(const IndicatorVector& iv, const IndicatorStats& stats,
                        const WeightProfile& weights);

struct ScoredRecord {
  std::string id;
  double score = 0;
};

// Ascending by (score, id); lowest third Easy, middle Medium, top Hard.
// A remainder goes to the lower categories first. Requires >= 3 records.
std::map<std::string, Category> classify(std::vector<ScoredRecord> scored);

std::string indicator_csv_header();
std::string indicator_csv_row(std::string_view id, const IndicatorVector& iv, double score,
                              Category category);

}  // namespace scenicgen
