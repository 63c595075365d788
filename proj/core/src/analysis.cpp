#include "scenicgen/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <regex>
#include <stdexcept>

#include "scenicgen/common.hpp"

namespace scenicgen {

namespace {

bool is_blank(std::string_view line) { return trim(line).empty(); }

bool is_comment_only(std::string_view line) {
  std::string_view t = trim(line);
  return !t.empty() && t.front() == '#';
}

// Text before the first '#'. Good enough for keyword counting; a '#' inside
// a string literal is rare in Scenic sources.
std::string_view strip_comment(std::string_view line) {
  std::size_t pos = line.find('#');
  return pos == std::string_view::npos ? line : line.substr(0, pos);
}

std::size_t indent_width(std::string_view line) {
  std::size_t w = 0;
  for (char c : line) {
    if (c == ' ') w += 1;
    else if (c == '\t') w += 8;
    else break;
  }
  return w;
}

bool line_continues(std::string_view code) {
  std::string_view t = trim(code);
  return !t.empty() && t.back() == ',';
}

int count_matches(const std::string& text, const std::regex& re) {
  auto begin = std::sregex_iterator(text.begin(), text.end(), re);
  return static_cast<int>(std::distance(begin, std::sregex_iterator()));
}

}  // namespace

bool WeightProfile::valid(double tolerance) const {
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0 || w > 1.0) return false;
    sum += w;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

WeightProfile default_weight_profile() {
  return {{0.35, 0.15, 0.05, 0.05, 0.15, 0.075, 0.125, 0.05}};
}

IndicatorVector extract_indicators(std::string_view scenic_source) {
  static const std::regex behavior_def(R"(^\s*behavior\s+[A-Za-z_]\w*\s*\()");
  static const std::regex do_stmt(R"(^\s*do\s)");
  static const std::regex take_stmt(R"(^\s*take\s)");
  static const std::regex require_stmt(R"(^\s*require(\s|$))");
  static const std::regex new_object(R"(\bnew\s+[A-Za-z_]\w*)");
  static const std::regex pid_token("PID");
  static const std::regex with_behavior(R"(\bwith\s+behavior\b)");

  const std::vector<std::string> lines = split_lines(scenic_source);
  IndicatorVector iv;

  bool in_behavior = false;
  std::size_t behavior_indent = 0;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& raw = lines[i];
    if (is_blank(raw)) continue;
    if (is_comment_only(raw)) continue;
    iv.loc += 1;

    const std::string code(strip_comment(raw));
    if (trim(code).empty()) continue;  // line was `  # ...` with leading spaces
    const std::size_t indent = indent_width(code);

    if (in_behavior && indent <= behavior_indent) in_behavior = false;

    if (std::regex_search(code, behavior_def)) {
      iv.custom_behaviors += 1;
      in_behavior = true;
      behavior_indent = indent;
      continue;
    }

    if (in_behavior && std::regex_search(code, do_stmt)) iv.sub_behaviors += 1;
    if (std::regex_search(code, take_stmt)) iv.actions += 1;
    if (std::regex_search(code, require_stmt)) iv.requirements += 1;
    iv.pids += count_matches(code, pid_token);

    // Agents: every `new <Name>` introduction; the statement block spans
    // comma-continued lines.
    const int news_here = count_matches(code, new_object);
    if (news_here > 0) {
      std::string block = code;
      std::size_t j = i;
      while (j + 1 < lines.size() && line_continues(strip_comment(lines[j]))) {
        ++j;
        block += '\n';
        block += std::string(strip_comment(lines[j]));
      }
      const bool dynamic = std::regex_search(block, with_behavior);
      if (dynamic) {
        iv.dynamic_agents += news_here;
      } else {
        iv.static_agents += news_here;
      }
    }
  }
  return iv;
}

IndicatorStats compute_population_stats(std::span<const IndicatorVector> vectors) {
  if (vectors.empty()) {
    throw std::invalid_argument("compute_population_stats: empty collection");
  }
  IndicatorStats stats;
  for (std::size_t k = 0; k < kIndicatorCount; ++k) {
    std::vector<double> values;
    values.reserve(vectors.size());
    for (const IndicatorVector& iv : vectors) {
      values.push_back(static_cast<double>(iv.to_array()[k]));
    }
    std::sort(values.begin(), values.end());
    IndicatorSummary& s = stats.per_indicator[k];
    s.min = values.front();
    s.max = values.back();
    s.mean = mean(values);
    s.q25 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.5);
    s.q75 = quantile_sorted(values, 0.75);
  }
  return stats;
}

double normalize_indicator(double value, const IndicatorSummary& stats, bool use_min_max_bounds) {
  double lower;
  double upper;
  if (use_min_max_bounds) {
    lower = stats.min;
    upper = stats.max;
  } else {
    const double iqr = stats.q75 - stats.q25;
    upper = stats.q75 + 0.5 * iqr;
    lower = std::max(0.0, stats.q25 - 0.5 * iqr);
  }
  if (upper <= lower) return value <= lower ? 0.0 : 100.0;
  if (value >= upper) return 100.0;
  if (value <= lower) return 0.0;
  return 100.0 * (value - lower) / (upper - lower);
}

double difficulty_score(const IndicatorVector& iv, const IndicatorStats& stats,
                        const WeightProfile& weights) {
  if (!weights.valid()) throw std::invalid_argument("difficulty_score: weights must sum to 1");
  const auto values = iv.to_array();
  double score = 0.0;
  for (std::size_t k = 0; k < kIndicatorCount; ++k) {
    const IndicatorSummary& s = stats.per_indicator[k];
    const bool min_max = s.q25 == s.q75;
    score += weights.weights[k] * normalize_indicator(static_cast<double>(values[k]), s, min_max);
  }
  return score;
}

std::map<std::string, Category> classify(std::vector<ScoredRecord> scored) {
  if (scored.size() < 3) throw std::invalid_argument("classify: need at least 3 records");
  std::sort(scored.begin(), scored.end(), [](const ScoredRecord& a, const ScoredRecord& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.id < b.id;
  });
  const std::size_t n = scored.size();
  const std::size_t base = n / 3;
  const std::size_t rem = n % 3;
  const std::size_t easy = base + (rem > 0 ? 1 : 0);
  const std::size_t medium = base + (rem > 1 ? 1 : 0);

  std::map<std::string, Category> out;
  for (std::size_t i = 0; i < n; ++i) {
    Category c = Category::hard;
    if (i < easy) c = Category::easy;
    else if (i < easy + medium) c = Category::medium;
    out[scored[i].id] = c;
  }
  return out;
}

std::string indicator_csv_header() {
  std::string header = "id";
  for (std::string_view name : kIndicatorNames) {
    header += ',';
    header += name;
  }
  header += ",score,category";
  return header;
}

std::string indicator_csv_row(std::string_view id, const IndicatorVector& iv, double score,
                              Category category) {
  std::string row(id);
  for (int v : iv.to_array()) {
    row += ',';
    row += std::to_string(v);
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", score);
  row += ',';
  row += buf;
  row += ',';
  row += to_string(category);
  return row;
}

}  // namespace scenicgen
