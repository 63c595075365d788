#include "scenicgen/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "scenicgen/common.hpp"

namespace scenicgen {

using nlohmann::json;

namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

bool is_space_char(unsigned char c) { return std::isspace(c); }

}  // namespace

TokenSequence tokenize_code(std::string_view text) {
  TokenSequence out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_space_char(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_word_char(c)) {
      while (i < n) {
        const unsigned char cur = static_cast<unsigned char>(text[i]);
        if (is_word_char(cur)) {
          ++i;
        } else if (cur == '.' && i > start && i + 1 < n &&
                   std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
                   std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
          ++i;  // decimal point inside a number
        } else {
          break;
        }
      }
    } else {
      // Maximal run of punctuation becomes one token.
      while (i < n) {
        const unsigned char cur = static_cast<unsigned char>(text[i]);
        if (is_space_char(cur) || is_word_char(cur)) break;
        if (cur == '.' && i + 1 < n && i > start &&
            std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
            std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
          break;
        }
        ++i;
      }
    }
    out.tokens.emplace_back(text.substr(start, i - start));
  }
  return out;
}

// ---------------------------------------------------------------------------
// BLEU / CrystalBLEU
// ---------------------------------------------------------------------------

std::string NGramExclusionSet::encode(std::span<const std::string> tokens, std::size_t offset,
                                      int n) {
  std::string key;
  for (int j = 0; j < n; ++j) {
    const std::string& tok = tokens[offset + static_cast<std::size_t>(j)];
    key += std::to_string(tok.size());
    key += ':';
    key += tok;
  }
  return key;
}

namespace {

using CountMap = std::unordered_map<std::string, long long>;

// N-gram counts of one sequence at order n, skipping excluded entries.
CountMap ngram_counts(const TokenSequence& seq, int n, const NGramExclusionSet* exclusion) {
  CountMap counts;
  if (n <= 0 || seq.size() < static_cast<std::size_t>(n)) return counts;
  const std::size_t last = seq.size() - static_cast<std::size_t>(n);
  for (std::size_t i = 0; i <= last; ++i) {
    std::string key = NGramExclusionSet::encode(seq.tokens, i, n);
    if (exclusion != nullptr && exclusion->contains_encoded(key)) continue;
    counts[std::move(key)] += 1;
  }
  return counts;
}

double clipped_precision(const TokenSequence& candidate, std::span<const TokenSequence> references,
                         int n, const NGramExclusionSet* exclusion) {
  const CountMap cand = ngram_counts(candidate, n, exclusion);
  long long total = 0;
  for (const auto& [key, count] : cand) total += count;
  if (total == 0) return 0.0;

  std::vector<CountMap> ref_counts;
  ref_counts.reserve(references.size());
  for (const TokenSequence& ref : references) {
    ref_counts.push_back(ngram_counts(ref, n, exclusion));
  }

  long long clipped = 0;
  for (const auto& [key, count] : cand) {
    long long best_ref = 0;
    for (const CountMap& rc : ref_counts) {
      auto it = rc.find(key);
      if (it != rc.end()) best_ref = std::max(best_ref, it->second);
    }
    clipped += std::min(count, best_ref);
  }
  return static_cast<double>(clipped) / static_cast<double>(total);
}

// Reference length closest to the candidate length (shorter wins ties).
std::size_t effective_reference_length(std::size_t candidate_len,
                                       std::span<const TokenSequence> references) {
  std::size_t best = 0;
  std::size_t best_diff = std::numeric_limits<std::size_t>::max();
  for (const TokenSequence& ref : references) {
    const std::size_t len = ref.size();
    const std::size_t diff = len > candidate_len ? len - candidate_len : candidate_len - len;
    if (diff < best_diff || (diff == best_diff && len < best)) {
      best = len;
      best_diff = diff;
    }
  }
  return best;
}

double bleu_impl(const TokenSequence& candidate, std::span<const TokenSequence> references,
                 int max_order, std::span<const double> weights,
                 const NGramExclusionSet* exclusion) {
  if (max_order < 1) throw std::invalid_argument("bleu: max_order must be >= 1");
  if (references.empty()) throw std::invalid_argument("bleu: no references");

  std::vector<double> w(weights.begin(), weights.end());
  if (w.empty()) {
    w.assign(static_cast<std::size_t>(max_order), 1.0 / static_cast<double>(max_order));
  }
  if (w.size() != static_cast<std::size_t>(max_order)) {
    throw std::invalid_argument("bleu: need one weight per n-gram order");
  }
  double weight_sum = 0.0;
  for (double x : w) {
    if (x <= 0.0) throw std::invalid_argument("bleu: weights must be positive");
    weight_sum += x;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("bleu: weights must sum to 1");
  }

  if (candidate.empty()) return 0.0;

  double log_sum = 0.0;
  for (int n = 1; n <= max_order; ++n) {
    const double p = clipped_precision(candidate, references, n, exclusion);
    if (p <= 0.0) return 0.0;
    log_sum += w[static_cast<std::size_t>(n - 1)] * std::log(p);
  }

  const std::size_t c_len = candidate.size();
  const std::size_t r_len = effective_reference_length(c_len, references);
  double bp = 1.0;
  if (c_len <= r_len) {
    bp = std::exp(1.0 - static_cast<double>(r_len) / static_cast<double>(c_len));
  }
  return bp * std::exp(log_sum);
}

}  // namespace

double modified_ngram_precision(const TokenSequence& candidate,
                                std::span<const TokenSequence> references, int n) {
  if (n < 1) throw std::invalid_argument("modified_ngram_precision: n must be >= 1");
  return clipped_precision(candidate, references, n, nullptr);
}

double bleu(const TokenSequence& candidate, std::span<const TokenSequence> references,
            int max_order, std::span<const double> weights) {
  return bleu_impl(candidate, references, max_order, weights, nullptr);
}

NGramExclusionSet build_trivial_ngrams(std::span<const TokenSequence> corpus, int k, int n_max) {
  if (corpus.empty()) throw std::invalid_argument("build_trivial_ngrams: empty corpus");
  if (k < 0) throw std::invalid_argument("build_trivial_ngrams: k must be >= 0");
  if (n_max < 1) throw std::invalid_argument("build_trivial_ngrams: n_max must be >= 1");

  struct Entry {
    int n;
    std::vector<std::string> tokens;
    long long count;
  };

  std::unordered_map<std::string, Entry> pooled;
  std::string fingerprint_feed;
  for (const TokenSequence& seq : corpus) {
    for (const std::string& tok : seq.tokens) {
      fingerprint_feed += std::to_string(tok.size());
      fingerprint_feed += ':';
      fingerprint_feed += tok;
    }
    fingerprint_feed += '\n';
    for (int n = 1; n <= n_max; ++n) {
      if (seq.size() < static_cast<std::size_t>(n)) continue;
      for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= seq.size(); ++i) {
        std::string key = NGramExclusionSet::encode(seq.tokens, i, n);
        auto [it, inserted] = pooled.try_emplace(std::move(key));
        if (inserted) {
          it->second.n = n;
          it->second.tokens.assign(seq.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                   seq.tokens.begin() + static_cast<std::ptrdiff_t>(i) + n);
          it->second.count = 0;
        }
        it->second.count += 1;
      }
    }
  }

  std::vector<std::pair<std::string, const Entry*>> ranked;
  ranked.reserve(pooled.size());
  for (const auto& [key, entry] : pooled) ranked.emplace_back(key, &entry);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second->count != b.second->count) return a.second->count > b.second->count;
    if (a.second->n != b.second->n) return a.second->n < b.second->n;
    return a.second->tokens < b.second->tokens;
  });

  NGramExclusionSet set;
  set.k_ = k;
  set.n_max_ = n_max;
  set.corpus_fingerprint_ = fnv1a64(fingerprint_feed);
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), ranked.size());
  for (std::size_t i = 0; i < take; ++i) set.excluded_.insert(ranked[i].first);
  return set;
}

double crystal_bleu(const TokenSequence& candidate, std::span<const TokenSequence> references,
                    const NGramExclusionSet& exclusion) {
  return bleu_impl(candidate, references, exclusion.max_order(), {}, &exclusion);
}

// ---------------------------------------------------------------------------
// ChrF / edit distance
// ---------------------------------------------------------------------------

double chrf(std::string_view candidate, std::string_view reference) {
  constexpr int kMaxOrder = 6;
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  int counted_orders = 0;

  for (int n = 1; n <= kMaxOrder; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    const std::size_t cand_total = candidate.size() >= un ? candidate.size() - un + 1 : 0;
    const std::size_t ref_total = reference.size() >= un ? reference.size() - un + 1 : 0;
    if (cand_total == 0 && ref_total == 0) continue;
    counted_orders += 1;

    std::unordered_map<std::string, long long> ref_counts;
    for (std::size_t i = 0; i < ref_total; ++i) {
      ref_counts[std::string(reference.substr(i, un))] += 1;
    }
    long long matches = 0;
    std::unordered_map<std::string, long long> cand_counts;
    for (std::size_t i = 0; i < cand_total; ++i) {
      cand_counts[std::string(candidate.substr(i, un))] += 1;
    }
    for (const auto& [gram, count] : cand_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matches += std::min(count, it->second);
    }

    if (cand_total > 0) {
      precision_sum += static_cast<double>(matches) / static_cast<double>(cand_total);
    }
    if (ref_total > 0) {
      recall_sum += static_cast<double>(matches) / static_cast<double>(ref_total);
    }
  }

  if (counted_orders == 0) return 0.0;
  const double chr_p = precision_sum / counted_orders;
  const double chr_r = recall_sum / counted_orders;
  if (chr_p + chr_r == 0.0) return 0.0;
  return 2.0 * chr_p * chr_r / (chr_p + chr_r);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);  // b is the shorter string
  const std::size_t m = b.size();
  std::vector<std::size_t> prev(m + 1);
  std::vector<std::size_t> cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub_cost = a[i - 1] == b[j - 1] ? 0 : 1;
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + sub_cost});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double edit_sim(std::string_view candidate, std::string_view reference) {
  const std::size_t max_len = std::max(candidate.size(), reference.size());
  if (max_len == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(candidate, reference)) /
                   static_cast<double>(max_len);
}

double edit_comp(double mean_edit_sim, double compilation_rate) {
  if (mean_edit_sim < 0.0 || mean_edit_sim > 1.0) {
    throw std::invalid_argument("edit_comp: mean_edit_sim outside [0,1]");
  }
  if (compilation_rate < 0.0 || compilation_rate > 100.0) {
    throw std::invalid_argument("edit_comp: compilation_rate outside [0,100]");
  }
  const double e = 100.0 * mean_edit_sim;
  const double c = compilation_rate;
  if (e + c == 0.0) return 0.0;
  return 2.0 * e * c / (e + c);
}

// ---------------------------------------------------------------------------
// Dataset-level report
// ---------------------------------------------------------------------------

MetricReport dataset_report(std::span<const FilePairInput> pairs,
                            const NGramExclusionSet& exclusion,
                            std::optional<double> cost_usd) {
  if (pairs.empty()) throw std::invalid_argument("dataset_report: no pairs");

  MetricReport report;
  report.cost_usd = cost_usd;
  std::size_t compiled = 0;
  std::size_t generated = 0;
  for (const FilePairInput& pair : pairs) {
    FileMetrics fm;
    fm.id = pair.id;
    const TokenSequence cand = tokenize_code(pair.candidate);
    const TokenSequence ref = tokenize_code(pair.reference);
    const std::vector<TokenSequence> refs = {ref};
    fm.bleu = bleu(cand, refs);
    fm.crystal_bleu = crystal_bleu(cand, refs, exclusion);
    fm.chrf = chrf(pair.candidate, pair.reference);
    fm.edit_sim = edit_sim(pair.candidate, pair.reference);
    fm.compiled = pair.compiled;
    fm.generated = pair.generated;
    compiled += pair.compiled ? 1 : 0;
    generated += pair.generated ? 1 : 0;

    report.mean_bleu += fm.bleu;
    report.mean_chrf += fm.chrf;
    report.mean_edit_sim += fm.edit_sim;
    report.mean_crystal_bleu += fm.crystal_bleu;
    report.per_file.push_back(std::move(fm));
  }
  const double n = static_cast<double>(pairs.size());
  report.mean_bleu /= n;
  report.mean_chrf /= n;
  report.mean_edit_sim /= n;
  report.mean_crystal_bleu /= n;
  report.compilation_rate = 100.0 * static_cast<double>(compiled) / n;
  report.generation_rate = 100.0 * static_cast<double>(generated) / n;
  report.edit_comp = edit_comp(report.mean_edit_sim, report.compilation_rate);
  return report;
}

std::string metric_report_to_json(const MetricReport& report, std::string_view strategy) {
  json per_file = json::array();
  for (const FileMetrics& fm : report.per_file) {
    per_file.push_back({{"id", fm.id},
                        {"bleu", fm.bleu},
                        {"chrf", fm.chrf},
                        {"edit_sim", fm.edit_sim},
                        {"crystal_bleu", fm.crystal_bleu},
                        {"compiled", fm.compiled},
                        {"generated", fm.generated}});
  }
  json doc = {{"strategy", std::string(strategy)},
              {"per_file", std::move(per_file)},
              {"dataset",
               {{"bleu", report.mean_bleu},
                {"chrf", report.mean_chrf},
                {"edit_sim", report.mean_edit_sim},
                {"crystal_bleu", report.mean_crystal_bleu},
                {"compilation_pct", report.compilation_rate},
                {"generation_pct", report.generation_rate},
                {"edit_comp", report.edit_comp}}}};
  if (report.cost_usd) doc["dataset"]["cost_usd"] = *report.cost_usd;
  return doc.dump(2) + "\n";
}

MetricReport metric_report_from_json(std::string_view json_text, std::string* strategy_out) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw std::runtime_error("malformed metric report JSON");
  }
  MetricReport report;
  if (strategy_out != nullptr) *strategy_out = doc.value("strategy", std::string());
  for (const auto& item : doc.at("per_file")) {
    FileMetrics fm;
    fm.id = item.at("id").get<std::string>();
    fm.bleu = item.at("bleu").get<double>();
    fm.chrf = item.at("chrf").get<double>();
    fm.edit_sim = item.at("edit_sim").get<double>();
    fm.crystal_bleu = item.at("crystal_bleu").get<double>();
    fm.compiled = item.at("compiled").get<bool>();
    fm.generated = item.at("generated").get<bool>();
    report.per_file.push_back(std::move(fm));
  }
  const auto& ds = doc.at("dataset");
  report.mean_bleu = ds.at("bleu").get<double>();
  report.mean_chrf = ds.at("chrf").get<double>();
  report.mean_edit_sim = ds.at("edit_sim").get<double>();
  report.mean_crystal_bleu = ds.at("crystal_bleu").get<double>();
  report.compilation_rate = ds.at("compilation_pct").get<double>();
  report.generation_rate = ds.at("generation_pct").get<double>();
  report.edit_comp = ds.at("edit_comp").get<double>();
  if (ds.contains("cost_usd")) report.cost_usd = ds.at("cost_usd").get<double>();
  return report;
}

std::string metric_report_csv_header() {
  return "strategy,bleu,chrf,edit_sim,crystal_bleu,compilation_pct,generation_pct,cost_usd";
}

std::string metric_report_csv_row(std::string_view strategy, const MetricReport& report) {
  char buf[64];
  std::string row(strategy);
  const auto add4 = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    row += ',';
    row += buf;
  };
  add4(report.mean_bleu);
  add4(report.mean_chrf);
  add4(report.mean_edit_sim);
  add4(report.mean_crystal_bleu);
  std::snprintf(buf, sizeof(buf), "%.2f", report.compilation_rate);
  row += ',';
  row += buf;
  std::snprintf(buf, sizeof(buf), "%.2f", report.generation_rate);
  row += ',';
  row += buf;
  row += ',';
  if (report.cost_usd) {
    std::snprintf(buf, sizeof(buf), "%.6f", *report.cost_usd);
    row += buf;
  }
  return row;
}

}  // namespace scenicgen
