#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace scenicgen {

struct TokenSequence {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

// Whitespace split, then punctuation runs split off as their own tokens.
// Letters, digits and '_' are word characters; a '.' flanked by digits stays
// inside the number token ("1.0" is one token).
TokenSequence tokenize_code(std::string_view text);

// Clipped n-gram precision: per candidate n-gram type, the candidate count is
// clipped by the maximum reference count. 0 when the candidate has no n-grams
// of the requested length.
double modified_ngram_precision(const TokenSequence& candidate,
                                std::span<const TokenSequence> references, int n);

inline constexpr int kBleuMaxOrder = 4;

// Geometric mean of clipped precisions up to max_order with a brevity
// penalty; any zero precision zeroes the score (no smoothing). weights, when
// given, must be positive, sum to 1 and have one entry per order.
double bleu(const TokenSequence& candidate, std::span<const TokenSequence> references,
            int max_order = kBleuMaxOrder, std::span<const double> weights = {});

// Character n-gram F1 averaged over orders 1..6. Orders where neither side
// has any n-grams are skipped so identical short texts still score 1.
double chrf(std::string_view candidate, std::string_view reference);

std::size_t levenshtein(std::string_view a, std::string_view b);

// 1 - lev(c, r) / max(len(c), len(r)); two empty texts compare equal (1.0).
double edit_sim(std::string_view candidate, std::string_view reference);

// The k corpus-wide most frequent n-grams (orders 1..n_max), built once from
// a reference corpus and removed from both sides before precision counting.
class NGramExclusionSet {
 public:
  NGramExclusionSet() = default;

  int k() const { return k_; }
  int max_order() const { return n_max_; }
  std::size_t size() const { return excluded_.size(); }
  std::uint64_t corpus_fingerprint() const { return corpus_fingerprint_; }
  bool empty() const { return excluded_.empty(); }

  bool contains_encoded(std::string_view encoded) const {
    return excluded_.count(std::string(encoded)) > 0;
  }

  // Length-prefixed token encoding; shared with the counting code so lookups
  // and set construction cannot drift apart.
  static std::string encode(std::span<const std::string> tokens, std::size_t offset, int n);

  friend NGramExclusionSet build_trivial_ngrams(std::span<const TokenSequence> corpus, int k,
                                                int n_max);

 private:
  int k_ = 0;
  int n_max_ = kBleuMaxOrder;
  std::uint64_t corpus_fingerprint_ = 0;
  std::unordered_set<std::string> excluded_;
};

// Pools n-gram frequencies across the whole corpus; ties at the cutoff are
// broken by ascending order, then lexicographic tokens, for determinism.
NGramExclusionSet build_trivial_ngrams(std::span<const TokenSequence> corpus, int k = 500,
                                       int n_max = kBleuMaxOrder);

// BLEU with the excluded n-grams removed from candidate and reference counts.
// An empty exclusion set reproduces bleu() exactly.
double crystal_bleu(const TokenSequence& candidate, std::span<const TokenSequence> references,
                    const NGramExclusionSet& exclusion);

// F1 of mean edit similarity scaled to 100 and the compilation percentage.
double edit_comp(double mean_edit_sim, double compilation_rate);

struct FilePairInput {
  std::string id;
  std::string candidate;
  std::string reference;
  bool compiled = false;
  bool generated = false;
};

struct FileMetrics {
  std::string id;
  double bleu = 0;
  double chrf = 0;
  double edit_sim = 0;
  double crystal_bleu = 0;
  bool compiled = false;
  bool generated = false;
};

struct MetricReport {
  std::vector<FileMetrics> per_file;
  double mean_bleu = 0;
  double mean_chrf = 0;
  double mean_edit_sim = 0;
  double mean_crystal_bleu = 0;
  double compilation_rate = 0;  // percent
  double generation_rate = 0;   // percent
  double edit_comp = 0;         // 0..100
  std::optional<double> cost_usd;
};

MetricReport dataset_report(std::span<const FilePairInput> pairs,
                            const NGramExclusionSet& exclusion,
                            std::optional<double> cost_usd = std::nullopt);

std::string metric_report_to_json(const MetricReport& report, std::string_view strategy);
MetricReport metric_report_from_json(std::string_view json_text,
                                     std::string* strategy_out = nullptr);
std::string metric_report_csv_header();
std::string metric_report_csv_row(std::string_view strategy, const MetricReport& report);

}  // namespace scenicgen
