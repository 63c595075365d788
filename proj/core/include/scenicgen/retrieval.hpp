#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scenicgen/dataset.hpp"

namespace scenicgen {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dimension() const { return values.size(); }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

// Deterministic for fixed input, fixed output dimension.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string provider_id() const = 0;
  virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) = 0;

  EmbeddingVector embed_one(std::string_view text);
};

// Throws on dimension mismatch or an all-zero vector.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

struct VectorIndex {
  std::vector<std::pair<std::string, EmbeddingVector>> entries;  // dataset order
  std::string provider_id;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

enum class SplitFilter { any, train, test, unassigned };

bool split_matches(SplitFilter filter, Split split);

VectorIndex build_index(const DatasetIndex& records, EmbeddingProvider& provider,
                        SplitFilter include = SplitFilter::any);

// Descending similarity, ties by ascending id; never returns an excluded id.
// Throws when the index is empty after exclusion.
std::vector<std::pair<std::string, double>> retrieve_top_k(
    const VectorIndex& index, EmbeddingProvider& provider, std::string_view query, int k = 3,
    const std::set<std::string>& exclude_ids = {});

// Per-category farthest-point selection: seeded random first pick, then each
// pick minimizes the maximum cosine similarity to the already-selected set
// (ties by ascending id). Selection order is preserved per category.
struct TestSplitSelection {
  std::vector<std::string> easy;
  std::vector<std::string> medium;
  std::vector<std::string> hard;

  std::set<std::string> all_ids() const;
};

TestSplitSelection select_test_split(const DatasetIndex& records, EmbeddingProvider& provider,
                                     int per_category, std::uint64_t seed);

inline constexpr std::size_t kFallbackEmbeddingDim = 256;

// Bucket of one character trigram in the fallback embedding (1..dim-1;
// coordinate 0 is reserved for texts with no trigrams).
std::size_t fallback_trigram_bucket(std::string_view trigram);

// L2-normalized hashed character-trigram frequency vector. Deterministic,
// dependency-free; the provider used by tests and offline runs.
EmbeddingVector fallback_embed(std::string_view text);

class FallbackEmbeddingProvider final : public EmbeddingProvider {
 public:
  std::string provider_id() const override { return "fallback-trigram-256"; }
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override;
};

// POST {"texts": [...]} -> {"vectors": [[...], ...], "dimension": d}
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(std::string provider_id, std::string endpoint, int timeout_ms = 30000);
  ~HttpEmbeddingProvider() override;

  std::string provider_id() const override { return provider_id_; }
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override;

 private:
  std::string provider_id_;
  std::string endpoint_;
  int timeout_ms_;
};

// Pairs an index with the provider that built it; used by the generation
// engine for example retrieval.
class Retriever {
 public:
  Retriever(VectorIndex index, std::shared_ptr<EmbeddingProvider> provider, int k = 3);

  std::vector<std::pair<std::string, double>> top_k(
      std::string_view query, const std::set<std::string>& exclude_ids = {}) const;
  int k() const { return k_; }
  const VectorIndex& index() const { return index_; }

 private:
  VectorIndex index_;
  std::shared_ptr<EmbeddingProvider> provider_;
  int k_;
};

}  // namespace scenicgen
