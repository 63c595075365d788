#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scenicgen {

enum class Split { train, test, unassigned };
enum class Category { easy, medium, hard };

std::string_view to_string(Split split);
std::string_view to_string(Category category);
std::optional<Split> parse_split(std::string_view text);
std::optional<Category> parse_category(std::string_view text);

// One natural-language description paired with its reference Scenic source.
// The standalone description text is authoritative; the same text usually
// also appears as the script's leading docstring.
struct ScenarioRecord {
  std::string id;
  std::string nl_description;
  std::string scenic_source;
  Split split = Split::unassigned;
  std::optional<Category> category;
  std::optional<double> difficulty_score;  // in [0, 100] when set

  friend bool operator==(const ScenarioRecord&, const ScenarioRecord&) = default;
};

// Returns human-readable invariant violations; empty means the record is valid.
std::vector<std::string> validate_record(const ScenarioRecord& record);

// Immutable, id-ordered collection of records with unique ids.
class DatasetIndex {
 public:
  DatasetIndex() = default;
  explicit DatasetIndex(std::vector<ScenarioRecord> records);

  const std::vector<ScenarioRecord>& records() const { return records_; }
  const ScenarioRecord* find(std::string_view id) const;
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

  friend bool operator==(const DatasetIndex&, const DatasetIndex&) = default;

 private:
  std::vector<ScenarioRecord> records_;  // sorted by id
};

struct DatasetLoadResult {
  DatasetIndex index;
  std::vector<std::string> warnings;  // unmatched files, malformed meta entries
};

// Directory layout: flat `<id>.txt` / `<id>.scenic` pairs plus an optional
// `meta.json` sidecar: { "<id>": {"split": "train|test", "category": "Easy|Medium|Hard"} }.
// Unmatched files produce warnings and are skipped; unreadable files throw.
DatasetLoadResult load_dataset(const std::filesystem::path& root);

// Writes the same layout back. Records with a difficulty score persist it as
// an extra meta field so that load(save(x)) == x.
void save_dataset(const DatasetIndex& index, const std::filesystem::path& root);

// ---------------------------------------------------------------------------
// Synthetic scenario expansion
// ---------------------------------------------------------------------------

// One sampled value: `display` is the prose form used in the description
// docstring, `code` the literal spliced into Scenic source.
struct TemplateValue {
  std::string display;
  std::string code;
  double weight = 1.0;

  friend bool operator==(const TemplateValue&, const TemplateValue&) = default;
};

// Template text contains `<Keyword>` placeholders. Each substitution entry
// named K resolves the `<K>` placeholder to the sampled pair's display value.
// A linked group ties additional placeholders to the same sampled pair: the
// group member that owns the substitution entry renders its display value,
// every other member renders the code value (e.g. {Color, ColorCode}).
struct TemplateSpec {
  std::string template_text;
  std::map<std::string, std::vector<TemplateValue>> substitutions;
  std::vector<std::vector<std::string>> linked_groups;
};

struct ExpandedScenario {
  std::string nl_description;
  std::string scenic_source;
};

// Deterministic for a fixed (spec, seed). Sampling is uniform unless the
// substitution list carries weights. Throws if any `<Keyword>` placeholder
// remains unresolved, naming the placeholder.
ExpandedScenario expand_template(const TemplateSpec& spec, std::uint64_t seed);

// JSON shape:
//   { "template_text": "..." | "template_file": "path",
//     "substitutions": { "K": [ {"display": "...", "code": "...", "weight": 1.0}, ... ] },
//     "linked_groups": [ ["K", "KCode"], ... ] }
// Relative template_file paths resolve against the spec file's directory.
TemplateSpec load_template_spec(const std::filesystem::path& json_file);

}  // namespace scenicgen
