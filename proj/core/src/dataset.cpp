#include "scenicgen/dataset.hpp"

#include <algorithm>
#include <random>
#include <regex>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "scenicgen/common.hpp"

namespace scenicgen {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::test: return "test";
    case Split::unassigned: return "unassigned";
  }
  return "unassigned";
}

std::string_view to_string(Category category) {
  switch (category) {
    case Category::easy: return "Easy";
    case Category::medium: return "Medium";
    case Category::hard: return "Hard";
  }
  return "Easy";
}

std::optional<Split> parse_split(std::string_view text) {
  if (iequals(text, "train")) return Split::train;
  if (iequals(text, "test")) return Split::test;
  if (iequals(text, "unassigned")) return Split::unassigned;
  return std::nullopt;
}

std::optional<Category> parse_category(std::string_view text) {
  if (iequals(text, "easy")) return Category::easy;
  if (iequals(text, "medium")) return Category::medium;
  if (iequals(text, "hard")) return Category::hard;
  return std::nullopt;
}

std::vector<std::string> validate_record(const ScenarioRecord& record) {
  std::vector<std::string> violations;
  if (record.id.empty()) violations.push_back("id empty");
  if (trim(record.nl_description).empty()) violations.push_back("nl_description empty");
  if (record.scenic_source.empty()) violations.push_back("scenic_source empty");
  if (record.category.has_value() && !record.difficulty_score.has_value()) {
    violations.push_back("category set but difficulty_score unset");
  }
  if (record.difficulty_score.has_value() &&
      (*record.difficulty_score < 0.0 || *record.difficulty_score > 100.0)) {
    violations.push_back("difficulty_score outside [0,100]");
  }
  return violations;
}

DatasetIndex::DatasetIndex(std::vector<ScenarioRecord> records) : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const ScenarioRecord& a, const ScenarioRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].id == records_[i - 1].id) {
      throw std::invalid_argument("duplicate record id: " + records_[i].id);
    }
  }
}

const ScenarioRecord* DatasetIndex::find(std::string_view id) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), id,
                             [](const ScenarioRecord& r, std::string_view v) { return r.id < v; });
  if (it != records_.end() && it->id == id) return &*it;
  return nullptr;
}

DatasetLoadResult load_dataset(const fs::path& root) {
  if (!fs::exists(root) || !fs::is_directory(root)) {
    throw std::runtime_error("dataset root is not a directory: " + root.string());
  }

  std::set<std::string> nl_ids;
  std::set<std::string> code_ids;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (p.extension() == ".txt") nl_ids.insert(p.stem().string());
    if (p.extension() == ".scenic") code_ids.insert(p.stem().string());
  }

  DatasetLoadResult result;
  std::vector<std::string>& warnings = result.warnings;
  for (const std::string& id : nl_ids) {
    if (!code_ids.count(id)) {
      warnings.push_back("missing pair: " + id + ".txt has no " + id + ".scenic");
    }
  }
  for (const std::string& id : code_ids) {
    if (!nl_ids.count(id)) {
      warnings.push_back("missing pair: " + id + ".scenic has no " + id + ".txt");
    }
  }

  json meta = json::object();
  const fs::path meta_path = root / "meta.json";
  if (fs::exists(meta_path)) {
    json parsed = json::parse(read_text_file(meta_path), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      throw std::runtime_error("malformed meta.json: " + meta_path.string());
    }
    meta = std::move(parsed);
  }

  std::vector<ScenarioRecord> records;
  for (const std::string& id : nl_ids) {
    if (!code_ids.count(id)) continue;
    ScenarioRecord record;
    record.id = id;
    record.nl_description = read_text_file(root / (id + ".txt"));
    record.scenic_source = read_text_file(root / (id + ".scenic"));
    if (auto it = meta.find(id); it != meta.end() && it->is_object()) {
      if (auto s = it->find("split"); s != it->end() && s->is_string()) {
        if (auto split = parse_split(s->get<std::string>())) {
          record.split = *split;
        } else {
          warnings.push_back("meta.json: unknown split for " + id);
        }
      }
      if (auto c = it->find("category"); c != it->end() && c->is_string()) {
        if (auto category = parse_category(c->get<std::string>())) {
          record.category = *category;
        } else {
          warnings.push_back("meta.json: unknown category for " + id);
        }
      }
      if (auto d = it->find("difficulty_score"); d != it->end() && d->is_number()) {
        record.difficulty_score = d->get<double>();
      }
    }
    records.push_back(std::move(record));
  }

  result.index = DatasetIndex(std::move(records));
  return result;
}

void save_dataset(const DatasetIndex& index, const fs::path& root) {
  fs::create_directories(root);
  json meta = json::object();
  for (const ScenarioRecord& record : index.records()) {
    write_text_file(root / (record.id + ".txt"), record.nl_description);
    write_text_file(root / (record.id + ".scenic"), record.scenic_source);
    json entry = json::object();
    if (record.split != Split::unassigned) entry["split"] = std::string(to_string(record.split));
    if (record.category) entry["category"] = std::string(to_string(*record.category));
    if (record.difficulty_score) entry["difficulty_score"] = *record.difficulty_score;
    if (!entry.empty()) meta[record.id] = std::move(entry);
  }
  write_text_file(root / "meta.json", meta.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Template expansion
// ---------------------------------------------------------------------------

namespace {

// Weighted choice over a substitution list; uniform when weights are all equal.
std::size_t sample_value_index(const std::vector<TemplateValue>& values, std::mt19937_64& rng) {
  double total = 0.0;
  for (const TemplateValue& v : values) {
    if (v.weight < 0.0) throw std::invalid_argument("template value weight must be non-negative");
    total += v.weight;
  }
  if (total <= 0.0) throw std::invalid_argument("template substitution list has zero total weight");
  const double draw = unit_draw(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc += values[i].weight;
    if (draw < acc) return i;
  }
  return values.size() - 1;
}

void replace_all(std::string& text, std::string_view needle, std::string_view replacement) {
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), replacement);
    pos += replacement.size();
  }
}

// Extracts the body of the leading triple-quoted docstring, dropping an
// optional "Scenario Description:" header line.
std::string docstring_description(std::string_view source) {
  const std::size_t open = source.find("\"\"\"");
  if (open == std::string_view::npos) return {};
  const std::size_t close = source.find("\"\"\"", open + 3);
  if (close == std::string_view::npos) return {};
  std::string_view body = source.substr(open + 3, close - open - 3);
  std::string_view trimmed = trim(body);
  constexpr std::string_view kHeader = "Scenario Description:";
  if (trimmed.substr(0, kHeader.size()) == kHeader) {
    trimmed = trim(trimmed.substr(kHeader.size()));
  }
  return std::string(trimmed);
}

}  // namespace

ExpandedScenario expand_template(const TemplateSpec& spec, std::uint64_t seed) {
  // Resolve each linked group to its owning substitution entry.
  std::map<std::string, std::pair<std::string, bool>> placeholder_binding;  // name -> (entry, is_display)
  for (const auto& group : spec.linked_groups) {
    std::string owner;
    for (const std::string& member : group) {
      if (spec.substitutions.count(member)) {
        if (!owner.empty()) {
          throw std::invalid_argument("linked group has multiple substitution entries: " + owner +
                                      ", " + member);
        }
        owner = member;
      }
    }
    if (owner.empty()) {
      throw std::invalid_argument("linked group has no substitution entry");
    }
    for (const std::string& member : group) {
      placeholder_binding[member] = {owner, member == owner};
    }
  }
  for (const auto& [name, values] : spec.substitutions) {
    placeholder_binding.emplace(name, std::make_pair(name, true));
  }

  // One sample per entry, drawn in sorted entry order for determinism.
  std::mt19937_64 rng(seed);
  std::map<std::string, std::size_t> sampled;
  for (const auto& [name, values] : spec.substitutions) {
    if (values.empty()) throw std::invalid_argument("empty substitution list: " + name);
    sampled[name] = sample_value_index(values, rng);
  }

  std::string text = spec.template_text;
  for (const auto& [placeholder, binding] : placeholder_binding) {
    const auto& [entry, is_display] = binding;
    const TemplateValue& value = spec.substitutions.at(entry)[sampled.at(entry)];
    replace_all(text, "<" + placeholder + ">", is_display ? value.display : value.code);
  }

  static const std::regex leftover("<([A-Za-z]+)>");
  std::smatch match;
  if (std::regex_search(text, match, leftover)) {
    throw std::runtime_error("unresolved placeholder: <" + match[1].str() + ">");
  }

  ExpandedScenario out;
  out.scenic_source = std::move(text);
  out.nl_description = docstring_description(out.scenic_source);
  return out;
}

TemplateSpec load_template_spec(const fs::path& json_file) {
  json doc = json::parse(read_text_file(json_file), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw std::runtime_error("malformed template spec: " + json_file.string());
  }
  TemplateSpec spec;
  if (doc.contains("template_text")) {
    spec.template_text = doc.at("template_text").get<std::string>();
  } else if (doc.contains("template_file")) {
    fs::path p = doc.at("template_file").get<std::string>();
    if (p.is_relative()) p = json_file.parent_path() / p;
    spec.template_text = read_text_file(p);
  } else {
    throw std::runtime_error("template spec needs template_text or template_file");
  }
  if (doc.contains("substitutions")) {
    for (const auto& [key, list] : doc.at("substitutions").items()) {
      std::vector<TemplateValue> values;
      for (const auto& item : list) {
        TemplateValue v;
        v.display = item.at("display").get<std::string>();
        v.code = item.value("code", v.display);
        v.weight = item.value("weight", 1.0);
        values.push_back(std::move(v));
      }
      spec.substitutions[key] = std::move(values);
    }
  }
  if (doc.contains("linked_groups")) {
    for (const auto& group : doc.at("linked_groups")) {
      spec.linked_groups.push_back(group.get<std::vector<std::string>>());
    }
  }
  return spec;
}

}  // namespace scenicgen
