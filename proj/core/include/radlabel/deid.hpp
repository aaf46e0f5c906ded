#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "radlabel/corpus.hpp"

namespace radlabel::deid {

enum class PhiCategory {
  kPersonName,
  kInstitution,
  kAddress,
  kAge,
  kDate,
  kTime,
  kPhone,
  kAccessionNumber,
  kMedicalRecordNumber,
};

inline constexpr std::array<PhiCategory, 9> kAllCategories = {
    PhiCategory::kPersonName, PhiCategory::kInstitution,     PhiCategory::kAddress,
    PhiCategory::kAge,        PhiCategory::kDate,            PhiCategory::kTime,
    PhiCategory::kPhone,      PhiCategory::kAccessionNumber, PhiCategory::kMedicalRecordNumber,
};

std::string_view to_string(PhiCategory c);
PhiCategory parse_category(std::string_view s);

// Marker substituted for a category, e.g. "{{NAME}}". Dates and times share
// "{{DATETIME}}".
std::string_view fiducial(PhiCategory c);

enum class PhiSource { kReportText, kMetadataSidecar };

// Structured representation, e.g. {family, given, middle} for names or
// {year, month, day} for dates. Values are normalized (upper-case names,
// unpadded numbers) so different surface forms of one entity compare equal.
using Canonical = std::map<std::string, std::string>;

struct PhiEntity {
  PhiCategory category = PhiCategory::kPersonName;
  Canonical canonical;
  std::set<std::string> surfaces;
  PhiSource source = PhiSource::kReportText;
};

// Entities deduplicated by (category, canonical); merging unions surfaces.
class PhiStore {
 public:
  void add(PhiEntity entity);
  void merge(const PhiStore& other);

  std::size_t size() const { return entities_.size(); }
  bool empty() const { return entities_.empty(); }
  std::vector<PhiEntity> entities() const;

  // JSON Lines, one entity per line. load() appends into this store so that
  // several first-pass runs accumulate.
  void load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::map<std::pair<PhiCategory, Canonical>, PhiEntity> entities_;
};

// Throws DataError if `canonical` lacks the fields `category` needs.
void validate_canonical(PhiCategory category, const Canonical& canonical);

// Recognizer regexes, sidecar field map, and variant layouts. Shipped as data
// (core/data/deid_patterns.json) so sites can add layouts.
struct Patterns {
  struct Recognizer {
    PhiCategory category;
    std::string parser;
    std::string pattern;
    std::shared_ptr<const std::regex> regex;
  };

  std::map<std::string, PhiCategory> sidecar_fields;
  std::vector<Recognizer> recognizers;
  std::vector<std::string> date_layouts;
  std::vector<std::string> time_layouts;
  std::vector<std::string> age_layouts;
  std::vector<std::string> phone_layouts;
  std::vector<std::string> name_titles;

  static Patterns parse(std::string_view json_text, const std::string& source = "<patterns>");
  static Patterns load(const std::filesystem::path& path);
  static const Patterns& defaults();
};

struct FirstPassOptions {
  bool use_sidecar = true;
  bool use_text = true;
};

// Parses one flagged sidecar value into an entity; nullopt if it does not
// parse for its category.
std::optional<PhiEntity> parse_sidecar_value(PhiCategory category, std::string_view value);

// Runs the text recognizers over `text`.
std::vector<PhiEntity> recognize_text(std::string_view text, const Patterns& patterns);

// Pass 1: extend `store` with every PHI instance found in sidecar fields and
// report text. The corpus is unchanged.
PhiStore first_pass(const Corpus& corpus, PhiStore store,
                    const FirstPassOptions& options = {},
                    const Patterns& patterns = Patterns::defaults());

// Every surface string pass 2 will replace for `entity`: observed surfaces
// plus the layouts generated from its canonical form.
std::vector<std::string> variants(const PhiEntity& entity,
                                  const Patterns& patterns = Patterns::defaults());

// Compiled pass-2 matcher for one store. Replacement is case-insensitive,
// longest-match-first, left-to-right, non-overlapping, and only at token
// boundaries (no letter/digit directly on either side). Existing fiducials
// are skipped, which makes apply() idempotent.
class Replacer {
 public:
  explicit Replacer(const PhiStore& store, const Patterns& patterns = Patterns::defaults());

  std::string apply(std::string_view text) const;
  std::size_t variant_count() const { return variant_count_; }

 private:
  struct Node {
    std::map<char, std::size_t> next;
    int category = -1;  // index into kAllCategories when a variant ends here
  };
  std::vector<Node> nodes_;
  std::size_t variant_count_ = 0;
};

// Pass 2 for one report: text rewritten by the replacer, flagged sidecar
// fields dropped, other sidecar values scrubbed, and "deidentified" set.
Report second_pass(const Report& report, const Replacer& replacer,
                   const Patterns& patterns = Patterns::defaults());
Report second_pass(const Report& report, const PhiStore& store);

inline constexpr const char* kDeidentifiedKey = "deidentified";

bool is_deidentified(const Report& report);

}  // namespace radlabel::deid
