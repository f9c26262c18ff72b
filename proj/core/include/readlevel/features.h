// Copyright 2026 The Readlevel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef READLEVEL_FEATURES_H_
#define READLEVEL_FEATURES_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "readlevel/lexicons.h"
#include "readlevel/textmodel.h"

namespace readlevel {

enum class FeatureCategory {
  kMorphological,
  kLexical,
  kSyntactic,
  kTextual,
  kPunctuation,
  kSemanticCommonsense,
};

std::string_view FeatureCategoryName(FeatureCategory category);
std::optional<FeatureCategory> ParseFeatureCategory(std::string_view name);

// Bumped whenever a registry name, category or requirement changes.
inline constexpr int kFeatureRegistryVersion = 1;

struct FeatureSpec {
  std::string name;
  FeatureCategory category;
  // Further categories the same measure is grouped under.
  std::vector<FeatureCategory> also_in;
  AnnotationDepth required_depth;
  // Lexicon kind names plus "word_frequencies" / "sense_inventory".
  std::vector<std::string> required_resources;
  // Occurrences normalized per incidence base (or a per-unit ratio).
  bool incidence = false;
  // One of the ten baseline "simple statistics".
  bool simple_statistic = false;
  // Operationalized by a documented approximation.
  bool approximation = false;
  // Not part of the reference set; names start with "ext_".
  bool extension = false;
  std::string description;

  bool InCategory(FeatureCategory c) const;
};

const std::vector<FeatureSpec> &FeatureRegistry();
const FeatureSpec *FindFeature(std::string_view name);
const std::vector<std::string> &SimpleStatisticNames();

// Ordered feature names with O(1) lookup. Shared between vectors.
class FeatureSchema {
 public:
  static std::shared_ptr<const FeatureSchema> Make(
      std::vector<std::string> names);
  // All registry names in registry order.
  static std::shared_ptr<const FeatureSchema> Registry();

  const std::vector<std::string> &names() const { return names_; }
  size_t size() const { return names_.size(); }
  std::optional<size_t> Find(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, size_t> index_;
};

class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::shared_ptr<const FeatureSchema> schema);

  const FeatureSchema &schema() const { return *schema_; }
  const std::shared_ptr<const FeatureSchema> &schema_ptr() const {
    return schema_;
  }
  size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  double value(size_t i) const { return values_[i]; }
  bool available(size_t i) const { return available_[i] != 0; }

  // Throws if `name` is not in the schema.
  double Value(std::string_view name) const;
  bool Available(std::string_view name) const;
  bool AllAvailable() const;

  void Set(size_t i, double value, bool available = true);
  void Set(std::string_view name, double value, bool available = true);

  bool operator==(const FeatureVector &other) const;

 private:
  std::shared_ptr<const FeatureSchema> schema_;
  std::vector<double> values_;
  std::vector<char> available_;
};

enum class FillPolicy { kZero, kError };

struct FeatureConfig {
  struct Constants {
    double a;
    double b;
    double c;
  };
  int incidence_base = 1000;
  // Portuguese reading-ease recalibration.
  Constants flesch = {248.835, 1.015, 84.6};
  // Standard grade-level constants.
  Constants flesch_kincaid = {0.39, 11.8, 15.59};
  FillPolicy fill = FillPolicy::kZero;
  // Returned by the Honore statistic when every type is a hapax.
  double honore_cap = 2000.0;
};

// The ten baseline features, all computable on raw text.
FeatureVector ExtractSimpleStatistics(const AnnotatedDocument &doc,
                                      const Lexicon &simple_words,
                                      const FeatureConfig &config = {});

double FleschReadingEase(const AnnotatedDocument &doc,
                         const FeatureConfig &config = {});
double FleschReadingEase(double words_per_sentence, double syllables_per_word,
                         const FeatureConfig &config = {});

double FleschKincaidGrade(const AnnotatedDocument &doc,
                          const FeatureConfig &config = {});
double FleschKincaidGrade(double words_per_sentence, double syllables_per_word,
                          const FeatureConfig &config = {});

// count * incidence_base / word_total.
double Incidence(long count, long word_total, const FeatureConfig &config = {});

struct HonoreResult {
  double value;
  // Set when every type is a hapax and the cap was returned.
  bool capped;
};

HonoreResult HonoreStatistic(const AnnotatedDocument &doc,
                             const FeatureConfig &config = {});
// tokens N, types V, hapax types V1.
HonoreResult HonoreStatistic(long tokens, long types, long hapax,
                             double cap = 2000.0);

double BrunetIndex(const AnnotatedDocument &doc);
double BrunetIndex(long tokens, long types);

// Every registry feature of `category` (primary or secondary membership).
// Features whose depth or resources are missing are marked unavailable, or
// raise under FillPolicy::kError.
FeatureVector ExtractCategory(const AnnotatedDocument &doc,
                              FeatureCategory category,
                              const ResourceSet &resources,
                              const FeatureConfig &config = {});

// The whole registry, in registry order.
FeatureVector ExtractAll(const AnnotatedDocument &doc,
                         const ResourceSet &resources,
                         const FeatureConfig &config = {});

// Raw-count helpers shared with tests.
int CountSyllablesOrZero(std::string_view word);
std::string ApproximateStem(std::string_view word);

}  // namespace readlevel

#endif  // READLEVEL_FEATURES_H_
