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

#ifndef READLEVEL_LEXICONS_H_
#define READLEVEL_LEXICONS_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "readlevel/textmodel.h"

namespace readlevel {

enum class LexiconKind {
  kSimpleWords,
  kPositiveWords,
  kNegativeWords,
  kConnectives,
  kDiscourseMarkers,
  kLogicalOperators,
  kPronouns,
};

std::string_view LexiconKindName(LexiconKind kind);
std::optional<LexiconKind> ParseLexiconKind(std::string_view name);
const std::vector<LexiconKind> &AllLexiconKinds();

// Subclass tags a lexicon of `kind` may carry. Empty for untagged kinds.
//   connectives:        <class>[_<polarity>], class in additive adversative
//                       causal concessive conclusive logical temporal,
//                       polarity in positive negative
//   pronouns:           {first,second,third}_{plain,possessive}
//   discourse_markers:  ambiguous unambiguous
//   logical_operators:  and or if negation
const std::set<std::string> &AllowedSubclasses(LexiconKind kind);

// An immutable word list. Entries are lowercase; multiword entries are
// stored with single spaces and matched as token n-grams.
class Lexicon {
 public:
  Lexicon(LexiconKind kind,
          std::map<std::string, std::set<std::string>> entries);

  LexiconKind kind() const { return kind_; }
  size_t size() const { return entries_.size(); }
  bool Contains(std::string_view entry) const;
  // Tags of an entry; empty when untagged or absent.
  const std::set<std::string> &Subclasses(std::string_view entry) const;
  bool HasSubclasses() const { return tagged_; }
  // Longest entry, in tokens.
  int MaxTokens() const { return max_tokens_; }
  const std::map<std::string, std::set<std::string>, std::less<>> &entries()
      const {
    return entries_;
  }

  // Entries carrying `subclass`, or a tag that starts with "<subclass>_".
  Lexicon Filter(std::string_view subclass) const;

 private:
  LexiconKind kind_;
  std::map<std::string, std::set<std::string>, std::less<>> entries_;
  bool tagged_ = false;
  int max_tokens_ = 0;
};

// UTF-8, one entry per line, optional "\t<subclass>", '#' comments.
Lexicon LoadLexicon(const std::string &path, LexiconKind kind);
Lexicon ParseLexicon(std::string_view contents, LexiconKind kind,
                     const std::string &origin = "<memory>");

// Non-overlapping, longest-match-first occurrences inside each sentence.
// Lowercased surfaces are tried first; on a miss the lemma form is tried.
int MatchCount(const Lexicon &lexicon, const AnnotatedDocument &doc,
               std::optional<std::string_view> subclass = std::nullopt);

// Same matching over a single token sequence.
int MatchCount(const Lexicon &lexicon, const std::vector<Token> &tokens);

// Word -> relative frequency, "<word>\t<number>" per line.
class FrequencyList {
 public:
  explicit FrequencyList(std::map<std::string, double, std::less<>> values)
      : values_(std::move(values)) {}
  std::optional<double> Lookup(std::string_view word) const;
  size_t size() const { return values_.size(); }

 private:
  std::map<std::string, double, std::less<>> values_;
};

FrequencyList LoadFrequencyList(const std::string &path);
FrequencyList ParseFrequencyList(std::string_view contents,
                                 const std::string &origin = "<memory>");

// Lemma + coarse POS -> sense count and hypernym depth,
// "<lemma>\t<POS>\t<senses>\t<hypernyms>" per line.
class SenseInventory {
 public:
  struct Entry {
    int senses = 0;
    int hypernyms = 0;
  };
  explicit SenseInventory(std::map<std::string, Entry, std::less<>> entries)
      : entries_(std::move(entries)) {}
  std::optional<Entry> Lookup(std::string_view lemma,
                              std::string_view coarse_pos) const;
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, Entry, std::less<>> entries_;
};

SenseInventory LoadSenseInventory(const std::string &path);
SenseInventory ParseSenseInventory(std::string_view contents,
                                   const std::string &origin = "<memory>");

// The resources a feature extraction run may use. Missing members make the
// dependent features unavailable.
struct ResourceSet {
  std::map<LexiconKind, Lexicon> lexicons;
  std::optional<FrequencyList> frequencies;
  std::optional<SenseInventory> senses;

  const Lexicon *Find(LexiconKind kind) const;

  // Loads every resource present in `dir` under its conventional name
  // (simple_words.txt, connectives.txt, ..., word_frequencies.txt,
  // sense_inventory.txt).
  static ResourceSet LoadDirectory(const std::string &dir);
};

std::string ConventionalFileName(LexiconKind kind);

}  // namespace readlevel

#endif  // READLEVEL_LEXICONS_H_
