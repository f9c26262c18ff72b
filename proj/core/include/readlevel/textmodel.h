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

#ifndef READLEVEL_TEXTMODEL_H_
#define READLEVEL_TEXTMODEL_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace readlevel {

// Named-entity classes used by the semantic features.
enum class NamedEntity {
  kNone,
  kHuman,
  kNonHumanAnimateMoving,
  kNonHumanAnimateNonMoving,
  kConcreteMoving,
  kConcreteNonMoving,
  kTopological,
};

std::string_view NamedEntityName(NamedEntity ne);
std::optional<NamedEntity> ParseNamedEntity(std::string_view name);

struct Token {
  std::string surface;
  std::optional<std::string> lemma;
  // Coarse part-of-speech, normalized with CoarsePos() when matched.
  std::optional<std::string> pos;
  // Morphological attribute/value pairs, e.g. mood=indicative.
  std::map<std::string, std::string> morph;
  bool is_punct = false;
  NamedEntity ne = NamedEntity::kNone;

  bool operator==(const Token &) const = default;
};

// Builds a token from its surface form, deriving is_punct.
Token MakeToken(std::string surface);

// True iff `text` is non-empty and every code point is punctuation.
bool IsPunctuation(std::string_view text);

struct Sentence {
  std::vector<Token> tokens;
  std::optional<int> clause_count;
  // One tag per annotated clause: coordinate, subordinate, relative,
  // passive, apposition, ...
  std::vector<std::string> clause_annotations;

  bool operator==(const Sentence &) const = default;
};

// Ordered so that comparisons express "at least as deep as".
enum class AnnotationDepth { kRaw = 0, kTagged = 1, kParsed = 2 };

std::string_view AnnotationDepthName(AnnotationDepth depth);
std::optional<AnnotationDepth> ParseAnnotationDepth(std::string_view name);

struct AnnotatedDocument {
  std::string id;
  std::string source;
  std::vector<std::vector<Sentence>> paragraphs;
  AnnotationDepth depth = AnnotationDepth::kRaw;

  int ParagraphCount() const { return static_cast<int>(paragraphs.size()); }
  int SentenceCount() const;
  // Non-punctuation tokens.
  int WordCount() const;

  // Flattened views in document order.
  std::vector<const Sentence *> Sentences() const;
  std::vector<const Token *> Words() const;

  // Space-joined surfaces, paragraphs separated by blank lines.
  std::string Text() const;

  bool operator==(const AnnotatedDocument &) const = default;
};

// Segmentation knobs. Abbreviations are lowercase and include the final
// period ("dr."); clitics are the pronoun forms split off after a hyphen.
struct SegmenterConfig {
  std::set<std::string> abbreviations;
  std::set<std::string> clitics;
  bool split_clitics = true;

  static const SegmenterConfig &PortugueseDefaults();
  // Replaces `abbreviations` with the entries of a one-per-line file.
  void LoadAbbreviations(const std::string &path);
};

// Splits on one or more blank lines; trims each block and drops empties.
std::vector<std::string> SplitParagraphs(std::string_view raw);

std::vector<std::string> SplitSentences(
    std::string_view paragraph,
    const SegmenterConfig &config = SegmenterConfig::PortugueseDefaults());

std::vector<Token> Tokenize(
    std::string_view sentence,
    const SegmenterConfig &config = SegmenterConfig::PortugueseDefaults());

// Rule-based Portuguese syllable count: vowel groups, with falling and
// nasal diphthongs and the q/g + u glide merged, accented i/u kept as
// hiatus.
int CountSyllables(std::string_view word);

// Number of vowel code points, the upper bound of CountSyllables().
int CountVowels(std::string_view word);

// Flat per-token annotation, one per token in reading order.
struct TokenRecord {
  std::string surface;
  std::optional<std::string> lemma;
  std::optional<std::string> pos;
  std::map<std::string, std::string> morph;
  NamedEntity ne = NamedEntity::kNone;
  int paragraph = 0;
  int sentence = 0;
  std::optional<int> clause_count;
  std::vector<std::string> clauses;
  // Source line, used in error messages.
  int line = 0;
};

AnnotatedDocument BuildDocument(
    std::string_view raw, std::string id, std::string source,
    const SegmenterConfig &config = SegmenterConfig::PortugueseDefaults());

AnnotatedDocument BuildDocument(std::span<const TokenRecord> records,
                                std::string id, std::string source);

// Maps source-specific tags (PALAVRAS-style N, V, PRP, ...) onto a small
// universal set: NOUN PROPN VERB AUX ADJ ADV PRON DET ADP CCONJ SCONJ NUM
// INTJ PUNCT X.
std::string CoarsePos(std::string_view tag);

}  // namespace readlevel

#endif  // READLEVEL_TEXTMODEL_H_
