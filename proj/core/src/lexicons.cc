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

#include "readlevel/lexicons.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "readlevel/error.h"
#include "readlevel/utf8.h"

namespace readlevel {
namespace {

constexpr std::array<std::pair<LexiconKind, std::string_view>, 7> kKindNames =
    {{
        {LexiconKind::kSimpleWords, "simple_words"},
        {LexiconKind::kPositiveWords, "positive_words"},
        {LexiconKind::kNegativeWords, "negative_words"},
        {LexiconKind::kConnectives, "connectives"},
        {LexiconKind::kDiscourseMarkers, "discourse_markers"},
        {LexiconKind::kLogicalOperators, "logical_operators"},
        {LexiconKind::kPronouns, "pronouns"},
    }};

// Lowercases and collapses internal whitespace to single spaces.
std::string NormalizeEntry(std::string_view raw) {
  std::istringstream in{utf8::ToLower(raw)};
  std::string part;
  std::string out;
  while (in >> part) {
    if (!out.empty()) out += ' ';
    out += part;
  }
  return out;
}

int TokenLength(std::string_view entry) {
  return static_cast<int>(std::count(entry.begin(), entry.end(), ' ')) + 1;
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing_file", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Splits into non-comment, non-blank lines paired with their line number.
std::vector<std::pair<int, std::string>> ContentLines(
    std::string_view contents) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in{std::string(contents)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = utf8::Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    out.emplace_back(number, line);
  }
  return out;
}

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> fields;
  size_t pos = 0;
  while (true) {
    size_t tab = line.find('\t', pos);
    fields.push_back(utf8::Trim(line.substr(pos, tab - pos)));
    if (tab == std::string::npos) break;
    pos = tab + 1;
  }
  return fields;
}

std::optional<double> ParseNumber(const std::string &text) {
  if (text.empty()) return std::nullopt;
  char *end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string_view LexiconKindName(LexiconKind kind) {
  for (const auto &[k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<LexiconKind> ParseLexiconKind(std::string_view name) {
  for (const auto &[k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

const std::vector<LexiconKind> &AllLexiconKinds() {
  static const std::vector<LexiconKind> kinds = [] {
    std::vector<LexiconKind> v;
    for (const auto &[k, name] : kKindNames) v.push_back(k);
    return v;
  }();
  return kinds;
}

const std::set<std::string> &AllowedSubclasses(LexiconKind kind) {
  static const std::set<std::string> kNone;
  static const std::set<std::string> kConnectiveTags = [] {
    std::set<std::string> tags;
    for (const char *cls : {"additive", "adversative", "causal", "concessive",
                            "conclusive", "logical", "temporal"}) {
      tags.insert(cls);
      tags.insert(std::string(cls) + "_positive");
      tags.insert(std::string(cls) + "_negative");
    }
    return tags;
  }();
  static const std::set<std::string> kPronounTags = {
      "first_plain",  "first_possessive", "second_plain",
      "second_possessive", "third_plain", "third_possessive"};
  static const std::set<std::string> kMarkerTags = {"ambiguous",
                                                    "unambiguous"};
  static const std::set<std::string> kOperatorTags = {"and", "or", "if",
                                                      "negation"};
  switch (kind) {
    case LexiconKind::kConnectives:
      return kConnectiveTags;
    case LexiconKind::kPronouns:
      return kPronounTags;
    case LexiconKind::kDiscourseMarkers:
      return kMarkerTags;
    case LexiconKind::kLogicalOperators:
      return kOperatorTags;
    default:
      return kNone;
  }
}

Lexicon::Lexicon(LexiconKind kind,
                 std::map<std::string, std::set<std::string>> entries)
    : kind_(kind) {
  for (auto &[entry, tags] : entries) {
    if (!tags.empty()) tagged_ = true;
    max_tokens_ = std::max(max_tokens_, TokenLength(entry));
    entries_.emplace(entry, std::move(tags));
  }
}

bool Lexicon::Contains(std::string_view entry) const {
  return entries_.find(entry) != entries_.end();
}

const std::set<std::string> &Lexicon::Subclasses(std::string_view entry) const {
  static const std::set<std::string> kEmpty;
  auto it = entries_.find(entry);
  return it == entries_.end() ? kEmpty : it->second;
}

Lexicon Lexicon::Filter(std::string_view subclass) const {
  std::string prefix = std::string(subclass) + "_";
  std::map<std::string, std::set<std::string>> kept;
  for (const auto &[entry, tags] : entries_) {
    std::set<std::string> matching;
    for (const std::string &tag : tags) {
      if (tag == subclass || tag.rfind(prefix, 0) == 0) matching.insert(tag);
    }
    if (!matching.empty()) kept.emplace(entry, std::move(matching));
  }
  return Lexicon(kind_, std::move(kept));
}

Lexicon ParseLexicon(std::string_view contents, LexiconKind kind,
                     const std::string &origin) {
  const std::set<std::string> &allowed = AllowedSubclasses(kind);
  std::map<std::string, std::set<std::string>> entries;
  for (const auto &[number, line] : ContentLines(contents)) {
    std::vector<std::string> fields = SplitTabs(line);
    std::string entry = NormalizeEntry(fields[0]);
    if (entry.empty()) continue;
    std::set<std::string> &tags = entries[entry];
    if (fields.size() >= 2 && !fields[1].empty()) {
      std::string tag = utf8::ToLower(fields[1]);
      if (!allowed.count(tag)) {
        throw Error("unknown_subclass", origin + ":" + std::to_string(number) +
                                            ": unknown subclass '" + tag +
                                            "' for " +
                                            std::string(LexiconKindName(kind)));
      }
      tags.insert(tag);
    }
  }
  if (entries.empty()) {
    throw Error("empty_lexicon", "empty lexicon: " + origin);
  }
  return Lexicon(kind, std::move(entries));
}

Lexicon LoadLexicon(const std::string &path, LexiconKind kind) {
  return ParseLexicon(ReadFile(path), kind, path);
}

int MatchCount(const Lexicon &lexicon, const std::vector<Token> &tokens) {
  const int n = static_cast<int>(tokens.size());
  std::vector<std::string> surfaces(n);
  std::vector<std::string> lemmas(n);
  std::vector<bool> has_lemma(n);
  for (int i = 0; i < n; ++i) {
    surfaces[i] = utf8::ToLower(tokens[i].surface);
    has_lemma[i] = tokens[i].lemma.has_value();
    lemmas[i] = has_lemma[i] ? utf8::ToLower(*tokens[i].lemma) : surfaces[i];
  }
  int count = 0;
  int i = 0;
  while (i < n) {
    int matched = 0;
    for (int len = std::min(lexicon.MaxTokens(), n - i); len >= 1; --len) {
      std::string key = surfaces[i];
      bool any_lemma = has_lemma[i];
      for (int k = 1; k < len; ++k) {
        key += ' ';
        key += surfaces[i + k];
        any_lemma = any_lemma || has_lemma[i + k];
      }
      if (lexicon.Contains(key)) {
        matched = len;
        break;
      }
      if (any_lemma) {
        std::string lemma_key = lemmas[i];
        for (int k = 1; k < len; ++k) {
          lemma_key += ' ';
          lemma_key += lemmas[i + k];
        }
        if (lexicon.Contains(lemma_key)) {
          matched = len;
          break;
        }
      }
    }
    if (matched > 0) {
      ++count;
      i += matched;
    } else {
      ++i;
    }
  }
  return count;
}

int MatchCount(const Lexicon &lexicon, const AnnotatedDocument &doc,
               std::optional<std::string_view> subclass) {
  if (subclass) {
    if (!lexicon.HasSubclasses()) {
      throw Error("untagged_lexicon",
                  "subclass '" + std::string(*subclass) +
                      "' requested on untagged lexicon " +
                      std::string(LexiconKindName(lexicon.kind())));
    }
    Lexicon filtered = lexicon.Filter(*subclass);
    return MatchCount(filtered, doc, std::nullopt);
  }
  int count = 0;
  for (const Sentence *s : doc.Sentences()) count += MatchCount(lexicon, s->tokens);
  return count;
}

std::optional<double> FrequencyList::Lookup(std::string_view word) const {
  auto it = values_.find(word);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

FrequencyList ParseFrequencyList(std::string_view contents,
                                 const std::string &origin) {
  std::map<std::string, double, std::less<>> values;
  for (const auto &[number, line] : ContentLines(contents)) {
    std::vector<std::string> fields = SplitTabs(line);
    std::optional<double> v =
        fields.size() >= 2 ? ParseNumber(fields[1]) : std::nullopt;
    if (!v || *v < 0) {
      throw Error("malformed_resource", origin + ":" + std::to_string(number) +
                                            ": expected <word>\\t<frequency>");
    }
    values[NormalizeEntry(fields[0])] = *v;
  }
  if (values.empty()) throw Error("empty_lexicon", "empty lexicon: " + origin);
  return FrequencyList(std::move(values));
}

FrequencyList LoadFrequencyList(const std::string &path) {
  return ParseFrequencyList(ReadFile(path), path);
}

std::optional<SenseInventory::Entry> SenseInventory::Lookup(
    std::string_view lemma, std::string_view coarse_pos) const {
  std::string key = utf8::ToLower(lemma) + "\t" + std::string(coarse_pos);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

SenseInventory ParseSenseInventory(std::string_view contents,
                                   const std::string &origin) {
  std::map<std::string, SenseInventory::Entry, std::less<>> entries;
  for (const auto &[number, line] : ContentLines(contents)) {
    std::vector<std::string> fields = SplitTabs(line);
    std::optional<double> senses =
        fields.size() >= 3 ? ParseNumber(fields[2]) : std::nullopt;
    std::optional<double> hypernyms =
        fields.size() >= 4 ? ParseNumber(fields[3]) : std::optional(0.0);
    if (!senses || !hypernyms || *senses < 1 || *hypernyms < 0) {
      throw Error("malformed_resource",
                  origin + ":" + std::to_string(number) +
                      ": expected <lemma>\\t<POS>\\t<senses>\\t<hypernyms>");
    }
    std::string key = NormalizeEntry(fields[0]) + "\t" + CoarsePos(fields[1]);
    entries[key] = {static_cast<int>(*senses), static_cast<int>(*hypernyms)};
  }
  if (entries.empty()) throw Error("empty_lexicon", "empty lexicon: " + origin);
  return SenseInventory(std::move(entries));
}

SenseInventory LoadSenseInventory(const std::string &path) {
  return ParseSenseInventory(ReadFile(path), path);
}

const Lexicon *ResourceSet::Find(LexiconKind kind) const {
  auto it = lexicons.find(kind);
  return it == lexicons.end() ? nullptr : &it->second;
}

std::string ConventionalFileName(LexiconKind kind) {
  return std::string(LexiconKindName(kind)) + ".txt";
}

ResourceSet ResourceSet::LoadDirectory(const std::string &dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error("missing_file", "resource directory not found: " + dir);
  }
  ResourceSet set;
  for (LexiconKind kind : AllLexiconKinds()) {
    fs::path path = fs::path(dir) / ConventionalFileName(kind);
    if (fs::exists(path)) set.lexicons.emplace(kind, LoadLexicon(path, kind));
  }
  fs::path freq = fs::path(dir) / "word_frequencies.txt";
  if (fs::exists(freq)) set.frequencies = LoadFrequencyList(freq);
  fs::path senses = fs::path(dir) / "sense_inventory.txt";
  if (fs::exists(senses)) set.senses = LoadSenseInventory(senses);
  return set;
}

}  // namespace readlevel
