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

#include "readlevel/textmodel.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <utility>

#include "readlevel/error.h"
#include "readlevel/utf8.h"

namespace readlevel {
namespace {

constexpr std::array<std::pair<NamedEntity, std::string_view>, 7>
    kNamedEntityNames = {{
        {NamedEntity::kNone, "none"},
        {NamedEntity::kHuman, "human"},
        {NamedEntity::kNonHumanAnimateMoving, "non-human-animate-moving"},
        {NamedEntity::kNonHumanAnimateNonMoving,
         "non-human-animate-non-moving"},
        {NamedEntity::kConcreteMoving, "concrete-moving"},
        {NamedEntity::kConcreteNonMoving, "concrete-non-moving"},
        {NamedEntity::kTopological, "topological"},
    }};

bool IsTerminal(char32_t c) {
  return c == '.' || c == '!' || c == '?' || c == 0x2026;  // …
}

bool IsClosing(char32_t c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == 0xBB ||
         c == 0x201D || c == 0x2019;
}

bool IsOpening(char32_t c) {
  return c == '"' || c == '\'' || c == '(' || c == '[' || c == 0xAB ||
         c == 0x201C || c == 0x2018 || c == 0x2014 || c == 0x2013 ||
         c == '-';
}

bool IsVowel(char32_t c) {
  switch (c) {
    case U'a': case U'e': case U'i': case U'o': case U'u': case U'y':
    case U'á': case U'é': case U'í': case U'ó': case U'ú':
    case U'â': case U'ê': case U'ô': case U'ã': case U'õ':
    case U'à': case U'ü':
      return true;
    default:
      return false;
  }
}

// Unstressed high vowels that can close a falling diphthong.
bool IsGlide(char32_t c) { return c == U'i' || c == U'u' || c == U'y'; }

bool IsWordInternalJoiner(const std::u32string &cps, size_t j, size_t begin) {
  if (j == begin || j + 1 >= cps.size()) return false;
  char32_t prev = cps[j - 1];
  char32_t next = cps[j + 1];
  char32_t c = cps[j];
  bool alnum_prev = utf8::IsLetter(prev) || utf8::IsDigit(prev);
  bool alnum_next = utf8::IsLetter(next) || utf8::IsDigit(next);
  if ((c == '-' || c == '\'' || c == 0x2019) && alnum_prev && alnum_next) {
    return true;
  }
  return (c == '.' || c == ',' || c == ':') && utf8::IsDigit(prev) &&
         utf8::IsDigit(next);
}

std::string Slice(const std::u32string &cps, size_t begin, size_t end) {
  return utf8::Encode(std::u32string_view(cps).substr(begin, end - begin));
}

}  // namespace

std::string_view NamedEntityName(NamedEntity ne) {
  for (const auto &[value, name] : kNamedEntityNames) {
    if (value == ne) return name;
  }
  return "none";
}

std::optional<NamedEntity> ParseNamedEntity(std::string_view name) {
  for (const auto &[value, n] : kNamedEntityNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

std::string_view AnnotationDepthName(AnnotationDepth depth) {
  switch (depth) {
    case AnnotationDepth::kRaw:
      return "raw";
    case AnnotationDepth::kTagged:
      return "tagged";
    case AnnotationDepth::kParsed:
      return "parsed";
  }
  return "raw";
}

std::optional<AnnotationDepth> ParseAnnotationDepth(std::string_view name) {
  if (name == "raw") return AnnotationDepth::kRaw;
  if (name == "tagged") return AnnotationDepth::kTagged;
  if (name == "parsed") return AnnotationDepth::kParsed;
  return std::nullopt;
}

bool IsPunctuation(std::string_view text) {
  std::u32string cps = utf8::Decode(text);
  if (cps.empty()) return false;
  return std::all_of(cps.begin(), cps.end(),
                     [](char32_t c) { return utf8::IsPunct(c); });
}

Token MakeToken(std::string surface) {
  Token token;
  token.is_punct = IsPunctuation(surface);
  token.surface = std::move(surface);
  return token;
}

int AnnotatedDocument::SentenceCount() const {
  int n = 0;
  for (const auto &p : paragraphs) n += static_cast<int>(p.size());
  return n;
}

int AnnotatedDocument::WordCount() const {
  int n = 0;
  for (const auto &p : paragraphs) {
    for (const auto &s : p) {
      for (const auto &t : s.tokens) n += t.is_punct ? 0 : 1;
    }
  }
  return n;
}

std::vector<const Sentence *> AnnotatedDocument::Sentences() const {
  std::vector<const Sentence *> out;
  for (const auto &p : paragraphs) {
    for (const auto &s : p) out.push_back(&s);
  }
  return out;
}

std::vector<const Token *> AnnotatedDocument::Words() const {
  std::vector<const Token *> out;
  for (const auto &p : paragraphs) {
    for (const auto &s : p) {
      for (const auto &t : s.tokens) {
        if (!t.is_punct) out.push_back(&t);
      }
    }
  }
  return out;
}

std::string AnnotatedDocument::Text() const {
  std::string out;
  for (size_t p = 0; p < paragraphs.size(); ++p) {
    if (p > 0) out += "\n\n";
    bool first = true;
    for (const auto &s : paragraphs[p]) {
      for (const auto &t : s.tokens) {
        if (!first) out += ' ';
        out += t.surface;
        first = false;
      }
    }
  }
  return out;
}

const SegmenterConfig &SegmenterConfig::PortugueseDefaults() {
  static const SegmenterConfig *config = [] {
    auto *c = new SegmenterConfig;
    c->abbreviations = {
        "sr.",   "sra.",  "srta.", "dr.",  "dra.",  "prof.", "profa.",
        "etc.",  "ex.",   "exa.",  "exmo.", "exma.", "v.exa.", "p.",
        "pág.",  "págs.", "pp.",   "vol.", "cap.",  "art.",  "av.",
        "n.",    "nº.",   "núm.",  "obs.", "sto.",  "sta.",  "jr.",
        "eng.",  "arq.",  "min.",  "máx.", "aprox.", "tel.", "fig.",
        "séc.",  "a.c.",  "d.c.",  "gen.", "cel.",  "cia.",  "ltda.",
    };
    c->clitics = {"me",   "te",   "se",  "nos", "vos", "lhe", "lhes",
                  "o",    "a",    "os",  "as",  "lo",  "la",  "los",
                  "las",  "no",   "na",  "nas", "mo",  "ma",  "to",
                  "ta",   "lho",  "lha", "lhos", "lhas"};
    return c;
  }();
  return *config;
}

void SegmenterConfig::LoadAbbreviations(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("missing_file", "cannot open " + path);
  std::set<std::string> loaded;
  std::string line;
  while (std::getline(in, line)) {
    std::string entry = utf8::Trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    loaded.insert(utf8::ToLower(entry));
  }
  abbreviations = std::move(loaded);
}

std::vector<std::string> SplitParagraphs(std::string_view raw) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::string trimmed = utf8::Trim(current);
    if (!trimmed.empty()) out.push_back(std::move(trimmed));
    current.clear();
  };
  size_t pos = 0;
  while (pos <= raw.size()) {
    size_t nl = raw.find('\n', pos);
    std::string_view line =
        raw.substr(pos, nl == std::string_view::npos ? raw.size() - pos
                                                     : nl - pos);
    if (utf8::Trim(line).empty()) {
      flush();
    } else {
      if (!current.empty()) current += '\n';
      current += line;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  flush();
  if (out.empty()) throw Error("empty_document", "empty document");
  return out;
}

std::vector<std::string> SplitSentences(std::string_view paragraph,
                                        const SegmenterConfig &config) {
  std::u32string cps = utf8::Decode(paragraph);
  std::vector<std::string> out;
  auto emit = [&](size_t begin, size_t end) {
    std::string s = utf8::Trim(Slice(cps, begin, end));
    if (!s.empty()) out.push_back(std::move(s));
  };
  auto is_abbreviation = [&](size_t start, size_t dot) {
    size_t w = dot;
    while (w > start && !utf8::IsSpace(cps[w - 1])) --w;
    while (w < dot && IsOpening(cps[w])) ++w;
    std::u32string word = cps.substr(w, dot - w + 1);
    for (char32_t &c : word) c = utf8::ToLower(c);
    return config.abbreviations.count(utf8::Encode(word)) > 0;
  };

  size_t start = 0;
  size_t i = 0;
  const size_t n = cps.size();
  while (i < n) {
    if (!IsTerminal(cps[i])) {
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < n && (IsTerminal(cps[j]) || IsClosing(cps[j]))) ++j;
    if (j >= n) break;
    if (utf8::IsSpace(cps[j])) {
      size_t k = j;
      while (k < n && utf8::IsSpace(cps[k])) ++k;
      size_t m = k;
      while (m < n && IsOpening(cps[m])) ++m;
      bool capital = m < n && utf8::IsUpper(cps[m]);
      bool suppressed = cps[i] == '.' && j == i + 1 && is_abbreviation(start, i);
      if (capital && !suppressed) {
        emit(start, j);
        start = k;
      }
    }
    i = j;
  }
  emit(start, n);
  if (out.empty()) out.push_back(utf8::Trim(paragraph));
  return out;
}

std::vector<Token> Tokenize(std::string_view sentence,
                            const SegmenterConfig &config) {
  std::u32string cps = utf8::Decode(sentence);
  std::vector<Token> tokens;
  size_t i = 0;
  const size_t n = cps.size();
  while (i < n) {
    char32_t c = cps[i];
    if (utf8::IsSpace(c)) {
      ++i;
      continue;
    }
    if (utf8::IsPunct(c)) {
      tokens.push_back(MakeToken(utf8::Encode(c)));
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n && !utf8::IsSpace(cps[j])) {
      if (utf8::IsPunct(cps[j]) && !IsWordInternalJoiner(cps, j, i)) break;
      ++j;
    }
    std::u32string word = cps.substr(i, j - i);
    i = j;

    // Hyphen-attached clitics: "viu-me" -> "viu" "-me".
    if (config.split_clitics) {
      std::vector<size_t> hyphens;
      for (size_t k = 0; k < word.size(); ++k) {
        if (word[k] == '-') hyphens.push_back(k);
      }
      size_t split_at = word.size();
      for (auto it = hyphens.rbegin(); it != hyphens.rend(); ++it) {
        size_t h = *it;
        size_t end = (split_at == word.size()) ? word.size() : split_at;
        std::u32string part = word.substr(h + 1, end - h - 1);
        for (char32_t &ch : part) ch = utf8::ToLower(ch);
        if (h == 0 || !config.clitics.count(utf8::Encode(part))) break;
        split_at = h;
      }
      if (split_at < word.size()) {
        tokens.push_back(MakeToken(utf8::Encode(word.substr(0, split_at))));
        size_t k = split_at;
        while (k < word.size()) {
          size_t next = word.find('-', k + 1);
          if (next == std::u32string::npos) next = word.size();
          tokens.push_back(MakeToken(utf8::Encode(word.substr(k, next - k))));
          k = next;
        }
        continue;
      }
    }
    tokens.push_back(MakeToken(utf8::Encode(word)));
  }
  return tokens;
}

int CountVowels(std::string_view word) {
  int n = 0;
  for (char32_t c : utf8::Decode(word)) n += IsVowel(utf8::ToLower(c)) ? 1 : 0;
  return n;
}

int CountSyllables(std::string_view word) {
  std::u32string cps = utf8::Decode(word);
  for (char32_t &c : cps) c = utf8::ToLower(c);

  int groups = 0;
  bool in_group = false;
  bool has_offglide = false;
  for (size_t i = 0; i < cps.size(); ++i) {
    char32_t c = cps[i];
    if (!IsVowel(c)) {
      in_group = false;
      continue;
    }
    if (in_group) {
      char32_t prev = cps[i - 1];
      // q/g + u + vowel: the u is an onglide of the next nucleus.
      bool onglide = (prev == U'u' || prev == U'ü') && i >= 2 &&
                     (cps[i - 2] == U'q' || cps[i - 2] == U'g') &&
                     !has_offglide && c != U'u';
      bool nasal = (prev == U'ã' || prev == U'õ') &&
                   (c == U'o' || c == U'e' || c == U'i');
      bool falling = IsGlide(c) && c != prev && prev != U'í' &&
                     prev != U'ú' && !has_offglide;
      if (onglide) continue;
      if (nasal || falling) {
        has_offglide = true;
        continue;
      }
    }
    ++groups;
    in_group = true;
    has_offglide = false;
  }
  if (groups == 0) {
    throw Error("unsyllabifiable_token",
                "unsyllabifiable token: " + std::string(word));
  }
  return groups;
}

AnnotatedDocument BuildDocument(std::string_view raw, std::string id,
                                std::string source,
                                const SegmenterConfig &config) {
  AnnotatedDocument doc;
  doc.id = std::move(id);
  doc.source = std::move(source);
  doc.depth = AnnotationDepth::kRaw;
  for (const std::string &para : SplitParagraphs(raw)) {
    std::vector<Sentence> sentences;
    for (const std::string &text : SplitSentences(para, config)) {
      Sentence s;
      s.tokens = Tokenize(text, config);
      if (!s.tokens.empty()) sentences.push_back(std::move(s));
    }
    if (!sentences.empty()) doc.paragraphs.push_back(std::move(sentences));
  }
  if (doc.paragraphs.empty()) {
    throw Error("empty_document", "empty document");
  }
  return doc;
}

AnnotatedDocument BuildDocument(std::span<const TokenRecord> records,
                                std::string id, std::string source) {
  if (records.empty()) throw Error("empty_document", "empty document");
  auto fail = [](const TokenRecord &r, const std::string &what) {
    return Error("malformed_record",
                 "malformed record at line " + std::to_string(r.line) + ": " +
                     what);
  };

  AnnotatedDocument doc;
  doc.id = std::move(id);
  doc.source = std::move(source);

  std::pair<int, int> current{-1, -1};
  for (const TokenRecord &r : records) {
    if (r.surface.empty()) throw fail(r, "empty token surface");
    if (r.paragraph < 0 || r.sentence < 0) {
      throw fail(r, "negative paragraph or sentence index");
    }
    std::pair<int, int> key{r.paragraph, r.sentence};
    if (key < current) throw fail(r, "token order goes backwards");
    if (key != current) {
      if (r.paragraph != current.first) doc.paragraphs.emplace_back();
      doc.paragraphs.back().emplace_back();
      current = key;
    }
    Sentence &sentence = doc.paragraphs.back().back();
    if (r.clause_count) {
      if (*r.clause_count < 0) throw fail(r, "negative clause count");
      if (sentence.clause_count && *sentence.clause_count != *r.clause_count) {
        throw fail(r, "conflicting clause counts within a sentence");
      }
      sentence.clause_count = r.clause_count;
    }
    if (!r.clauses.empty()) {
      if (!sentence.clause_annotations.empty() &&
          sentence.clause_annotations != r.clauses) {
        throw fail(r, "conflicting clause annotations within a sentence");
      }
      sentence.clause_annotations = r.clauses;
    }
    Token token = MakeToken(r.surface);
    token.lemma = r.lemma;
    token.pos = r.pos;
    token.morph = r.morph;
    token.ne = r.ne;
    sentence.tokens.push_back(std::move(token));
  }

  bool all_pos = true;
  bool all_clauses = true;
  for (const auto &para : doc.paragraphs) {
    for (const auto &s : para) {
      if (!s.clause_count) all_clauses = false;
      bool finite_verb = false;
      for (const auto &t : s.tokens) {
        if (!t.is_punct && !t.pos) all_pos = false;
        if (t.pos && CoarsePos(*t.pos) == "VERB" && t.morph.count("mood")) {
          finite_verb = true;
        }
      }
      if (s.clause_count && *s.clause_count == 0 && finite_verb) {
        throw Error("malformed_record",
                    "malformed record: sentence with a finite verb has "
                    "clause_count 0 (line " +
                        std::to_string(records.front().line) + ")");
      }
    }
  }
  if (all_pos && all_clauses) {
    doc.depth = AnnotationDepth::kParsed;
  } else if (all_pos) {
    doc.depth = AnnotationDepth::kTagged;
  } else {
    doc.depth = AnnotationDepth::kRaw;
  }
  return doc;
}

std::string CoarsePos(std::string_view tag) {
  static const std::map<std::string, std::string, std::less<>> kMap = {
      {"N", "NOUN"},      {"NOUN", "NOUN"},  {"PROP", "PROPN"},
      {"PROPN", "PROPN"}, {"V", "VERB"},     {"VERB", "VERB"},
      {"AUX", "AUX"},     {"ADJ", "ADJ"},    {"ADV", "ADV"},
      {"PERS", "PRON"},   {"SPEC", "PRON"},  {"PRON", "PRON"},
      {"DET", "DET"},     {"ART", "DET"},    {"PRP", "ADP"},
      {"ADP", "ADP"},     {"KC", "CCONJ"},   {"CCONJ", "CCONJ"},
      {"KS", "SCONJ"},    {"SCONJ", "SCONJ"}, {"NUM", "NUM"},
      {"IN", "INTJ"},     {"INTJ", "INTJ"},  {"PU", "PUNCT"},
      {"PUNCT", "PUNCT"},
  };
  std::string upper(tag);
  for (char &c : upper) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
  }
  auto it = kMap.find(upper);
  return it == kMap.end() ? "X" : it->second;
}

}  // namespace readlevel
