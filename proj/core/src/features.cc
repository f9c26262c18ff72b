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

#include "readlevel/features.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "readlevel/error.h"
#include "readlevel/utf8.h"

namespace readlevel {
namespace {

using Category = FeatureCategory;
using Depth = AnnotationDepth;

// Per-document precomputation shared by every feature.
class Context {
 public:
  Context(const AnnotatedDocument &doc, const ResourceSet &resources,
          const FeatureConfig &config)
      : doc(doc), resources(resources), config(config) {
    sentences = doc.Sentences();
    for (const Sentence *s : sentences) {
      std::vector<const Token *> ws;
      for (const Token &t : s->tokens) {
        if (t.is_punct) {
          ++punct_tokens;
          punct_kinds.insert(t.surface);
        } else {
          ws.push_back(&t);
          words.push_back(&t);
          lower.push_back(utf8::ToLower(t.surface));
          syllables += CountSyllablesOrZero(t.surface);
        }
      }
      sentence_words.push_back(std::move(ws));
    }
    n = static_cast<long>(words.size());
    s = static_cast<long>(sentences.size());
    p = doc.ParagraphCount();
  }

  double Inc(long count) const { return Incidence(count, n, config); }

  const Lexicon &Lex(LexiconKind kind) const { return *resources.Find(kind); }

  int Matches(LexiconKind kind,
              std::optional<std::string_view> subclass = std::nullopt) const {
    return MatchCount(Lex(kind), doc, subclass);
  }

  static std::string Pos(const Token *t) {
    return t->pos ? CoarsePos(*t->pos) : "X";
  }

  static std::string Lemma(const Token *t) {
    return utf8::ToLower(t->lemma ? *t->lemma : t->surface);
  }

  static bool IsContent(const std::string &pos) {
    return pos == "NOUN" || pos == "VERB" || pos == "ADJ" || pos == "ADV";
  }

  long CountPos(std::string_view pos) const {
    long c = 0;
    for (const Token *t : words) c += Pos(t) == pos ? 1 : 0;
    return c;
  }

  long CountMorph(std::string_view key, std::string_view value,
                  std::string_view key2 = {},
                  std::string_view value2 = {}) const {
    long c = 0;
    for (const Token *t : words) {
      auto it = t->morph.find(std::string(key));
      if (it == t->morph.end() || it->second != value) continue;
      if (!key2.empty()) {
        auto it2 = t->morph.find(std::string(key2));
        if (it2 == t->morph.end() || it2->second != value2) continue;
      }
      ++c;
    }
    return c;
  }

  long TotalClauses() const {
    long c = 0;
    for (const Sentence *st : sentences) c += st->clause_count.value_or(0);
    return c;
  }

  long CountClauseTag(std::string_view tag) const {
    long c = 0;
    for (const Sentence *st : sentences) {
      c += std::count(st->clause_annotations.begin(),
                      st->clause_annotations.end(), tag);
    }
    return c;
  }

  long SentencesWithClauses(int lo, int hi) const {
    long c = 0;
    for (const Sentence *st : sentences) {
      int k = st->clause_count.value_or(0);
      c += (k >= lo && k <= hi) ? 1 : 0;
    }
    return c;
  }

  // Per-sentence lemma sets filtered by coarse POS.
  std::vector<std::set<std::string>> SentenceSets(
      const std::function<bool(const std::string &)> &keep,
      bool stem = false) const {
    std::vector<std::set<std::string>> out;
    for (const auto &ws : sentence_words) {
      std::set<std::string> set;
      for (const Token *t : ws) {
        if (!keep(Pos(t))) continue;
        std::string l = Lemma(t);
        set.insert(stem ? ApproximateStem(l) : l);
      }
      out.push_back(std::move(set));
    }
    return out;
  }

  // Fraction of sentence pairs satisfying `overlap`, adjacent pairs only or
  // all unordered pairs.
  double PairFraction(const std::function<bool(size_t, size_t)> &overlap,
                      bool adjacent_only) const {
    long pairs = 0;
    long hits = 0;
    for (size_t i = 0; i < sentences.size(); ++i) {
      for (size_t j = i + 1; j < sentences.size(); ++j) {
        if (adjacent_only && j != i + 1) break;
        ++pairs;
        hits += overlap(i, j) ? 1 : 0;
      }
    }
    return pairs == 0 ? 0.0 : static_cast<double>(hits) / pairs;
  }

  struct NounPhrase {
    int modifiers = 0;
    int pronouns = 0;
  };

  // Maximal runs of DET/ADJ/NUM/NOUN/PROPN/PRON containing a nominal head.
  std::vector<NounPhrase> NounPhrases() const {
    std::vector<NounPhrase> out;
    for (const Sentence *st : sentences) {
      NounPhrase current;
      bool open = false;
      bool headed = false;
      auto close = [&] {
        if (open && headed) out.push_back(current);
        current = {};
        open = headed = false;
      };
      for (const Token &t : st->tokens) {
        std::string pos = t.is_punct ? "PUNCT" : Pos(&t);
        bool nominal = pos == "NOUN" || pos == "PROPN" || pos == "PRON";
        bool part = nominal || pos == "DET" || pos == "ADJ" || pos == "NUM";
        if (!part) {
          close();
          continue;
        }
        open = true;
        headed = headed || nominal;
        if (pos == "ADJ" || pos == "NUM") ++current.modifiers;
        if (pos == "PRON") ++current.pronouns;
      }
      close();
    }
    return out;
  }

  // Counts runs of consecutive tokens sharing an entity class.
  std::vector<long> EntitiesPerSentence(std::optional<NamedEntity> which) const {
    std::vector<long> out;
    for (const Sentence *st : sentences) {
      long c = 0;
      NamedEntity prev = NamedEntity::kNone;
      for (const Token &t : st->tokens) {
        bool hit = t.ne != NamedEntity::kNone && (!which || t.ne == *which);
        if (hit && t.ne != prev) ++c;
        prev = hit ? t.ne : NamedEntity::kNone;
      }
      out.push_back(c);
    }
    return out;
  }

  const Lexicon &ThirdPerson() const {
    if (!third_person_) {
      third_person_ = Lex(LexiconKind::kPronouns).Filter("third");
    }
    return *third_person_;
  }

  const AnnotatedDocument &doc;
  const ResourceSet &resources;
  const FeatureConfig &config;
  std::vector<const Sentence *> sentences;
  std::vector<std::vector<const Token *>> sentence_words;
  std::vector<const Token *> words;
  std::vector<std::string> lower;
  std::set<std::string> punct_kinds;
  long punct_tokens = 0;
  long syllables = 0;
  long n = 0;
  long s = 0;
  long p = 0;

 private:
  mutable std::optional<Lexicon> third_person_;
};

using Compute = std::function<double(const Context &)>;

struct FeatureDef {
  FeatureSpec spec;
  Compute compute;
};

struct Flags {
  bool incidence = false;
  bool simple = false;
  bool approximation = false;
  bool extension = false;
};

FeatureDef Def(std::string name, Category category,
               std::vector<Category> also_in, Depth depth,
               std::vector<std::string> resources, Flags flags,
               std::string description, Compute compute) {
  FeatureSpec spec;
  spec.name = std::move(name);
  spec.category = category;
  spec.also_in = std::move(also_in);
  spec.required_depth = depth;
  spec.required_resources = std::move(resources);
  spec.incidence = flags.incidence;
  spec.simple_statistic = flags.simple;
  spec.approximation = flags.approximation;
  spec.extension = flags.extension;
  spec.description = std::move(description);
  return {std::move(spec), std::move(compute)};
}

double Ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

long TypeCount(const Context &c) {
  return static_cast<long>(std::set<std::string>(c.lower.begin(),
                                                 c.lower.end())
                               .size());
}

// Frequency of a word, looked up by lemma then surface.
std::optional<double> Frequency(const Context &c, const Token *t) {
  if (auto f = c.resources.frequencies->Lookup(Context::Lemma(t))) return f;
  return c.resources.frequencies->Lookup(utf8::ToLower(t->surface));
}

double MeanSenses(const Context &c, std::string_view pos) {
  double sum = 0;
  long found = 0;
  for (const Token *t : c.words) {
    if (Context::Pos(t) != pos) continue;
    if (auto e = c.resources.senses->Lookup(Context::Lemma(t), pos)) {
      sum += e->senses;
      ++found;
    }
  }
  return Ratio(sum, static_cast<double>(found));
}

bool ContainsThirdPersonPronoun(const Context &c, size_t sentence) {
  return MatchCount(c.ThirdPerson(), c.sentences[sentence]->tokens) > 0;
}

bool ContainsNoun(const Context &c, size_t sentence) {
  for (const Token *t : c.sentence_words[sentence]) {
    std::string pos = Context::Pos(t);
    if (pos == "NOUN" || pos == "PROPN") return true;
  }
  return false;
}

std::vector<FeatureDef> BuildDefinitions() {
  const Category kMorph = Category::kMorphological;
  const Category kLex = Category::kLexical;
  const Category kSyn = Category::kSyntactic;
  const Category kText = Category::kTextual;
  const Category kPunct = Category::kPunctuation;
  const Category kSem = Category::kSemanticCommonsense;
  const Depth kRaw = Depth::kRaw;
  const Depth kTagged = Depth::kTagged;
  const Depth kParsed = Depth::kParsed;
  const Flags kInc{.incidence = true};
  const Flags kApprox{.approximation = true};
  const Flags kIncApprox{.incidence = true, .approximation = true};

  std::vector<FeatureDef> defs;

  // Baseline simple statistics.
  const Flags kSimple{.simple = true};
  defs.push_back(Def("flesch_kincaid_grade", kMorph, {}, kRaw, {}, kSimple,
                     "Flesch-Kincaid grade level",
                     [](const Context &c) {
                       return FleschKincaidGrade(
                           Ratio(c.n, c.s), Ratio(c.syllables, c.n), c.config);
                     }));
  defs.push_back(Def("avg_sent_per_para", kPunct, {}, kRaw, {}, kSimple,
                     "mean sentences per paragraph",
                     [](const Context &c) { return Ratio(c.s, c.p); }));
  defs.push_back(Def("avg_words_per_sent", kLex, {}, kRaw, {}, kSimple,
                     "mean words per sentence",
                     [](const Context &c) { return Ratio(c.n, c.s); }));
  defs.push_back(Def("num_paragraphs", kPunct, {}, kRaw, {}, kSimple,
                     "number of paragraphs",
                     [](const Context &c) { return double(c.p); }));
  defs.push_back(Def("num_sentences", kPunct, {}, kRaw, {}, kSimple,
                     "number of sentences",
                     [](const Context &c) { return double(c.s); }));
  defs.push_back(Def("num_words", kLex, {}, kRaw, {}, kSimple,
                     "number of word tokens",
                     [](const Context &c) { return double(c.n); }));
  defs.push_back(Def("type_token_ratio", kLex, {}, kRaw, {}, kSimple,
                     "distinct lowercased word forms over word tokens",
                     [](const Context &c) { return Ratio(TypeCount(c), c.n); }));
  defs.push_back(Def("num_simple_words", kLex, {}, kRaw, {"simple_words"},
                     kSimple, "matches against the simple-words dictionary",
                     [](const Context &c) {
                       return double(c.Matches(LexiconKind::kSimpleWords));
                     }));
  defs.push_back(Def("punct_incidence", kPunct, {}, kRaw, {},
                     {.incidence = true, .simple = true},
                     "punctuation tokens per incidence base",
                     [](const Context &c) { return c.Inc(c.punct_tokens); }));
  defs.push_back(Def("punct_diversity", kPunct, {}, kRaw, {}, kSimple,
                     "distinct punctuation marks",
                     [](const Context &c) {
                       return double(c.punct_kinds.size());
                     }));

  // Morphological.
  defs.push_back(Def("flesch_index", kMorph, {kLex, kPunct}, kRaw, {}, {},
                     "Flesch reading ease, Portuguese constants",
                     [](const Context &c) {
                       return FleschReadingEase(
                           Ratio(c.n, c.s), Ratio(c.syllables, c.n), c.config);
                     }));
  defs.push_back(Def("mean_syllables_per_content_word", kMorph, {}, kTagged,
                     {}, {}, "mean syllables of content words",
                     [](const Context &c) {
                       long syl = 0;
                       long count = 0;
                       for (const Token *t : c.words) {
                         if (!Context::IsContent(Context::Pos(t))) continue;
                         syl += CountSyllablesOrZero(t->surface);
                         ++count;
                       }
                       return Ratio(syl, count);
                     }));
  const std::pair<const char *, const char *> kTenses[] = {
      {"present", "present"},
      {"preterite_perfect", "preterite perfect"},
      {"imperfect", "imperfect"},
      {"pluperfect", "pluperfect"},
      {"future", "future"},
      {"future_of_past", "future of the past"},
  };
  for (const auto &[tense, label] : kTenses) {
    std::string t = tense;
    defs.push_back(Def("inc_indicative_" + t, kMorph, {kSyn}, kTagged, {},
                       kInc,
                       std::string("indicative mood, ") + label + " tense",
                       [t](const Context &c) {
                         return c.Inc(
                             c.CountMorph("mood", "indicative", "tense", t));
                       }));
  }
  defs.push_back(Def("inc_subjunctive", kMorph, {kSyn}, kTagged, {}, kInc,
                     "subjunctive mood verbs", [](const Context &c) {
                       return c.Inc(c.CountMorph("mood", "subjunctive"));
                     }));
  defs.push_back(Def("inc_imperative", kMorph, {kSyn}, kTagged, {}, kInc,
                     "imperative mood verbs", [](const Context &c) {
                       return c.Inc(c.CountMorph("mood", "imperative"));
                     }));

  // Lexical.
  const std::pair<const char *, const char *> kPosIncidence[] = {
      {"adjective_incidence", "ADJ"},
      {"adverb_incidence", "ADV"},
      {"noun_incidence", "NOUN"},
      {"verb_incidence", "VERB"},
  };
  for (const auto &[name, pos] : kPosIncidence) {
    std::string p = pos;
    defs.push_back(Def(name, kLex, {}, kTagged, {}, kInc,
                       "tokens tagged " + p, [p](const Context &c) {
                         return c.Inc(c.CountPos(p));
                       }));
  }
  defs.push_back(Def("content_word_incidence", kLex, {}, kTagged, {}, kInc,
                     "nouns, verbs, adjectives and adverbs",
                     [](const Context &c) {
                       long k = 0;
                       for (const Token *t : c.words) {
                         k += Context::IsContent(Context::Pos(t)) ? 1 : 0;
                       }
                       return c.Inc(k);
                     }));
  defs.push_back(Def("function_word_incidence", kLex, {}, kTagged, {}, kInc,
                     "words that are not content words",
                     [](const Context &c) {
                       long k = 0;
                       for (const Token *t : c.words) {
                         k += Context::IsContent(Context::Pos(t)) ? 0 : 1;
                       }
                       return c.Inc(k);
                     }));
  defs.push_back(Def("content_word_frequency", kLex, {}, kTagged,
                     {"word_frequencies"}, {},
                     "mean frequency of listed content words",
                     [](const Context &c) {
                       double sum = 0;
                       long found = 0;
                       for (const Token *t : c.words) {
                         if (!Context::IsContent(Context::Pos(t))) continue;
                         if (auto f = Frequency(c, t)) {
                           sum += *f;
                           ++found;
                         }
                       }
                       return Ratio(sum, double(found));
                     }));
  defs.push_back(Def("min_content_word_frequency", kLex, {}, kTagged,
                     {"word_frequencies"}, {},
                     "mean over sentences of the rarest content word",
                     [](const Context &c) {
                       double sum = 0;
                       long counted = 0;
                       for (const auto &ws : c.sentence_words) {
                         std::optional<double> lowest;
                         for (const Token *t : ws) {
                           if (!Context::IsContent(Context::Pos(t))) continue;
                           if (auto f = Frequency(c, t)) {
                             lowest = lowest ? std::min(*lowest, *f) : *f;
                           }
                         }
                         if (lowest) {
                           sum += *lowest;
                           ++counted;
                         }
                       }
                       return Ratio(sum, double(counted));
                     }));
  defs.push_back(Def("mean_hypernyms_per_verb", kLex, {}, kTagged,
                     {"sense_inventory"}, {},
                     "mean hypernym depth of listed verbs",
                     [](const Context &c) {
                       double sum = 0;
                       long found = 0;
                       for (const Token *t : c.words) {
                         if (Context::Pos(t) != "VERB") continue;
                         if (auto e = c.resources.senses->Lookup(
                                 Context::Lemma(t), "VERB")) {
                           sum += e->hypernyms;
                           ++found;
                         }
                       }
                       return Ratio(sum, double(found));
                     }));
  defs.push_back(Def("brunet_index", kLex, {}, kRaw, {}, {},
                     "Brunet lexical richness index", [](const Context &c) {
                       return BrunetIndex(c.n, TypeCount(c));
                     }));
  defs.push_back(Def("honore_statistic", kLex, {}, kRaw, {}, {},
                     "Honore lexical richness statistic",
                     [](const Context &c) {
                       return HonoreStatistic(c.doc, c.config).value;
                     }));
  defs.push_back(Def("mean_pronouns_per_noun_phrase", kLex, {kSyn}, kTagged,
                     {}, kApprox, "pronouns per POS-run noun phrase",
                     [](const Context &c) {
                       auto nps = c.NounPhrases();
                       long pron = 0;
                       for (const auto &np : nps) pron += np.pronouns;
                       return Ratio(pron, double(nps.size()));
                     }));
  const std::pair<const char *, const char *> kAmbiguity[] = {
      {"ambiguity_adjectives", "ADJ"},
      {"ambiguity_adverbs", "ADV"},
      {"ambiguity_nouns", "NOUN"},
      {"ambiguity_verbs", "VERB"},
  };
  for (const auto &[name, pos] : kAmbiguity) {
    std::string p = pos;
    defs.push_back(Def(name, kLex, {}, kTagged, {"sense_inventory"}, {},
                       "mean sense count of listed " + p + " tokens",
                       [p](const Context &c) { return MeanSenses(c, p); }));
  }
  defs.push_back(Def("words_before_main_verb", kLex, {}, kTagged, {}, kApprox,
                     "mean words before the first finite verb",
                     [](const Context &c) {
                       double sum = 0;
                       long counted = 0;
                       for (const auto &ws : c.sentence_words) {
                         std::optional<size_t> first_verb;
                         std::optional<size_t> first_finite;
                         for (size_t i = 0; i < ws.size(); ++i) {
                           if (Context::Pos(ws[i]) != "VERB") continue;
                           if (!first_verb) first_verb = i;
                           if (!first_finite && ws[i]->morph.count("mood")) {
                             first_finite = i;
                           }
                         }
                         auto main = first_finite ? first_finite : first_verb;
                         if (main) {
                           sum += double(*main);
                           ++counted;
                         }
                       }
                       return Ratio(sum, double(counted));
                     }));
  defs.push_back(Def("inc_prepositions_per_clause", kLex, {kSyn}, kParsed, {},
                     kInc, "prepositions per annotated clause",
                     [](const Context &c) {
                       return Ratio(c.CountPos("ADP"), c.TotalClauses());
                     }));
  defs.push_back(Def("inc_prepositions_per_sentence", kLex, {kSyn}, kTagged,
                     {}, kInc, "prepositions per sentence",
                     [](const Context &c) {
                       return Ratio(c.CountPos("ADP"), c.s);
                     }));

  // Syntactic.
  defs.push_back(Def("mean_clauses_per_sentence", kSyn, {}, kParsed, {}, {},
                     "annotated clauses per sentence", [](const Context &c) {
                       return Ratio(c.TotalClauses(), c.s);
                     }));
  defs.push_back(Def("noun_phrase_incidence", kSyn, {}, kTagged, {},
                     kIncApprox, "POS-run noun phrases",
                     [](const Context &c) {
                       return c.Inc(long(c.NounPhrases().size()));
                     }));
  defs.push_back(Def("modifiers_per_noun_phrase", kSyn, {}, kTagged, {},
                     kApprox, "adjectives and numerals per noun phrase",
                     [](const Context &c) {
                       auto nps = c.NounPhrases();
                       long mods = 0;
                       for (const auto &np : nps) mods += np.modifiers;
                       return Ratio(mods, double(nps.size()));
                     }));
  defs.push_back(Def("adverbial_adjuncts_per_clause", kSyn, {}, kParsed, {},
                     kApprox, "adverbs per annotated clause",
                     [](const Context &c) {
                       return Ratio(c.CountPos("ADV"), c.TotalClauses());
                     }));
  defs.push_back(Def("inc_coordinate_clauses", kSyn, {}, kParsed, {}, kInc,
                     "clauses annotated coordinate", [](const Context &c) {
                       return c.Inc(c.CountClauseTag("coordinate"));
                     }));
  defs.push_back(Def("apposition_per_clause", kSyn, {}, kParsed, {}, {},
                     "appositions per annotated clause",
                     [](const Context &c) {
                       return Ratio(c.CountClauseTag("apposition"),
                                    c.TotalClauses());
                     }));
  const std::pair<const char *, const char *> kForms[] = {
      {"inc_gerund_verbs", "gerund"},
      {"inc_infinitive_verbs", "infinitive"},
      {"inc_participle_verbs", "participle"},
  };
  for (const auto &[name, form] : kForms) {
    std::string f = form;
    defs.push_back(Def(name, kSyn, {}, kTagged, {}, kInc,
                       "verbs in " + f + " form", [f](const Context &c) {
                         return c.Inc(c.CountMorph("form", f));
                       }));
  }
  defs.push_back(Def("inc_verbals", kSyn, {}, kTagged, {}, kInc,
                     "gerunds, infinitives and participles",
                     [](const Context &c) {
                       return c.Inc(c.CountMorph("form", "gerund") +
                                    c.CountMorph("form", "infinitive") +
                                    c.CountMorph("form", "participle"));
                     }));
  defs.push_back(Def("inc_initiating_subordinate_clauses", kSyn, {}, kParsed,
                     {}, kInc, "sentences opening with a subordinate clause",
                     [](const Context &c) {
                       long k = 0;
                       for (const Sentence *st : c.sentences) {
                         k += (!st->clause_annotations.empty() &&
                               st->clause_annotations.front() == "subordinate")
                                  ? 1
                                  : 0;
                       }
                       return c.Inc(k);
                     }));
  defs.push_back(Def("inc_passive_sentences", kSyn, {}, kParsed, {}, kInc,
                     "sentences with a passive clause", [](const Context &c) {
                       long k = 0;
                       for (const Sentence *st : c.sentences) {
                         k += std::count(st->clause_annotations.begin(),
                                         st->clause_annotations.end(),
                                         "passive") > 0
                                  ? 1
                                  : 0;
                       }
                       return c.Inc(k);
                     }));
  defs.push_back(Def("inc_relative_clauses", kSyn, {}, kParsed, {}, kInc,
                     "clauses annotated relative", [](const Context &c) {
                       return c.Inc(c.CountClauseTag("relative"));
                     }));
  defs.push_back(Def("inc_subordinate_clauses", kSyn, {}, kParsed, {}, kInc,
                     "clauses annotated subordinate", [](const Context &c) {
                       return c.Inc(c.CountClauseTag("subordinate"));
                     }));
  for (int k = 0; k <= 6; ++k) {
    defs.push_back(Def("inc_sentences_with_" + std::to_string(k) + "_clauses",
                       kSyn, {}, kParsed, {}, kInc,
                       "sentences with exactly " + std::to_string(k) +
                           " clauses",
                       [k](const Context &c) {
                         return c.Inc(c.SentencesWithClauses(k, k));
                       }));
  }
  defs.push_back(Def("inc_sentences_with_7plus_clauses", kSyn, {}, kParsed,
                     {}, kInc, "sentences with seven or more clauses",
                     [](const Context &c) {
                       return c.Inc(c.SentencesWithClauses(7, 1 << 30));
                     }));

  // Textual.
  const std::pair<const char *, const char *> kOperators[] = {
      {"inc_and", "and"},
      {"inc_if", "if"},
      {"inc_or", "or"},
      {"inc_negation", "negation"},
  };
  for (const auto &[name, tag] : kOperators) {
    std::string t = tag;
    defs.push_back(Def(name, kText, {}, kRaw, {"logical_operators"}, kInc,
                       "logical operator '" + t + "'", [t](const Context &c) {
                         return c.Inc(c.Matches(LexiconKind::kLogicalOperators,
                                                t));
                       }));
  }
  defs.push_back(Def("logic_operator_incidence", kText, {}, kRaw,
                     {"logical_operators"}, kInc, "all logical operators",
                     [](const Context &c) {
                       return c.Inc(c.Matches(LexiconKind::kLogicalOperators));
                     }));
  defs.push_back(Def("connective_incidence", kText, {}, kRaw, {"connectives"},
                     kInc, "all connectives", [](const Context &c) {
                       return c.Inc(c.Matches(LexiconKind::kConnectives));
                     }));
  for (const char *cls : {"additive", "causal", "logical", "temporal"}) {
    for (const char *polarity : {"positive", "negative"}) {
      std::string tag = std::string(cls) + "_" + polarity;
      defs.push_back(Def("inc_" + tag + "_connectives", kText, {}, kRaw,
                         {"connectives"}, kInc, tag + " connectives",
                         [tag](const Context &c) {
                           return c.Inc(
                               c.Matches(LexiconKind::kConnectives, tag));
                         }));
    }
  }
  defs.push_back(Def("adjacent_anaphoric_references", kText, {}, kTagged,
                     {"pronouns"}, kApprox,
                     "adjacent pairs: third-person pronoun after a noun",
                     [](const Context &c) {
                       return c.PairFraction(
                           [&c](size_t i, size_t j) {
                             return ContainsThirdPersonPronoun(c, j) &&
                                    ContainsNoun(c, i);
                           },
                           true);
                     }));
  defs.push_back(Def("anaphoric_references", kText, {}, kTagged, {"pronouns"},
                     kApprox,
                     "sentences with a third-person pronoun and a noun in "
                     "the five preceding sentences",
                     [](const Context &c) {
                       if (c.sentences.size() < 2) return 0.0;
                       long hits = 0;
                       for (size_t j = 1; j < c.sentences.size(); ++j) {
                         if (!ContainsThirdPersonPronoun(c, j)) continue;
                         size_t from = j >= 5 ? j - 5 : 0;
                         for (size_t i = from; i < j; ++i) {
                           if (ContainsNoun(c, i)) {
                             ++hits;
                             break;
                           }
                         }
                       }
                       return double(hits) / double(c.sentences.size() - 1);
                     }));
  auto argument = [](const std::string &pos) {
    return pos == "NOUN" || pos == "PROPN" || pos == "PRON";
  };
  auto noun = [](const std::string &pos) {
    return pos == "NOUN" || pos == "PROPN";
  };
  auto shares = [](const std::set<std::string> &a,
                   const std::set<std::string> &b) {
    for (const std::string &x : a) {
      if (b.count(x)) return true;
    }
    return false;
  };
  for (bool adjacent : {true, false}) {
    std::string prefix = adjacent ? "adjacent_" : "";
    defs.push_back(Def(prefix + "argument_overlap", kText, {}, kTagged, {},
                       {}, "sentence pairs sharing a noun or pronoun lemma",
                       [=](const Context &c) {
                         auto sets = c.SentenceSets(argument);
                         return c.PairFraction(
                             [&](size_t i, size_t j) {
                               return shares(sets[i], sets[j]);
                             },
                             adjacent);
                       }));
    defs.push_back(Def(prefix + "stem_overlap", kText, {}, kTagged, {},
                       kApprox,
                       "sentence pairs where a noun stem meets a content "
                       "word stem",
                       [=](const Context &c) {
                         auto nouns = c.SentenceSets(noun, true);
                         auto content = c.SentenceSets(Context::IsContent, true);
                         return c.PairFraction(
                             [&](size_t i, size_t j) {
                               return shares(nouns[i], content[j]) ||
                                      shares(nouns[j], content[i]);
                             },
                             adjacent);
                       }));
  }
  defs.push_back(Def("adjacent_content_word_overlap", kText, {}, kTagged, {},
                     {}, "adjacent pairs sharing a content lemma",
                     [=](const Context &c) {
                       auto sets = c.SentenceSets(Context::IsContent);
                       return c.PairFraction(
                           [&](size_t i, size_t j) {
                             return shares(sets[i], sets[j]);
                           },
                           true);
                     }));
  defs.push_back(Def("inc_ambiguous_discourse_markers", kText, {}, kRaw,
                     {"discourse_markers"}, kInc,
                     "discourse markers tagged ambiguous",
                     [](const Context &c) {
                       return c.Inc(c.Matches(LexiconKind::kDiscourseMarkers,
                                              "ambiguous"));
                     }));
  defs.push_back(Def("discourse_marker_incidence", kText, {}, kRaw,
                     {"discourse_markers"}, kInc, "all discourse markers",
                     [](const Context &c) {
                       return c.Inc(c.Matches(LexiconKind::kDiscourseMarkers));
                     }));
  defs.push_back(Def("pronoun_incidence", kText, {}, kTagged, {}, kInc,
                     "tokens tagged PRON",
                     [](const Context &c) { return c.Inc(c.CountPos("PRON")); }));
  const std::pair<const char *, const char *> kPersons[] = {
      {"first", "first"}, {"second", "second"}, {"third", "third"}};
  for (const auto &[person, label] : kPersons) {
    for (bool possessive : {false, true}) {
      std::string tag =
          std::string(person) + (possessive ? "_possessive" : "_plain");
      std::string name = std::string("inc_") + label + "_person" +
                         (possessive ? "_possessive" : "") + "_pronouns";
      defs.push_back(Def(name, kText, {}, kRaw, {"pronouns"}, kInc,
                         tag + " pronouns", [tag](const Context &c) {
                           return c.Inc(c.Matches(LexiconKind::kPronouns, tag));
                         }));
    }
  }

  // Semantic and commonsense.
  defs.push_back(Def("inc_negative_words", kSem, {}, kRaw, {"negative_words"},
                     kInc, "negative sentiment words", [](const Context &c) {
                       return c.Inc(c.Matches(LexiconKind::kNegativeWords));
                     }));
  defs.push_back(Def("inc_positive_words", kSem, {}, kRaw, {"positive_words"},
                     kInc, "positive sentiment words", [](const Context &c) {
                       return c.Inc(c.Matches(LexiconKind::kPositiveWords));
                     }));
  const std::pair<std::optional<NamedEntity>, const char *> kEntities[] = {
      {NamedEntity::kHuman, "human"},
      {NamedEntity::kNonHumanAnimateMoving, "non_human_animate_moving"},
      {NamedEntity::kNonHumanAnimateNonMoving, "non_human_animate_non_moving"},
      {NamedEntity::kConcreteMoving, "concrete_moving"},
      {NamedEntity::kConcreteNonMoving, "concrete_non_moving"},
      {NamedEntity::kTopological, "topological"},
      {std::nullopt, "named"},
  };
  for (const auto &[which, label] : kEntities) {
    std::string base = std::string("inc_") + label + "_entities";
    std::optional<NamedEntity> w = which;
    defs.push_back(Def(base + "_in_sentences", kSem, {}, kTagged, {}, kInc,
                       std::string(label) + " entities per sentence",
                       [w](const Context &c) {
                         long total = 0;
                         for (long k : c.EntitiesPerSentence(w)) total += k;
                         return Ratio(total, c.s);
                       }));
    defs.push_back(Def(base + "_in_text", kSem, {}, kTagged, {}, kInc,
                       std::string(label) + " entities per incidence base",
                       [w](const Context &c) {
                         long total = 0;
                         for (long k : c.EntitiesPerSentence(w)) total += k;
                         return c.Inc(total);
                       }));
  }

  // Extensions.
  defs.push_back(Def("ext_simple_word_ratio", kLex, {}, kRaw, {"simple_words"},
                     {.extension = true},
                     "simple-word matches over word tokens",
                     [](const Context &c) {
                       return Ratio(c.Matches(LexiconKind::kSimpleWords), c.n);
                     }));
  return defs;
}

const std::vector<FeatureDef> &Definitions() {
  static const std::vector<FeatureDef> defs = BuildDefinitions();
  return defs;
}

bool HasResource(const ResourceSet &resources, const std::string &name) {
  if (name == "word_frequencies") return resources.frequencies.has_value();
  if (name == "sense_inventory") return resources.senses.has_value();
  std::optional<LexiconKind> kind = ParseLexiconKind(name);
  return kind && resources.Find(*kind) != nullptr;
}

// Computes the listed definitions into a vector over `schema`.
FeatureVector Evaluate(const AnnotatedDocument &doc,
                       const ResourceSet &resources,
                       const FeatureConfig &config,
                       const std::vector<const FeatureDef *> &defs,
                       std::shared_ptr<const FeatureSchema> schema) {
  if (config.incidence_base <= 0) {
    throw Error("invalid_config", "incidence base must be positive");
  }
  if (doc.WordCount() == 0) throw Error("no_words", "no words");
  Context context(doc, resources, config);
  FeatureVector out(std::move(schema));
  for (size_t i = 0; i < defs.size(); ++i) {
    const FeatureSpec &spec = defs[i]->spec;
    std::string missing;
    if (doc.depth < spec.required_depth) {
      missing = "annotation depth " +
                std::string(AnnotationDepthName(spec.required_depth));
    }
    for (const std::string &r : spec.required_resources) {
      if (!HasResource(resources, r)) missing = "resource " + r;
    }
    if (!missing.empty()) {
      if (config.fill == FillPolicy::kError) {
        throw Error("feature_unavailable",
                    "feature " + spec.name + " requires " + missing);
      }
      out.Set(i, 0.0, false);
      continue;
    }
    out.Set(i, defs[i]->compute(context), true);
  }
  return out;
}

}  // namespace

std::string_view FeatureCategoryName(FeatureCategory category) {
  switch (category) {
    case Category::kMorphological:
      return "morphological";
    case Category::kLexical:
      return "lexical";
    case Category::kSyntactic:
      return "syntactic";
    case Category::kTextual:
      return "textual";
    case Category::kPunctuation:
      return "punctuation";
    case Category::kSemanticCommonsense:
      return "semantic_commonsense";
  }
  return "unknown";
}

std::optional<FeatureCategory> ParseFeatureCategory(std::string_view name) {
  for (Category c : {Category::kMorphological, Category::kLexical,
                     Category::kSyntactic, Category::kTextual,
                     Category::kPunctuation, Category::kSemanticCommonsense}) {
    if (FeatureCategoryName(c) == name) return c;
  }
  return std::nullopt;
}

bool FeatureSpec::InCategory(FeatureCategory c) const {
  return category == c ||
         std::find(also_in.begin(), also_in.end(), c) != also_in.end();
}

const std::vector<FeatureSpec> &FeatureRegistry() {
  static const std::vector<FeatureSpec> specs = [] {
    std::vector<FeatureSpec> v;
    for (const FeatureDef &d : Definitions()) v.push_back(d.spec);
    return v;
  }();
  return specs;
}

const FeatureSpec *FindFeature(std::string_view name) {
  auto index = FeatureSchema::Registry()->Find(name);
  return index ? &FeatureRegistry()[*index] : nullptr;
}

const std::vector<std::string> &SimpleStatisticNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const FeatureSpec &s : FeatureRegistry()) {
      if (s.simple_statistic) v.push_back(s.name);
    }
    return v;
  }();
  return names;
}

std::shared_ptr<const FeatureSchema> FeatureSchema::Make(
    std::vector<std::string> names) {
  auto schema = std::shared_ptr<FeatureSchema>(new FeatureSchema);
  for (size_t i = 0; i < names.size(); ++i) {
    if (!schema->index_.emplace(names[i], i).second) {
      throw Error("duplicate_feature", "duplicate feature name " + names[i]);
    }
  }
  schema->names_ = std::move(names);
  return schema;
}

std::shared_ptr<const FeatureSchema> FeatureSchema::Registry() {
  static const std::shared_ptr<const FeatureSchema> schema = [] {
    std::vector<std::string> names;
    for (const FeatureDef &d : Definitions()) names.push_back(d.spec.name);
    return Make(std::move(names));
  }();
  return schema;
}

std::optional<size_t> FeatureSchema::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FeatureVector::FeatureVector(std::shared_ptr<const FeatureSchema> schema)
    : schema_(std::move(schema)),
      values_(schema_->size(), 0.0),
      available_(schema_->size(), 1) {}

double FeatureVector::Value(std::string_view name) const {
  auto i = schema_->Find(name);
  if (!i) throw Error("unknown_feature", "unknown feature " + std::string(name));
  return values_[*i];
}

bool FeatureVector::Available(std::string_view name) const {
  auto i = schema_->Find(name);
  if (!i) throw Error("unknown_feature", "unknown feature " + std::string(name));
  return available_[*i] != 0;
}

bool FeatureVector::AllAvailable() const {
  return std::all_of(available_.begin(), available_.end(),
                     [](char a) { return a != 0; });
}

void FeatureVector::Set(size_t i, double value, bool available) {
  values_[i] = value;
  available_[i] = available ? 1 : 0;
}

void FeatureVector::Set(std::string_view name, double value, bool available) {
  auto i = schema_->Find(name);
  if (!i) throw Error("unknown_feature", "unknown feature " + std::string(name));
  Set(*i, value, available);
}

bool FeatureVector::operator==(const FeatureVector &other) const {
  if ((schema_ == nullptr) != (other.schema_ == nullptr)) return false;
  if (schema_ && schema_->names() != other.schema_->names()) return false;
  return values_ == other.values_ && available_ == other.available_;
}

int CountSyllablesOrZero(std::string_view word) {
  return CountVowels(word) == 0 ? 0 : CountSyllables(word);
}

std::string ApproximateStem(std::string_view word) {
  std::u32string cps = utf8::Decode(utf8::ToLower(word));
  if (cps.size() > 5) cps.resize(5);
  return utf8::Encode(cps);
}

double FleschReadingEase(double words_per_sentence, double syllables_per_word,
                         const FeatureConfig &config) {
  return config.flesch.a - config.flesch.b * words_per_sentence -
         config.flesch.c * syllables_per_word;
}

double FleschKincaidGrade(double words_per_sentence, double syllables_per_word,
                          const FeatureConfig &config) {
  return config.flesch_kincaid.a * words_per_sentence +
         config.flesch_kincaid.b * syllables_per_word - config.flesch_kincaid.c;
}

namespace {

struct Ratios {
  double words_per_sentence;
  double syllables_per_word;
};

Ratios ReadabilityRatios(const AnnotatedDocument &doc) {
  long words = 0;
  long syllables = 0;
  for (const Token *t : doc.Words()) {
    ++words;
    syllables += CountSyllablesOrZero(t->surface);
  }
  long sentences = doc.SentenceCount();
  if (words == 0 || sentences == 0) throw Error("no_words", "no words");
  return {double(words) / double(sentences), double(syllables) / double(words)};
}

}  // namespace

double FleschReadingEase(const AnnotatedDocument &doc,
                         const FeatureConfig &config) {
  Ratios r = ReadabilityRatios(doc);
  return FleschReadingEase(r.words_per_sentence, r.syllables_per_word, config);
}

double FleschKincaidGrade(const AnnotatedDocument &doc,
                          const FeatureConfig &config) {
  Ratios r = ReadabilityRatios(doc);
  return FleschKincaidGrade(r.words_per_sentence, r.syllables_per_word, config);
}

double Incidence(long count, long word_total, const FeatureConfig &config) {
  if (word_total <= 0) {
    throw Error("no_words", "incidence over zero words");
  }
  return static_cast<double>(count) * config.incidence_base /
         static_cast<double>(word_total);
}

HonoreResult HonoreStatistic(long tokens, long types, long hapax, double cap) {
  if (tokens <= 0 || types <= 0) throw Error("no_words", "no words");
  if (hapax >= types) return {cap, true};
  double v = 100.0 * std::log(double(tokens)) /
             (1.0 - double(hapax) / double(types));
  return {v, false};
}

HonoreResult HonoreStatistic(const AnnotatedDocument &doc,
                             const FeatureConfig &config) {
  std::map<std::string, long> counts;
  long tokens = 0;
  for (const Token *t : doc.Words()) {
    ++counts[utf8::ToLower(t->surface)];
    ++tokens;
  }
  long hapax = 0;
  for (const auto &[w, k] : counts) hapax += k == 1 ? 1 : 0;
  return HonoreStatistic(tokens, long(counts.size()), hapax,
                         config.honore_cap);
}

double BrunetIndex(long tokens, long types) {
  if (tokens <= 0 || types <= 0) throw Error("no_words", "no words");
  return std::pow(double(tokens), std::pow(double(types), -0.165));
}

double BrunetIndex(const AnnotatedDocument &doc) {
  std::set<std::string> types;
  long tokens = 0;
  for (const Token *t : doc.Words()) {
    types.insert(utf8::ToLower(t->surface));
    ++tokens;
  }
  return BrunetIndex(tokens, long(types.size()));
}

FeatureVector ExtractSimpleStatistics(const AnnotatedDocument &doc,
                                      const Lexicon &simple_words,
                                      const FeatureConfig &config) {
  ResourceSet resources;
  resources.lexicons.emplace(LexiconKind::kSimpleWords, simple_words);
  std::vector<const FeatureDef *> defs;
  for (const FeatureDef &d : Definitions()) {
    if (d.spec.simple_statistic) defs.push_back(&d);
  }
  static const auto schema = FeatureSchema::Make(SimpleStatisticNames());
  return Evaluate(doc, resources, config, defs, schema);
}

FeatureVector ExtractCategory(const AnnotatedDocument &doc,
                              FeatureCategory category,
                              const ResourceSet &resources,
                              const FeatureConfig &config) {
  std::vector<const FeatureDef *> defs;
  std::vector<std::string> names;
  for (const FeatureDef &d : Definitions()) {
    if (!d.spec.InCategory(category)) continue;
    defs.push_back(&d);
    names.push_back(d.spec.name);
  }
  return Evaluate(doc, resources, config, defs,
                  FeatureSchema::Make(std::move(names)));
}

FeatureVector ExtractAll(const AnnotatedDocument &doc,
                         const ResourceSet &resources,
                         const FeatureConfig &config) {
  std::vector<const FeatureDef *> defs;
  for (const FeatureDef &d : Definitions()) defs.push_back(&d);
  return Evaluate(doc, resources, config, defs, FeatureSchema::Registry());
}

}  // namespace readlevel
