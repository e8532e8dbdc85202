// Copyright 2026 The kinpgm Authors.
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

#ifndef KINPGM_EXTRACTION_HPP_
#define KINPGM_EXTRACTION_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kinpgm/gender.hpp"
#include "kinpgm/lexicon.hpp"
#include "kinpgm/relation.hpp"
#include "kinpgm/world_model.hpp"

namespace kinpgm {

/// Someone referred to in an utterance, before grounding.
struct ParsedMention {
  enum class Kind {
    Narrator,     // "I", "me", "my"
    Name,         // "Sam"
    Description,  // "my father", "Sam's wife", "my mother's husband"
    Indefinite,   // "a brother" in "I have a brother"; always someone new
  };
  Kind kind = Kind::Narrator;
  // Name: the name as written (first letter capitalised).
  std::string name;
  // Description/Indefinite: holder bears `atom` to the anchor mention.
  std::optional<std::size_t> anchor;
  Relation atom = Relation::OutOfGraph;
  Gender gender = Gender::Unknown;
  std::string text;

  friend bool operator==(const ParsedMention&, const ParsedMention&) = default;
};

enum class AnswerToken {
  Yes,
  No,
  Same,
  Different,
  DontKnow,
  Number,
  Name,
  RelationWord,
  GenderWord,
};

struct ExtractedFact {
  enum class Kind {
    RelationTriple,   // holder is the `atom` of anchor
    NameBinding,      // holder is called `name`
    GenderBinding,    // holder has `gender`
    AnswerCandidate,  // a bare reply such as "yes" or "Susan"
    Unparseable,
  };
  Kind kind = Kind::Unparseable;
  std::size_t holder = 0;
  std::size_t anchor = 0;
  Relation atom = Relation::OutOfGraph;
  // Triple: gender the relation word implies for the holder.
  // GenderBinding/GenderWord/RelationWord: the gender stated.
  Gender gender = Gender::Unknown;
  std::string name;
  AnswerToken answer = AnswerToken::Yes;
  std::size_t number = 0;
  std::string span;

  friend bool operator==(const ExtractedFact&, const ExtractedFact&) = default;
};

struct ParsedUtterance {
  std::vector<ParsedMention> mentions;
  std::vector<ExtractedFact> facts;
  std::vector<std::string> clauses;

  /// The lone answer candidate when the utterance is exactly one bare reply.
  std::optional<ExtractedFact> bare_answer() const;
  /// True when some clause states a relation, name or gender.
  bool has_statements() const;

  friend bool operator==(const ParsedUtterance&,
                         const ParsedUtterance&) = default;
};

/// Deterministic pattern matcher. Clauses are split on sentence punctuation,
/// ';' and "and"; each clause is matched independently and unmatched clauses
/// come back as Unparseable facts.
ParsedUtterance parse_utterance(std::string_view text,
                                const RelationLexicon& relations);

/// Splits on . ! ? ; and the word "and". Empty clauses are dropped.
std::vector<std::string> split_clauses(std::string_view text);

/// Mentions grouped into one entity per utterance: same name, or the same
/// definite description. Indefinites only join a group through a name.
struct MentionGroups {
  std::vector<std::size_t> group_of;
  std::vector<std::vector<std::size_t>> members;
};
MentionGroups group_mentions(const ParsedUtterance& u);

/// Bare name or description that matches more than one known entity.
struct Clarification {
  std::size_t group = 0;
  std::string text;
  std::vector<EntityId> candidates;
};

struct GroundingPlan {
  MentionGroups groups;
  // Per group: an existing entity, or nullopt for someone new.
  std::vector<std::optional<EntityId>> entity;
  std::optional<Clarification> ambiguity;
};

/// Choices made by the user, keyed by the lower-cased mention text of the
/// ambiguous phrase: an entity, or nullopt for someone new.
using ForcedChoices = std::map<std::string, std::optional<EntityId>>;

/// Keeps only the facts whose span is not in `spans`, and the mentions they
/// still refer to.
ParsedUtterance without_spans(const ParsedUtterance& u,
                              const std::set<std::string>& spans);

/// Grounds each mention group against `world`. Narrator mentions map to
/// `narrator`; descriptions to the unique entity whose edge to the anchor is
/// exactly that atom with a compatible gender; names to the unique entity
/// with that name. Resolution stops at the first ambiguous group.
GroundingPlan resolve_mentions(const ParsedUtterance& u,
                               const WorldModel& world, EntityId narrator,
                               const ForcedChoices& forced = {});

/// "susan" -> "Susan".
std::string capitalise(std::string_view name);

}  // namespace kinpgm

#endif  // KINPGM_EXTRACTION_HPP_
