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

#ifndef KINPGM_DIALOG_HPP_
#define KINPGM_DIALOG_HPP_

#include <cstdint>
#include <filesystem>
#include <mutex>
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

enum class QuestionKind {
  ChooseRelation,
  YesNoSelf,
  YesNoRelation,
  AskGender,
  AskName,
  ConfirmSplit,
  ClarifyMention,
};

/// "choose-relation", "yes-no-self", ...
std::string_view name_of(QuestionKind k);
std::optional<QuestionKind> question_kind_from_name(std::string_view name);

/// Paraphrases without names are shared by every question of a family:
/// "yes-no" covers the three yes/no kinds.
std::string_view family_of(QuestionKind k);

struct Question {
  std::uint64_t id = 0;
  QuestionKind kind = QuestionKind::ChooseRelation;
  // Pair questions ask how a relates to b. Entity questions use a only.
  // ConfirmSplit: a is the entity to split, b the anchor of the refused fact.
  EntityId a = 0;
  EntityId b = 0;
  std::vector<Relation> candidates;  // ChooseRelation
  Relation atom = Relation::OutOfGraph;  // YesNoRelation; ConfirmSplit refused
  // AskGender: the probable gender, if any. ConfirmSplit: refused gender.
  Gender gender = Gender::Unknown;
  std::vector<MentionId> partition;  // ConfirmSplit: mentions to move
  // ClarifyMention: the phrase and its candidates; nullopt is "someone new".
  std::string phrase;
  std::vector<std::optional<EntityId>> choices;

  // Filled by render().
  std::string text;
  std::vector<std::string> options;
  std::vector<std::string> slot_names;  // substituted for {X}, {Y}
  std::string template_id;

  friend bool operator==(const Question&, const Question&) = default;
};

/// Fills text, options, slot names and template id from the other fields.
void render(Question& q, const WorldModel& w, const RelationLexicon& lex);

/// How an entity is referred to in questions, e.g. "Susan" or
/// "your daughter". Prefers the name when it is unique.
std::string describe(const WorldModel& w, const RelationLexicon& lex,
                     EntityId e, bool prefer_relation = false);

struct Answer {
  enum class Value { Yes, No, Atom, Name, Gender, Choice, Declined, Unknown };
  enum class Provenance { Direct, Paraphrase };
  Value value = Value::Unknown;
  Provenance provenance = Provenance::Direct;
  Relation atom = Relation::OutOfGraph;
  Gender gender = Gender::Unknown;
  std::string name;
  std::size_t choice = 0;  // 0-based

  bool known() const { return value != Value::Unknown; }
  /// "yes", "no", "atom:Child", "gender:female", "name:Susan", "choice:2",
  /// "declined", "unknown".
  std::string canonical() const;
  static std::optional<Answer> from_canonical(std::string_view s);

  friend bool operator==(const Answer&, const Answer&) = default;
};

struct ParaphraseEntry {
  std::string context;  // a template id, or "kind:<family>"
  std::string pattern;  // names replaced by {X}, {Y}, {NAME}
  std::string answer;   // Answer::canonical(), possibly "name:{NAME}"

  friend bool operator==(const ParaphraseEntry&, const ParaphraseEntry&) = default;
};

/// Learned reply paraphrases, optionally backed by a tab-separated file
/// (context, pattern, answer per line). Thread-safe; a later entry with the
/// same context and pattern replaces the earlier one.
class ParaphraseStore {
 public:
  ParaphraseStore() = default;
  /// Loads `file` if it exists; later additions are appended to it.
  explicit ParaphraseStore(std::filesystem::path file);

  void add(ParaphraseEntry entry);
  std::vector<ParaphraseEntry> entries() const;
  std::size_t size() const;

  /// Answer for `text` given q: its template first, then its family.
  std::optional<Answer> lookup(const Question& q, std::string_view text) const;

 private:
  mutable std::mutex mu_;
  std::optional<std::filesystem::path> file_;
  std::vector<ParaphraseEntry> entries_;
};

/// Mean over atoms r of the edge of the total edge-set cardinality after
/// asserting {r}; 0 for an atom that would be refused. Throws
/// std::invalid_argument when the edge has fewer than two atoms.
double score_edge(const WorldModel& w, EntityId a, EntityId b);

/// Keys for declined questions.
std::string decline_key(const Question& q);

/// The most useful question about the model, or nothing when every edge is
/// resolved. Order: names of unnamed entities that could be someone else,
/// genders blocking a Spouse/Self edge, then the relation question with the
/// lowest score (ties: nearer the narrator, fewer atoms, lowest ids).
std::optional<Question> next_question(const WorldModel& w,
                                      std::optional<EntityId> narrator,
                                      const std::set<std::string>& declined,
                                      const RelationLexicon& lex);

/// Direct reading first (bare replies and question-specific forms), then
/// the paraphrase store, else Unknown.
Answer interpret_answer(const Question& q, std::string_view text,
                        const RelationLexicon& lex,
                        const ParaphraseStore* store);

/// Records that `failed_text` meant `followup` in the context of q. Returns
/// the stored entry, or nothing when the followup is not a usable answer.
std::optional<ParaphraseEntry> learn_paraphrase(const Question& q,
                                                std::string_view failed_text,
                                                const Answer& followup,
                                                ParaphraseStore& store);

}  // namespace kinpgm

#endif  // KINPGM_DIALOG_HPP_
