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

#ifndef KINPGM_SESSION_HPP_
#define KINPGM_SESSION_HPP_

#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kinpgm/composition_table.hpp"
#include "kinpgm/dialog.hpp"
#include "kinpgm/extraction.hpp"
#include "kinpgm/lexicon.hpp"
#include "kinpgm/world_model.hpp"

namespace kinpgm {

class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SessionConfig {
  std::shared_ptr<const CompositionTable> table;
  std::shared_ptr<const RelationLexicon> relations;
  std::shared_ptr<const NameLexicon> names;
  // Shared by all sessions of a deployment; may be null.
  std::shared_ptr<ParaphraseStore> paraphrases;
};

struct TranscriptItem {
  enum class Speaker { User, System };
  Speaker speaker = Speaker::User;
  std::string text;

  friend bool operator==(const TranscriptItem&, const TranscriptItem&) = default;
};

struct SayResult {
  std::vector<std::string> replies;
  std::optional<Question> question;
  std::uint64_t graph_version = 0;
};

struct GraphSnapshot {
  struct Node {
    EntityId id = 0;
    std::vector<std::string> names;
    Gender gender = Gender::Unknown;
    bool narrator = false;
    EntityId component = 0;
    friend bool operator==(const Node&, const Node&) = default;
  };
  struct Edge {
    // Reads "a is the R of b" for each atom.
    EntityId a = 0;
    EntityId b = 0;
    std::vector<Relation> atoms;
    bool ambiguous = false;
    friend bool operator==(const Edge&, const Edge&) = default;
  };
  std::vector<Node> entities;
  std::vector<Edge> edges;
  std::vector<EntityId> components;
  std::uint64_t version = 0;

  friend bool operator==(const GraphSnapshot&, const GraphSnapshot&) = default;
};

GraphSnapshot snapshot_of(const WorldModel& w);
std::string to_json(const GraphSnapshot& s);
/// id, kind, text, options, template.
std::string to_json(const Question& q);

/// One conversation: a world model with a narrator, the transcript and at
/// most one pending question. Not thread-safe; callers serialise access.
class Session {
 public:
  Session(std::string id, SessionConfig config);

  const std::string& id() const { return id_; }
  const std::string& created() const { return created_; }

  /// Handles one user turn: an answer to the pending question, or new
  /// statements. Contradictions come back as ordinary replies.
  SayResult say(std::string_view text);

  GraphSnapshot snapshot() const { return snapshot_of(world_); }
  /// Throws std::invalid_argument for unknown ids.
  std::optional<RelationSet> relations(EntityId a, EntityId b) const;

  const WorldModel& world() const { return world_; }
  EntityId narrator() const { return narrator_; }
  const std::optional<Question>& pending_question() const { return pending_; }
  const std::vector<TranscriptItem>& transcript() const { return transcript_; }
  const SessionConfig& config() const { return config_; }

  std::string to_json() const;
  /// Throws SessionError on malformed input or a log that does not replay.
  static Session from_json(std::string_view text, SessionConfig config);
  void save(const std::filesystem::path& path) const;
  static Session load(const std::filesystem::path& path, SessionConfig config);

 private:
  // An assertion that was refused and may be retried after a repair.
  struct Fact {
    EntityId holder = 0;
    EntityId anchor = 0;
    Relation atom = Relation::OutOfGraph;
    Gender gender = Gender::Unknown;
    bool gender_only = false;
    std::optional<Mention> holder_mention;
    std::optional<Mention> anchor_mention;
    std::string span;
  };
  struct Repair {
    enum class Kind { Split, Clarify };
    Kind kind = Kind::Split;
    std::uint64_t question_id = 0;
    // Split: move `moved` off `entity`; the holder side when `holder_side`.
    EntityId entity = 0;
    MentionId moved = 0;
    bool holder_side = true;
    Fact fact;
    // Clarify: the utterance, its user-turn index and choices made so far.
    std::string utterance;
    std::uint64_t utterance_index = 0;
    ForcedChoices forced;
    std::string phrase;
    std::vector<EntityId> candidates;
  };

  enum class Outcome { Accepted, Repair, Refused };

  // A clause that cannot be accepted is dropped and the rest of the
  // utterance is applied again from the state before it.
  void process_statements(const ParsedUtterance& u, const ForcedChoices& forced,
                          std::uint64_t utterance_index,
                          const std::string& utterance,
                          std::vector<std::string>& replies);
  // Spans of the clauses that were refused outright.
  std::set<std::string> ground_and_apply(const ParsedUtterance& u,
                                         const ForcedChoices& forced,
                                         std::uint64_t utterance_index,
                                         const std::string& utterance,
                                         std::vector<std::string>& replies,
                                         std::vector<std::string>& refusals);
  Outcome apply_fact(Fact f, bool allow_repair,
                     std::vector<std::string>& replies);
  // "Susan and your daughter": name first, then relation.
  std::string pair_phrase(EntityId x, EntityId y) const;
  void refuse(const Fact& f, const Contradiction& c,
              std::vector<std::string>& replies) const;
  void apply_answer(const Question& q, const Answer& a,
                    std::vector<std::string>& replies);
  void hint_gender(EntityId e, const std::string& name,
                   const std::optional<Mention>& m);
  void auto_merge(std::vector<std::string>& replies);
  std::optional<Question> ask_next();
  Mention new_mention(std::uint64_t utterance, std::string text);
  std::uint64_t user_turns() const;
  std::string utterance_text(std::uint64_t index) const;

  std::string id_;
  SessionConfig config_;
  std::string created_;
  WorldModel world_;
  EntityId narrator_ = 0;
  std::vector<TranscriptItem> transcript_;
  std::optional<Question> pending_;
  std::optional<std::string> failed_text_;
  std::set<std::string> declined_;
  std::deque<Repair> repairs_;
  MentionId next_mention_ = 1;
  std::uint64_t next_question_id_ = 1;
};

}  // namespace kinpgm

#endif  // KINPGM_SESSION_HPP_
