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

#ifndef KINPGM_WORLD_MODEL_HPP_
#define KINPGM_WORLD_MODEL_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kinpgm/composition_table.hpp"
#include "kinpgm/gender.hpp"
#include "kinpgm/relation.hpp"

namespace kinpgm {

using EntityId = std::uint32_t;
using MentionId = std::uint64_t;

/// A piece of text that was grounded to an entity.
struct Mention {
  MentionId id = 0;
  std::uint64_t utterance = 0;
  std::string text;

  friend bool operator==(const Mention&, const Mention&) = default;
};

struct Entity {
  EntityId id = 0;
  std::set<std::string> names;
  Gender gender = Gender::Unknown;
  bool narrator = false;
  std::vector<Mention> mentions;

  bool has_mention(MentionId m) const;
  friend bool operator==(const Entity&, const Entity&) = default;
};

/// Canonical undirected key; the stored set reads "lo is the R of hi".
struct EdgeKey {
  EntityId lo = 0;
  EntityId hi = 0;

  static EdgeKey of(EntityId a, EntityId b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
  }
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

struct Contradiction {
  enum class Kind { EmptyEdge, GenderConflict, Precondition };
  Kind kind = Kind::EmptyEdge;
  // The pair whose edge set emptied; for a gender conflict both are the
  // entity whose gender clashed.
  EntityId a = 0;
  EntityId b = 0;
  // Edge set (a -> b) just before the step that emptied it.
  RelationSet before;
  // Human-readable description of the mutation that was refused.
  std::string trigger;
  // Log indices of accepted entries touching a or b, most recent last.
  std::vector<std::size_t> support;

  std::string explain() const;
};

template <class T>
class [[nodiscard]] Result {
 public:
  Result(T value) : v_(std::move(value)) {}
  Result(Contradiction c) : v_(std::move(c)) {}

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    if (!ok()) throw std::logic_error("Result holds a contradiction");
    return std::get<0>(v_);
  }
  const Contradiction& contradiction() const {
    if (ok()) throw std::logic_error("Result holds a value");
    return std::get<1>(v_);
  }

 private:
  std::variant<T, Contradiction> v_;
};

struct PropagationOutcome {
  std::vector<EdgeKey> changed_edges;
  std::vector<EntityId> gender_changes;
  std::size_t clique_updates = 0;
};

struct PropagationOptions {
  // When set, the worklist is popped in a pseudo-random order drawn from
  // this seed instead of FIFO.
  std::optional<std::uint64_t> shuffle_seed;
};

enum class CliqueOrder { IkFirst, JkFirst };

struct CliqueChange {
  bool ik_changed = false;
  bool jk_changed = false;
};

/// One replayable record of an accepted mutation.
struct LogEntry {
  enum class Kind { Entity, Assert, Gender, Name, Merge, Split };
  Kind kind = Kind::Entity;
  // Entity/Gender/Name: the entity. Assert: holder. Merge: survivor.
  // Split: the entity that was split.
  EntityId a = 0;
  // Assert: anchor. Merge: absorbed entity. Split: the new entity.
  EntityId b = 0;
  RelationSet relations;
  Gender gender = Gender::Unknown;
  bool narrator = false;
  std::string name;
  // Mention that grounded `a` (and `b` for assertions).
  std::optional<Mention> mention;
  std::optional<Mention> mention_b;
  // Split: mentions moved to the new entity.
  std::vector<MentionId> moved;

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

std::string_view name_of(LogEntry::Kind k);
std::optional<LogEntry::Kind> log_kind_from_name(std::string_view name);

class InvalidTableError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The possibilistic graph: entities, one relation set per pair inside a
/// component, and the log of accepted mutations.
///
/// Every mutating call is transactional. On success the model is stable
/// (each edge set is contained in the composition of the other two edges of
/// every triangle) and one entry is appended to the log. On contradiction the
/// model is left exactly as it was. Contract violations (unknown ids,
/// a == b, a second narrator) throw std::invalid_argument.
///
/// Single writer; copies are independent and cheap at household scale.
class WorldModel {
 public:
  /// Throws InvalidTableError when the table fails check_axioms.
  explicit WorldModel(std::shared_ptr<const CompositionTable> table);

  EntityId add_entity(std::optional<std::string> name = std::nullopt,
                      Gender gender = Gender::Unknown, bool narrator = false,
                      std::optional<Mention> mention = std::nullopt);

  /// Intersects the (a, b) edge with `constraint`, joining components when
  /// a and b are not yet connected.
  Result<PropagationOutcome> assert_relation(
      EntityId a, RelationSet constraint, EntityId b,
      std::optional<Mention> mention_a = std::nullopt,
      std::optional<Mention> mention_b = std::nullopt);

  /// Definite genders run the gender rules; probable ones only annotate an
  /// entity whose gender is not yet definite.
  Result<PropagationOutcome> set_gender(
      EntityId e, Gender g, std::optional<Mention> mention = std::nullopt);

  void add_name(EntityId e, const std::string& name,
                std::optional<Mention> mention = std::nullopt);

  /// Identifies a and b. Asserts Self between them first if needed. The
  /// lower id survives.
  Result<EntityId> merge_entities(EntityId a, EntityId b);

  /// Rebuilds the model by log replay with the assertions grounded through
  /// `moved` re-attributed to a new entity. Throws std::invalid_argument when
  /// e has fewer than two mentions or the partition is trivial.
  Result<std::pair<EntityId, EntityId>> split_entity(
      EntityId e, const std::set<MentionId>& moved);

  // Inference building blocks. These act on the edge store directly: they do
  // not log, bump the version or roll back on failure.

  Result<CliqueChange> update_clique(EntityId i, EntityId j, EntityId k,
                                     CliqueOrder order = CliqueOrder::IkFirst);
  Result<PropagationOutcome> propagate(std::vector<EdgeKey> dirty,
                                       const PropagationOptions& options = {});
  Result<PropagationOutcome> join_components(
      EntityId a, EntityId b, RelationSet seed,
      const PropagationOptions& options = {});
  /// Writes an edge set with no inference; connects the two components with
  /// full sets if needed. For constructing test graphs.
  void set_edge_unchecked(EntityId a, EntityId b, RelationSet s);

  // Queries.

  /// Relations a may bear to b; nullopt when they share no component.
  std::optional<RelationSet> possible_relations(EntityId a, EntityId b) const;
  bool is_stable() const;

  bool has_entity(EntityId e) const { return state_.entities.count(e) != 0; }
  const Entity& entity(EntityId e) const;
  const std::map<EntityId, Entity>& entities() const { return state_.entities; }
  const std::map<EdgeKey, RelationSet>& edges() const { return state_.edges; }
  /// Component id is the smallest entity id in the component.
  EntityId component_of(EntityId e) const;
  const std::vector<EntityId>& component_members(EntityId e) const;
  std::vector<EntityId> component_ids() const;
  std::optional<EntityId> narrator() const;

  const std::vector<LogEntry>& log() const { return log_; }
  /// Number of accepted mutations; strictly increases with each one.
  std::uint64_t version() const { return log_.size(); }
  const std::shared_ptr<const CompositionTable>& table() const {
    return table_;
  }

  /// Sum of edge-set cardinalities over all stored edges.
  std::size_t total_cardinality() const;

  /// Builds a model by applying `log` in order.
  static Result<WorldModel> replay(std::shared_ptr<const CompositionTable> table,
                                   const std::vector<LogEntry>& log);

  /// Entities, edges and components equal (log and version ignored).
  bool same_state(const WorldModel& other) const {
    return state_ == other.state_;
  }

 private:
  struct State {
    std::map<EntityId, Entity> entities;
    std::map<EdgeKey, RelationSet> edges;
    std::map<EntityId, EntityId> component;
    std::map<EntityId, std::vector<EntityId>> members;
    EntityId next_id = 0;
    friend bool operator==(const State&, const State&) = default;
  };

  struct Worklist;

  // Skips the axiom check; for rebuilding from a table already accepted.
  WorldModel(std::shared_ptr<const CompositionTable> table, int /*trusted*/)
      : table_(std::move(table)) {}

  RelationSet rel(EntityId a, EntityId b) const;
  void put(EntityId a, EntityId b, RelationSet s);
  Entity& mutable_entity(EntityId e);
  void require_entity(EntityId e) const;
  void connect(EntityId a, EntityId b);

  void create_entity(EntityId id, std::optional<std::string> name,
                     Gender gender, bool narrator,
                     std::optional<Mention> mention);
  void attach_mention(EntityId e, const std::optional<Mention>& m);

  PropagationOutcome run_propagation(Worklist& work,
                                     const PropagationOptions& options);
  CliqueChange clique_step(EntityId i, EntityId j, EntityId k,
                           CliqueOrder order);
  bool apply_gender_rules(EntityId x, EntityId y, Worklist& work,
                          PropagationOutcome& out);
  void assign_gender(EntityId e, Gender g);

  void do_assert(EntityId a, RelationSet constraint, EntityId b,
                 PropagationOutcome& out);
  void do_set_gender(EntityId e, Gender g, PropagationOutcome& out);
  EntityId do_merge(EntityId a, EntityId b);
  void do_split(EntityId e, EntityId new_id, const std::set<MentionId>& moved);

  void apply(const LogEntry& entry);
  std::vector<std::size_t> support_for(EntityId a, EntityId b) const;

  std::shared_ptr<const CompositionTable> table_;
  State state_;
  std::vector<LogEntry> log_;
};

}  // namespace kinpgm

#endif  // KINPGM_WORLD_MODEL_HPP_
