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

#ifndef KINPGM_SOUNDNESS_HPP_
#define KINPGM_SOUNDNESS_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kinpgm/composition_table.hpp"
#include "kinpgm/genealogy.hpp"
#include "kinpgm/world_model.hpp"

namespace kinpgm::oracle {

/// One true statement about a genealogy: relation(a, b).
struct Fact {
  PersonId a = 0;
  PersonId b = 0;
  Relation relation = Relation::OutOfGraph;
};

/// Every person-pair fact with a named (non OutOfGraph) atom, a < b.
std::vector<Fact> named_facts(const Genealogy& g);

/// Parent and spouse links only, each reported once.
std::vector<Fact> parent_spouse_facts(const Genealogy& g);

/// A world mirroring a genealogy: one entity per person.
struct GroundedWorld {
  WorldModel world;
  std::map<PersonId, EntityId> entity_of;
};

/// Creates one entity per person (optionally with its true sex as a definite
/// gender) and asserts each fact as a singleton. Returns nullopt if any
/// assertion was refused, which a sound table never does for true facts.
std::optional<GroundedWorld> build_world(
    std::shared_ptr<const CompositionTable> table, const Genealogy& g,
    const std::vector<Fact>& facts, bool with_genders);

struct SoundnessViolation {
  PersonId a = 0;
  PersonId b = 0;
  Relation truth = Relation::OutOfGraph;
  RelationSet edge;

  std::string describe() const;
};

struct SoundnessReport {
  std::vector<SoundnessViolation> violations;
  bool empty() const { return violations.empty(); }
};

/// Every entity pair sharing a component must still admit its true atom.
SoundnessReport soundness_check(const Genealogy& g,
                                const std::map<PersonId, EntityId>& entity_of,
                                const WorldModel& world);

}  // namespace kinpgm::oracle

#endif  // KINPGM_SOUNDNESS_HPP_
