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

#include "kinpgm/soundness.hpp"

#include <sstream>

namespace kinpgm::oracle {

std::vector<Fact> named_facts(const Genealogy& g) {
  std::vector<Fact> out;
  for (PersonId a = 0; a < g.size(); ++a) {
    for (PersonId b = a + 1; b < g.size(); ++b) {
      const Relation r = classify_pair(g, a, b);
      if (r != Relation::OutOfGraph) out.push_back({a, b, r});
    }
  }
  return out;
}

std::vector<Fact> parent_spouse_facts(const Genealogy& g) {
  std::vector<Fact> out;
  for (const Person& p : g.people()) {
    if (p.father) out.push_back({*p.father, p.id, Relation::Parent});
    if (p.mother) out.push_back({*p.mother, p.id, Relation::Parent});
    if (p.spouse && p.id < *p.spouse) {
      out.push_back({p.id, *p.spouse, Relation::Spouse});
    }
  }
  return out;
}

std::optional<GroundedWorld> build_world(
    std::shared_ptr<const CompositionTable> table, const Genealogy& g,
    const std::vector<Fact>& facts, bool with_genders) {
  GroundedWorld gw{WorldModel(std::move(table)), {}};
  for (const Person& p : g.people()) {
    const Gender gender = !with_genders      ? Gender::Unknown
                          : p.sex == Sex::Male ? Gender::Male
                                               : Gender::Female;
    gw.entity_of[p.id] =
        gw.world.add_entity("P" + std::to_string(p.id), gender);
  }
  for (const Fact& f : facts) {
    const auto r = gw.world.assert_relation(
        gw.entity_of.at(f.a), {f.relation}, gw.entity_of.at(f.b));
    if (!r) return std::nullopt;
  }
  return gw;
}

std::string SoundnessViolation::describe() const {
  std::ostringstream os;
  os << "persons " << a << " and " << b << ": true relation " << truth
     << " missing from " << edge.to_string();
  return os.str();
}

SoundnessReport soundness_check(const Genealogy& g,
                                const std::map<PersonId, EntityId>& entity_of,
                                const WorldModel& world) {
  SoundnessReport report;
  for (const auto& [pa, ea] : entity_of) {
    for (const auto& [pb, eb] : entity_of) {
      if (pa >= pb) continue;
      const auto edge = world.possible_relations(ea, eb);
      if (!edge) continue;
      const Relation truth = classify_pair(g, pa, pb);
      if (!edge->contains(truth)) {
        report.violations.push_back({pa, pb, truth, *edge});
      }
    }
  }
  return report;
}

}  // namespace kinpgm::oracle
