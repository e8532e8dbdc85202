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

#ifndef KINPGM_GENEALOGY_HPP_
#define KINPGM_GENEALOGY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kinpgm/relation.hpp"

namespace kinpgm::oracle {

using PersonId = std::size_t;

enum class Sex { Male, Female };

struct Person {
  PersonId id = 0;
  Sex sex = Sex::Male;
  std::optional<PersonId> father;
  std::optional<PersonId> mother;
  std::optional<PersonId> spouse;
  int generation = 0;
  // Founding family index; people who marry in from outside get their own.
  int family = 0;
};

/// A concrete family forest under the traditional model: monogamous
/// opposite-sex marriage within one generation, two married parents for every
/// child, full siblings only, and no marriage between people who share a
/// blood relative within first-cousin range.
class Genealogy {
 public:
  PersonId add_person(Sex sex, int generation, int family);
  void marry(PersonId a, PersonId b);
  PersonId add_child(PersonId father, PersonId mother, Sex sex);

  std::size_t size() const { return people_.size(); }
  const Person& person(PersonId id) const { return people_.at(id); }
  const std::vector<Person>& people() const { return people_; }

  std::vector<PersonId> parents(PersonId id) const;
  std::vector<PersonId> children(PersonId id) const;
  std::vector<PersonId> siblings(PersonId id) const;

  /// Blood kin within first-cousin range (shares an ancestor no more than two
  /// generations above both), including the person.
  std::vector<PersonId> close_blood_kin(PersonId id) const;

  /// Empty when every structural invariant holds; otherwise one message per
  /// broken rule.
  std::vector<std::string> validate() const;

  friend bool operator==(const Genealogy& a, const Genealogy& b);

 private:
  std::vector<Person> people_;
  std::vector<std::vector<PersonId>> children_;
};

bool operator==(const Person& a, const Person& b);

struct GenealogyParams {
  std::size_t max_persons = 25;
  int max_generations = 3;
  int families = 2;
  // Probability that an eligible person takes a spouse from another family
  // rather than from outside the genealogy.
  double intermarriage_rate = 0.5;
  std::uint64_t seed = 1;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic given params.seed.
Genealogy generate_genealogy(const GenealogyParams& params);

/// The unique atom that holds for (a, b), i.e. "a is the <atom> of b".
Relation classify_pair(const Genealogy& g, PersonId a, PersonId b);

/// classify_pair over every ordered pair, row-major (a * n + b).
std::vector<Relation> classify_all(const Genealogy& g);

}  // namespace kinpgm::oracle

#endif  // KINPGM_GENEALOGY_HPP_
