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

#include "kinpgm/genealogy.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace kinpgm::oracle {

namespace {

constexpr double kMarryProbability = 0.8;
// Relative weights for 0..3 children per couple.
constexpr double kChildWeights[] = {0.15, 0.3, 0.35, 0.2};

bool contains(const std::vector<PersonId>& v, PersonId x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

bool operator==(const Person& a, const Person& b) {
  return a.id == b.id && a.sex == b.sex && a.father == b.father &&
         a.mother == b.mother && a.spouse == b.spouse &&
         a.generation == b.generation && a.family == b.family;
}

bool operator==(const Genealogy& a, const Genealogy& b) {
  return a.people_ == b.people_;
}

PersonId Genealogy::add_person(Sex sex, int generation, int family) {
  Person p;
  p.id = people_.size();
  p.sex = sex;
  p.generation = generation;
  p.family = family;
  people_.push_back(p);
  children_.emplace_back();
  return p.id;
}

void Genealogy::marry(PersonId a, PersonId b) {
  people_.at(a).spouse = b;
  people_.at(b).spouse = a;
}

PersonId Genealogy::add_child(PersonId father, PersonId mother, Sex sex) {
  const Person& f = people_.at(father);
  const PersonId id = add_person(sex, f.generation + 1, f.family);
  people_[id].father = father;
  people_[id].mother = mother;
  children_[father].push_back(id);
  children_[mother].push_back(id);
  return id;
}

std::vector<PersonId> Genealogy::parents(PersonId id) const {
  std::vector<PersonId> out;
  const Person& p = people_.at(id);
  if (p.father) out.push_back(*p.father);
  if (p.mother) out.push_back(*p.mother);
  return out;
}

std::vector<PersonId> Genealogy::children(PersonId id) const {
  return children_.at(id);
}

std::vector<PersonId> Genealogy::siblings(PersonId id) const {
  std::vector<PersonId> out;
  const Person& p = people_.at(id);
  if (!p.father) return out;
  for (PersonId c : children_[*p.father]) {
    if (c != id) out.push_back(c);
  }
  return out;
}

std::vector<PersonId> Genealogy::close_blood_kin(PersonId id) const {
  std::vector<PersonId> roots{id};
  for (PersonId p : parents(id)) {
    roots.push_back(p);
    for (PersonId gp : parents(p)) roots.push_back(gp);
  }
  std::set<PersonId> kin;
  for (PersonId r : roots) {
    kin.insert(r);
    for (PersonId c : children_[r]) {
      kin.insert(c);
      for (PersonId gc : children_[c]) kin.insert(gc);
    }
  }
  return {kin.begin(), kin.end()};
}

std::vector<std::string> Genealogy::validate() const {
  std::vector<std::string> errors;
  auto ancestors_within_two = [this](PersonId id) {
    std::vector<PersonId> out{id};
    for (PersonId p : parents(id)) {
      out.push_back(p);
      for (PersonId gp : parents(p)) out.push_back(gp);
    }
    return out;
  };
  auto fail = [&](PersonId id, const std::string& what) {
    std::ostringstream os;
    os << "person " << id << ": " << what;
    errors.push_back(os.str());
  };
  for (const Person& p : people_) {
    if (p.spouse) {
      const Person& s = people_.at(*p.spouse);
      if (s.spouse != p.id) fail(p.id, "spouse link not symmetric");
      if (s.sex == p.sex) fail(p.id, "same-sex marriage");
      if (s.generation != p.generation) fail(p.id, "cross-generation marriage");
      const auto mine = ancestors_within_two(p.id);
      for (PersonId k : ancestors_within_two(s.id)) {
        if (contains(mine, k)) {
          fail(p.id, "spouse shares a close ancestor");
          break;
        }
      }
    }
    if (p.father.has_value() != p.mother.has_value()) {
      fail(p.id, "exactly one parent");
    }
    if (p.father && p.mother) {
      const Person& f = people_.at(*p.father);
      const Person& m = people_.at(*p.mother);
      if (f.sex != Sex::Male || m.sex != Sex::Female) {
        fail(p.id, "parent sexes wrong");
      }
      if (f.spouse != m.id) fail(p.id, "parents not married");
      if (f.generation != p.generation - 1) fail(p.id, "generation gap");
    }
  }
  return errors;
}

Genealogy generate_genealogy(const GenealogyParams& params) {
  if (params.max_persons < 1 || params.max_generations < 1 ||
      params.families < 1) {
    throw GenerationError("genealogy params: counts must be >= 1");
  }
  if (!(params.intermarriage_rate >= 0.0 && params.intermarriage_rate <= 1.0)) {
    throw GenerationError("genealogy params: rate must be in [0, 1]");
  }

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::discrete_distribution<int> child_count(std::begin(kChildWeights),
                                              std::end(kChildWeights));
  auto coin = [&](double p) { return unit(rng) < p; };
  auto random_sex = [&] { return coin(0.5) ? Sex::Male : Sex::Female; };

  Genealogy g;
  auto room = [&] { return g.size() < params.max_persons; };
  int next_family = params.families;

  for (int f = 0; f < params.families && room(); ++f) {
    if (params.max_persons - g.size() >= 2) {
      const PersonId h = g.add_person(Sex::Male, 0, f);
      const PersonId w = g.add_person(Sex::Female, 0, f);
      g.marry(h, w);
    } else {
      g.add_person(random_sex(), 0, f);
    }
  }

  auto eligible = [&](PersonId x, PersonId y) {
    const Person& px = g.person(x);
    const Person& py = g.person(y);
    if (x == y || py.spouse || px.spouse) return false;
    if (px.sex == py.sex || px.generation != py.generation) return false;
    if (classify_pair(g, x, y) != Relation::OutOfGraph) return false;
    const auto kx = g.close_blood_kin(x);
    for (PersonId k : g.close_blood_kin(y)) {
      if (contains(kx, k)) return false;
    }
    return true;
  };

  for (int gen = 0; gen < params.max_generations; ++gen) {
    if (gen > 0) {
      std::vector<PersonId> cohort;
      for (const Person& p : g.people()) {
        if (p.generation == gen && !p.spouse) cohort.push_back(p.id);
      }
      std::shuffle(cohort.begin(), cohort.end(), rng);
      for (PersonId x : cohort) {
        if (g.person(x).spouse || !coin(kMarryProbability)) continue;
        std::optional<PersonId> partner;
        if (coin(params.intermarriage_rate)) {
          std::vector<PersonId> options;
          for (PersonId y : cohort) {
            if (g.person(y).family != g.person(x).family && eligible(x, y)) {
              options.push_back(y);
            }
          }
          if (!options.empty()) {
            std::uniform_int_distribution<std::size_t> pick(
                0, options.size() - 1);
            partner = options[pick(rng)];
          }
        }
        if (!partner && room()) {
          const Sex sex =
              g.person(x).sex == Sex::Male ? Sex::Female : Sex::Male;
          partner = g.add_person(sex, gen, next_family++);
        }
        if (partner) g.marry(x, *partner);
      }
    }
    if (gen + 1 >= params.max_generations) break;

    std::vector<PersonId> husbands;
    for (const Person& p : g.people()) {
      if (p.generation == gen && p.sex == Sex::Male && p.spouse) {
        husbands.push_back(p.id);
      }
    }
    std::shuffle(husbands.begin(), husbands.end(), rng);
    for (PersonId h : husbands) {
      const int n = child_count(rng);
      for (int i = 0; i < n && room(); ++i) {
        g.add_child(h, *g.person(h).spouse, random_sex());
      }
    }
  }

  if (g.size() == 0) throw GenerationError("no person could be placed");
  return g;
}

namespace {

bool is_parent(const Genealogy& g, PersonId a, PersonId b) {
  const Person& pb = g.person(b);
  return pb.father == a || pb.mother == a;
}

bool is_sibling(const Genealogy& g, PersonId a, PersonId b) {
  if (a == b) return false;
  const Person& pa = g.person(a);
  const Person& pb = g.person(b);
  return pa.father && pa.father == pb.father && pa.mother == pb.mother;
}

bool is_grandparent(const Genealogy& g, PersonId a, PersonId b) {
  for (PersonId p : g.parents(b)) {
    if (is_parent(g, a, p)) return true;
  }
  return false;
}

bool is_spouse(const Genealogy& g, PersonId a, PersonId b) {
  return g.person(b).spouse == a;
}

bool is_parent_in_law(const Genealogy& g, PersonId a, PersonId b) {
  const auto s = g.person(b).spouse;
  return s && is_parent(g, a, *s);
}

bool is_sibling_in_law(const Genealogy& g, PersonId a, PersonId b) {
  const auto sb = g.person(b).spouse;
  if (sb && is_sibling(g, a, *sb)) return true;
  const auto sa = g.person(a).spouse;
  return sa && is_sibling(g, *sa, b);
}

bool is_aunt_uncle(const Genealogy& g, PersonId a, PersonId b) {
  const auto sa = g.person(a).spouse;
  for (PersonId p : g.parents(b)) {
    if (is_sibling(g, a, p)) return true;
    if (sa && is_sibling(g, *sa, p)) return true;
  }
  return false;
}

bool is_cousin(const Genealogy& g, PersonId a, PersonId b) {
  if (a == b) return false;
  for (PersonId pa : g.parents(a)) {
    for (PersonId pb : g.parents(b)) {
      if (is_sibling(g, pa, pb)) return true;
    }
  }
  return false;
}

}  // namespace

Relation classify_pair(const Genealogy& g, PersonId a, PersonId b) {
  if (a >= g.size() || b >= g.size()) {
    throw std::out_of_range("classify_pair: unknown person id");
  }
  if (a == b) return Relation::Self;
  if (is_parent(g, a, b)) return Relation::Parent;
  if (is_sibling(g, a, b)) return Relation::Sibling;
  if (is_grandparent(g, a, b)) return Relation::Grandparent;
  if (is_spouse(g, a, b)) return Relation::Spouse;
  if (is_parent_in_law(g, a, b)) return Relation::ParentInLaw;
  if (is_sibling_in_law(g, a, b)) return Relation::SiblingInLaw;
  if (is_aunt_uncle(g, a, b)) return Relation::AuntUncle;
  if (is_cousin(g, a, b)) return Relation::Cousin;
  if (is_parent(g, b, a)) return Relation::Child;
  if (is_parent_in_law(g, b, a)) return Relation::ChildInLaw;
  if (is_grandparent(g, b, a)) return Relation::Grandchild;
  if (is_aunt_uncle(g, b, a)) return Relation::NieceNephew;
  return Relation::OutOfGraph;
}

std::vector<Relation> classify_all(const Genealogy& g) {
  const std::size_t n = g.size();
  std::vector<Relation> out(n * n);
  for (PersonId a = 0; a < n; ++a) {
    for (PersonId b = 0; b < n; ++b) out[a * n + b] = classify_pair(g, a, b);
  }
  return out;
}

}  // namespace kinpgm::oracle
