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

#include <gtest/gtest.h>

#include "kinpgm/derivation.hpp"
#include "kinpgm/soundness.hpp"
#include "support/fixtures.hpp"
#include "support/kin_oracle.hpp"

namespace kinpgm::oracle {
namespace {

using R = Relation;

GenealogyParams shape(std::size_t persons, int gens, int families,
                      double rate, std::uint64_t seed) {
  return {persons, gens, families, rate, seed};
}

// Two founding couples; the first has a son and a daughter, the son marries
// the second couple's daughter and they have two children.
struct SmallFamily {
  Genealogy g;
  PersonId gf, gm, ogf, ogm, son, daughter, wife, kid1, kid2;
  SmallFamily() {
    gf = g.add_person(Sex::Male, 0, 0);
    gm = g.add_person(Sex::Female, 0, 0);
    g.marry(gf, gm);
    ogf = g.add_person(Sex::Male, 0, 1);
    ogm = g.add_person(Sex::Female, 0, 1);
    g.marry(ogf, ogm);
    son = g.add_child(gf, gm, Sex::Male);
    daughter = g.add_child(gf, gm, Sex::Female);
    wife = g.add_child(ogf, ogm, Sex::Female);
    g.marry(son, wife);
    kid1 = g.add_child(son, wife, Sex::Female);
    kid2 = g.add_child(son, wife, Sex::Male);
  }
};

TEST(Generate, SinglePerson) {
  const Genealogy g = generate_genealogy(shape(1, 1, 1, 0.0, 4));
  ASSERT_EQ(g.size(), 1u);
  const Person& p = g.person(0);
  EXPECT_FALSE(p.spouse || p.father || p.mother);
}

TEST(Generate, DeterministicPerSeed) {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    EXPECT_EQ(generate_genealogy(shape(30, 4, 3, 0.5, seed)),
              generate_genealogy(shape(30, 4, 3, 0.5, seed)));
  }
  EXPECT_FALSE(generate_genealogy(shape(30, 4, 3, 0.5, 1)) ==
               generate_genealogy(shape(30, 4, 3, 0.5, 2)));
}

TEST(Generate, RejectsBadParams) {
  EXPECT_THROW(generate_genealogy(shape(0, 3, 1, 0.5, 1)), GenerationError);
  EXPECT_THROW(generate_genealogy(shape(5, 0, 1, 0.5, 1)), GenerationError);
  EXPECT_THROW(generate_genealogy(shape(5, 3, 0, 0.5, 1)), GenerationError);
  EXPECT_THROW(generate_genealogy(shape(5, 3, 1, 1.5, 1)), GenerationError);
}

TEST(Generate, FullIntermarriageProducesCrossFamilyCouples) {
  int with_cross = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Genealogy g = generate_genealogy(shape(25, 3, 2, 1.0, seed));
    for (const Person& p : g.people()) {
      if (p.spouse && p.generation > 0 && p.family < 2 &&
          g.person(*p.spouse).family < 2 &&
          g.person(*p.spouse).family != p.family) {
        ++with_cross;
        break;
      }
    }
  }
  EXPECT_GE(with_cross, 5);
}

TEST(Generate, InvariantsHoldAcrossShapes) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Genealogy g = generate_genealogy(
        shape(10 + seed % 40, 2 + static_cast<int>(seed % 4),
              1 + static_cast<int>(seed % 4), (seed % 11) / 10.0, seed));
    const auto errors = g.validate();
    ASSERT_TRUE(errors.empty()) << "seed " << seed << ": " << errors.front();
    for (const Person& p : g.people()) {
      for (PersonId q : g.parents(p.id)) {
        EXPECT_LT(g.person(q).generation, p.generation);
      }
    }
  }
}

TEST(Classify, HandBuiltFamily) {
  const SmallFamily f;
  const Genealogy& g = f.g;
  EXPECT_EQ(classify_pair(g, f.gf, f.son), R::Parent);
  EXPECT_EQ(classify_pair(g, f.son, f.gf), R::Child);
  EXPECT_EQ(classify_pair(g, f.son, f.daughter), R::Sibling);
  EXPECT_EQ(classify_pair(g, f.gm, f.kid1), R::Grandparent);
  EXPECT_EQ(classify_pair(g, f.ogm, f.kid2), R::Grandparent);
  EXPECT_EQ(classify_pair(g, f.wife, f.son), R::Spouse);
  EXPECT_EQ(classify_pair(g, f.ogf, f.son), R::ParentInLaw);
  EXPECT_EQ(classify_pair(g, f.son, f.ogf), R::ChildInLaw);
  EXPECT_EQ(classify_pair(g, f.daughter, f.wife), R::SiblingInLaw);
  EXPECT_EQ(classify_pair(g, f.wife, f.daughter), R::SiblingInLaw);
  EXPECT_EQ(classify_pair(g, f.daughter, f.kid1), R::AuntUncle);
  EXPECT_EQ(classify_pair(g, f.kid2, f.daughter), R::NieceNephew);
  EXPECT_EQ(classify_pair(g, f.kid1, f.kid1), R::Self);
  // Co-parents-in-law sit outside the named atoms.
  EXPECT_EQ(classify_pair(g, f.gf, f.ogf), R::OutOfGraph);
}

TEST(Classify, DisjointFamiliesAreOutOfGraph) {
  Genealogy g;
  const PersonId a = g.add_person(Sex::Male, 0, 0);
  const PersonId b = g.add_person(Sex::Female, 0, 1);
  EXPECT_EQ(classify_pair(g, a, b), R::OutOfGraph);
  EXPECT_THROW(classify_pair(g, a, 7), std::out_of_range);
}

TEST(Classify, InverseConsistentAndAgreesWithIndependentClassifier) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Genealogy g =
        generate_genealogy(shape(35, 5, 3, 0.7, 1000 + seed));
    const testing::KinOracle other(g);
    for (PersonId a = 0; a < g.size(); ++a) {
      for (PersonId b = 0; b < g.size(); ++b) {
        const R r = classify_pair(g, a, b);
        ASSERT_EQ(r, inverse(classify_pair(g, b, a)))
            << "seed " << seed << " pair " << a << "," << b;
        ASSERT_EQ(r, other.classify(a, b))
            << "seed " << seed << " pair " << a << "," << b;
      }
    }
  }
}

TEST(Derive, RejectsBadConfig) {
  DerivationConfig c;
  c.budget = 0;
  EXPECT_THROW(derive_table(c), DerivationError);
  c.budget = 10;
  c.params_list.clear();
  EXPECT_THROW(derive_table(c), DerivationError);
}

TEST(Derive, TinyBudgetNamesMissingEntries) {
  DerivationConfig c;
  c.budget = 1;
  c.params_list = {shape(3, 1, 1, 0.0, 0)};
  try {
    (void)derive_table(c);
    FAIL() << "expected a derivation failure";
  } catch (const DerivationError& e) {
    EXPECT_NE(std::string(e.what()).find("(Cousin, Cousin)"),
              std::string::npos);
  }
}

TEST(Derive, ReproducesShippedTableFromTwoSeeds) {
  const auto& shipped = *testing::shipped_table();
  DerivationConfig c;
  c.seed = shipped.metadata().seed;
  const CompositionTable a = derive_table(c);
  EXPECT_EQ(a, shipped);
  EXPECT_EQ(a.checksum(), shipped.checksum());
  c.seed = 7;
  const CompositionTable b = derive_table(c);
  EXPECT_EQ(b.checksum(), shipped.checksum());
  EXPECT_TRUE(check_axioms(b).empty());
}

TEST(Soundness, NuclearFamilyFactsLeaveNoViolation) {
  const SmallFamily f;
  auto gw = build_world(testing::shipped_table(), f.g,
                        parent_spouse_facts(f.g), true);
  ASSERT_TRUE(gw.has_value());
  EXPECT_TRUE(soundness_check(f.g, gw->entity_of, gw->world).empty());
  EXPECT_TRUE(gw->world.is_stable());
}

TEST(Soundness, NoFactsIsVacuous) {
  Genealogy g;
  g.add_person(Sex::Male, 0, 0);
  g.add_person(Sex::Female, 0, 1);
  auto gw = build_world(testing::shipped_table(), g, {}, false);
  ASSERT_TRUE(gw.has_value());
  EXPECT_TRUE(soundness_check(g, gw->entity_of, gw->world).empty());
}

TEST(Soundness, NarrowedTableIsCaught) {
  // M(Parent, Sibling) narrowed to {Grandparent}: the axioms no longer
  // hold, so the model is built directly on the edge store.
  CompositionTable narrowed = *testing::shipped_table();
  narrowed.set(R::Parent, R::Sibling, {R::Grandparent});
  ASSERT_FALSE(check_axioms(narrowed).empty());
  EXPECT_THROW(WorldModel(std::make_shared<CompositionTable>(narrowed)),
               InvalidTableError);

  const SmallFamily f;
  std::map<PersonId, EntityId> ids;
  WorldModel w(testing::shipped_table());
  for (PersonId p : {f.gf, f.son, f.daughter}) ids[p] = w.add_entity();
  w.set_edge_unchecked(ids[f.gf], ids[f.son], {R::Parent});
  w.set_edge_unchecked(ids[f.son], ids[f.daughter], {R::Sibling});
  w.set_edge_unchecked(ids[f.gf], ids[f.daughter],
                       narrowed.at(R::Parent, R::Sibling));
  const auto report = soundness_check(f.g, ids, w);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].truth, R::Parent);
}

}  // namespace
}  // namespace kinpgm::oracle
