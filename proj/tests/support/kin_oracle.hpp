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

// A second, deliberately different kinship classifier for tests. The core
// oracle tests relations one predicate at a time; this one measures
// ancestor depths to the nearest common ancestor and then looks through at
// most one marriage.

#ifndef KINPGM_TESTS_KIN_ORACLE_HPP_
#define KINPGM_TESTS_KIN_ORACLE_HPP_

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "kinpgm/composition_table.hpp"
#include "kinpgm/genealogy.hpp"
#include "kinpgm/relation.hpp"

namespace kinpgm::testing {

class KinOracle {
 public:
  explicit KinOracle(const oracle::Genealogy& g) : g_(g) {
    for (const auto& p : g.people()) depths_.push_back(ancestors(p.id));
  }

  Relation classify(oracle::PersonId x, oracle::PersonId y) const {
    if (auto r = blood(x, y)) return *r;
    const auto sx = g_.person(x).spouse;
    const auto sy = g_.person(y).spouse;
    if (sx == y) return Relation::Spouse;
    // x looks at y's spouse.
    if (sy) {
      if (auto r = blood(x, *sy)) {
        switch (*r) {
          case Relation::Parent: return Relation::ParentInLaw;
          case Relation::Sibling: return Relation::SiblingInLaw;
          default: break;
        }
      }
    }
    // x's spouse looks at y.
    if (sx) {
      if (auto r = blood(*sx, y)) {
        switch (*r) {
          case Relation::Sibling: return Relation::SiblingInLaw;
          case Relation::AuntUncle: return Relation::AuntUncle;
          case Relation::Child: return Relation::ChildInLaw;
          default: break;
        }
      }
    }
    if (sy) {
      if (auto r = blood(x, *sy)) {
        if (*r == Relation::NieceNephew) return Relation::NieceNephew;
      }
    }
    return Relation::OutOfGraph;
  }

  /// Entries observed in this genealogy, merged into `table`.
  void accumulate(CompositionTable& table) const {
    const std::size_t n = g_.size();
    std::vector<Relation> rel(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) rel[a * n + b] = classify(a, b);
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t c = 0; c < n; ++c) {
          table.add(rel[a * n + b], rel[b * n + c], rel[a * n + c]);
        }
      }
    }
  }

 private:
  // Person itself at depth 0, parents at 1, grandparents at 2.
  std::map<oracle::PersonId, int> ancestors(oracle::PersonId id) const {
    std::map<oracle::PersonId, int> out{{id, 0}};
    for (auto p : g_.parents(id)) {
      out.emplace(p, 1);
      for (auto gp : g_.parents(p)) out.emplace(gp, 2);
    }
    return out;
  }

  std::optional<Relation> blood(oracle::PersonId x, oracle::PersonId y) const {
    std::optional<std::pair<int, int>> best;
    for (const auto& [anc, dx] : depths_[x]) {
      const auto it = depths_[y].find(anc);
      if (it == depths_[y].end()) continue;
      if (!best || dx + it->second < best->first + best->second) {
        best = {dx, it->second};
      }
    }
    if (!best) return std::nullopt;
    static const std::map<std::pair<int, int>, Relation> kByDepth{
        {{0, 0}, Relation::Self},       {{0, 1}, Relation::Parent},
        {{0, 2}, Relation::Grandparent}, {{1, 0}, Relation::Child},
        {{2, 0}, Relation::Grandchild},  {{1, 1}, Relation::Sibling},
        {{1, 2}, Relation::AuntUncle},   {{2, 1}, Relation::NieceNephew},
        {{2, 2}, Relation::Cousin},
    };
    return kByDepth.at(*best);
  }

  const oracle::Genealogy& g_;
  std::vector<std::map<oracle::PersonId, int>> depths_;
};

}  // namespace kinpgm::testing

#endif  // KINPGM_TESTS_KIN_ORACLE_HPP_
