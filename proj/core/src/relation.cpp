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

#include "kinpgm/relation.hpp"

#include <algorithm>
#include <ostream>

namespace kinpgm {

namespace {

constexpr std::array<std::string_view, kRelationCount> kNames = {
    "Grandparent", "Parent",     "ParentInLaw", "Spouse",
    "Sibling",     "SiblingInLaw", "Child",     "ChildInLaw",
    "Grandchild",  "AuntUncle",  "NieceNephew", "Cousin",
    "Self",        "OutOfGraph",
};

}  // namespace

std::string_view name_of(Relation r) { return kNames[index_of(r)]; }

std::optional<Relation> relation_from_name(std::string_view name) {
  for (Relation r : kAllRelations) {
    if (kNames[index_of(r)] == name) return r;
  }
  return std::nullopt;
}

const std::array<Relation, kRelationCount>& alphabetical_relations() {
  static const std::array<Relation, kRelationCount> sorted = [] {
    auto out = kAllRelations;
    std::sort(out.begin(), out.end(), [](Relation a, Relation b) {
      return name_of(a) < name_of(b);
    });
    return out;
  }();
  return sorted;
}

std::ostream& operator<<(std::ostream& os, Relation r) {
  return os << name_of(r);
}

std::optional<Relation> RelationSet::single() const {
  if (size() != 1) return std::nullopt;
  return *begin();
}

std::string RelationSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (Relation r : *this) {
    if (!first) out += ", ";
    out += name_of(r);
    first = false;
  }
  out += "}";
  return out;
}

std::ostream& operator<<(std::ostream& os, RelationSet s) {
  return os << s.to_string();
}

}  // namespace kinpgm
