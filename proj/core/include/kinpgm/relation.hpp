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

#ifndef KINPGM_RELATION_HPP_
#define KINPGM_RELATION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace kinpgm {

/// One kinship atom. `Relation r` on the ordered pair (a, b) reads
/// "a is the r of b": Parent(Anne, Bill) means Anne is Bill's parent.
enum class Relation : std::uint8_t {
  Grandparent,
  Parent,
  ParentInLaw,
  Spouse,
  Sibling,
  SiblingInLaw,
  Child,
  ChildInLaw,
  Grandchild,
  AuntUncle,
  NieceNephew,
  Cousin,
  Self,
  OutOfGraph,
};

inline constexpr std::size_t kRelationCount = 14;

/// All atoms in declaration order.
inline constexpr std::array<Relation, kRelationCount> kAllRelations = {
    Relation::Grandparent, Relation::Parent,      Relation::ParentInLaw,
    Relation::Spouse,      Relation::Sibling,     Relation::SiblingInLaw,
    Relation::Child,       Relation::ChildInLaw,  Relation::Grandchild,
    Relation::AuntUncle,   Relation::NieceNephew, Relation::Cousin,
    Relation::Self,        Relation::OutOfGraph,
};

constexpr std::size_t index_of(Relation r) {
  return static_cast<std::size_t>(r);
}

constexpr Relation inverse(Relation r) {
  switch (r) {
    case Relation::Grandparent: return Relation::Grandchild;
    case Relation::Grandchild: return Relation::Grandparent;
    case Relation::Parent: return Relation::Child;
    case Relation::Child: return Relation::Parent;
    case Relation::ParentInLaw: return Relation::ChildInLaw;
    case Relation::ChildInLaw: return Relation::ParentInLaw;
    case Relation::AuntUncle: return Relation::NieceNephew;
    case Relation::NieceNephew: return Relation::AuntUncle;
    case Relation::Spouse:
    case Relation::Sibling:
    case Relation::SiblingInLaw:
    case Relation::Cousin:
    case Relation::Self:
    case Relation::OutOfGraph:
      return r;
  }
  return r;
}

/// Canonical name, e.g. "ParentInLaw".
std::string_view name_of(Relation r);
std::optional<Relation> relation_from_name(std::string_view name);

/// Atoms sorted by canonical name. File formats and checksums use this order.
const std::array<Relation, kRelationCount>& alphabetical_relations();

std::ostream& operator<<(std::ostream& os, Relation r);

/// A subset of the 14 atoms, stored as a membership bit vector.
class RelationSet {
 public:
  using Bits = std::uint16_t;
  static constexpr Bits kFullBits = (Bits{1} << kRelationCount) - 1;

  constexpr RelationSet() = default;
  constexpr RelationSet(std::initializer_list<Relation> atoms) {
    for (Relation r : atoms) insert(r);
  }

  static constexpr RelationSet full() { return from_bits(kFullBits); }
  static constexpr RelationSet from_bits(Bits bits) {
    RelationSet s;
    s.bits_ = static_cast<Bits>(bits & kFullBits);
    return s;
  }

  constexpr Bits bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_full() const { return bits_ == kFullBits; }
  constexpr std::size_t size() const {
    std::size_t n = 0;
    for (Bits b = bits_; b != 0; b &= static_cast<Bits>(b - 1)) ++n;
    return n;
  }
  constexpr bool contains(Relation r) const {
    return (bits_ >> index_of(r)) & 1U;
  }
  constexpr void insert(Relation r) {
    bits_ = static_cast<Bits>(bits_ | (Bits{1} << index_of(r)));
  }
  constexpr void erase(Relation r) {
    bits_ = static_cast<Bits>(bits_ & ~(Bits{1} << index_of(r)));
  }
  constexpr bool is_subset_of(RelationSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  /// The only member of a singleton set.
  std::optional<Relation> single() const;

  constexpr RelationSet& operator&=(RelationSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  constexpr RelationSet& operator|=(RelationSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  friend constexpr RelationSet operator&(RelationSet a, RelationSet b) {
    return a &= b;
  }
  friend constexpr RelationSet operator|(RelationSet a, RelationSet b) {
    return a |= b;
  }
  friend constexpr RelationSet operator-(RelationSet a, RelationSet b) {
    return from_bits(static_cast<Bits>(a.bits_ & ~b.bits_));
  }
  friend constexpr bool operator==(RelationSet, RelationSet) = default;

  class iterator {
   public:
    using value_type = Relation;
    using difference_type = std::ptrdiff_t;

    constexpr iterator() = default;
    constexpr explicit iterator(Bits rest) : rest_(rest) {}
    constexpr Relation operator*() const {
      std::size_t i = 0;
      while (((rest_ >> i) & 1U) == 0) ++i;
      return static_cast<Relation>(i);
    }
    constexpr iterator& operator++() {
      rest_ &= static_cast<Bits>(rest_ - 1);
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    friend constexpr bool operator==(iterator, iterator) = default;

   private:
    Bits rest_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  /// "{Parent, Sibling}" in declaration order.
  std::string to_string() const;

 private:
  Bits bits_ = 0;
};

std::ostream& operator<<(std::ostream& os, RelationSet s);

/// Element-wise inverse.
constexpr RelationSet invert(RelationSet s) {
  RelationSet out;
  for (Relation r : s) out.insert(inverse(r));
  return out;
}

}  // namespace kinpgm

#endif  // KINPGM_RELATION_HPP_
