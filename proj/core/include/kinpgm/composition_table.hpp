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

#ifndef KINPGM_COMPOSITION_TABLE_HPP_
#define KINPGM_COMPOSITION_TABLE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kinpgm/relation.hpp"

namespace kinpgm {

struct TableMetadata {
  std::string version;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  // Samples actually drawn before the table stopped changing.
  std::uint64_t samples = 0;
  // Checksum found in the file header, if the table was read from text.
  std::optional<std::uint64_t> declared_checksum;
};

/// The composition matrix: entry (r1, r2) lists every relation that can hold
/// between a and c when r1(a, b) and r2(b, c).
///
/// Tables are plain values; once loaded they are shared as
/// `std::shared_ptr<const CompositionTable>` and never mutated.
class CompositionTable {
 public:
  CompositionTable() = default;

  RelationSet at(Relation r1, Relation r2) const {
    return entries_[index_of(r1) * kRelationCount + index_of(r2)];
  }
  void set(Relation r1, Relation r2, RelationSet s) {
    entries_[index_of(r1) * kRelationCount + index_of(r2)] = s;
  }
  void add(Relation r1, Relation r2, Relation r) {
    entries_[index_of(r1) * kRelationCount + index_of(r2)].insert(r);
  }

  RelationSet compose(Relation r1, Relation r2) const { return at(r1, r2); }

  /// Union of compose(r1, r2) over all r1 in s1, r2 in s2.
  RelationSet compose(RelationSet s1, RelationSet s2) const;

  const TableMetadata& metadata() const { return meta_; }
  TableMetadata& metadata() { return meta_; }

  /// FNV-1a over the canonical body lines; independent of metadata.
  std::uint64_t checksum() const;

  friend bool operator==(const CompositionTable& a,
                         const CompositionTable& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::array<RelationSet, kRelationCount * kRelationCount> entries_{};
  TableMetadata meta_;
};

inline RelationSet compose_sets(RelationSet s1, RelationSet s2,
                                const CompositionTable& m) {
  return m.compose(s1, s2);
}

struct AxiomViolation {
  enum class Kind { EmptyEntry, NotInverseClosed, Inconsistent, InconsistentInverse };
  Kind kind;
  Relation r1;
  Relation r2;
  // Offending member of M(r1, r2); absent for empty entries and inverse closure.
  std::optional<Relation> member;

  std::string describe() const;
  friend bool operator==(const AxiomViolation&,
                         const AxiomViolation&) = default;
};

/// Every empty entry, inverse-closure gap and consistency failure. Empty iff
/// the table is valid.
std::vector<AxiomViolation> check_axioms(const CompositionTable& m);

/// Whether an edge starts at or ends on the node two edges share.
enum class EdgeDirection { FromShared, IntoShared };

/// Geometry for `supports`. Nodes are E (shared), X and Y. The first atom
/// lies on edge E-X, the second on E-Y; `third` is the edge set oriented
/// X -> Y.
struct CliqueContext {
  EdgeDirection first = EdgeDirection::FromShared;
  EdgeDirection second = EdgeDirection::FromShared;
  RelationSet third;
};

/// True when some atom of the third edge (read in whichever direction the
/// case needs) lets `first` and `second` hold together.
bool supports(Relation first, Relation second, const CliqueContext& clique,
              const CompositionTable& m);

class TableFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text format:
///   # comment lines
///   version: <string>
///   seed: <u64>
///   budget: <u64>
///   samples: <u64>
///   checksum: <16 hex digits>
///   <Atom1> <Atom2> : <Member> <Member> ...
/// One body line per ordered pair, atoms in alphabetical order.
void write_table(std::ostream& os, const CompositionTable& m);
CompositionTable read_table(std::istream& is);

CompositionTable load_table(const std::filesystem::path& path);
void save_table(const std::filesystem::path& path, const CompositionTable& m);

}  // namespace kinpgm

#endif  // KINPGM_COMPOSITION_TABLE_HPP_
