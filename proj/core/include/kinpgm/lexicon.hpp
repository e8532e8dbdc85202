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

#ifndef KINPGM_LEXICON_HPP_
#define KINPGM_LEXICON_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kinpgm/gender.hpp"
#include "kinpgm/relation.hpp"

namespace kinpgm {

class LexiconError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "father" -> (Parent, Male): the holder of the relation is male.
struct RelationLexiconEntry {
  std::string surface;
  Relation atom = Relation::OutOfGraph;
  // Male, Female or Unknown (gender-neutral word).
  Gender gender = Gender::Unknown;

  friend bool operator==(const RelationLexiconEntry&,
                         const RelationLexiconEntry&) = default;
};

class RelationLexicon {
 public:
  /// English kinship words, gendered and neutral.
  static RelationLexicon builtin();

  /// CSV with header `surface,atom,gender`; gender is male, female or none.
  /// Entries replace built-in ones with the same surface.
  void merge_from(std::istream& is);
  void merge_file(const std::filesystem::path& path);

  /// Replaces any entry with the same surface (case-insensitive).
  void add(RelationLexiconEntry entry);
  std::optional<RelationLexiconEntry> find(std::string_view surface) const;
  const std::vector<RelationLexiconEntry>& entries() const { return entries_; }

  /// Preferred word for an atom, e.g. (Child, Female) -> "daughter". Falls
  /// back to the neutral word when no gendered one exists.
  std::string surface_for(Relation atom, Gender gender) const;

 private:
  std::vector<RelationLexiconEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

struct NameRecord {
  std::string name;
  std::uint64_t male = 0;
  std::uint64_t female = 0;
};

/// Name frequency lists; lookups ignore case.
class NameLexicon {
 public:
  NameLexicon() = default;

  /// CSV with header `name,male,female`.
  static NameLexicon read(std::istream& is);
  static NameLexicon load(const std::filesystem::path& path);

  void add(NameRecord record);
  std::optional<NameRecord> find(std::string_view name) const;
  std::size_t size() const { return records_.size(); }

 private:
  std::map<std::string, NameRecord> records_;
};

/// Definite when the name is on one list only, probable when one count is at
/// least ten times the other, otherwise unknown.
Gender lookup_gender(const NameLexicon& lex, std::string_view name);

std::string to_lower(std::string_view s);

}  // namespace kinpgm

#endif  // KINPGM_LEXICON_HPP_
