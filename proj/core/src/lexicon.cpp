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

#include "kinpgm/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace kinpgm {

namespace {

using R = Relation;
constexpr Gender M = Gender::Male;
constexpr Gender F = Gender::Female;
constexpr Gender N = Gender::Unknown;

// The first word listed for an (atom, gender) pair is used when rendering.
const RelationLexiconEntry kBuiltin[] = {
    {"grandparent", R::Grandparent, N}, {"grandfather", R::Grandparent, M},
    {"grandmother", R::Grandparent, F}, {"grandpa", R::Grandparent, M},
    {"grandma", R::Grandparent, F},     {"granddad", R::Grandparent, M},
    {"granny", R::Grandparent, F},

    {"parent", R::Parent, N},           {"father", R::Parent, M},
    {"mother", R::Parent, F},           {"dad", R::Parent, M},
    {"mom", R::Parent, F},              {"mum", R::Parent, F},
    {"daddy", R::Parent, M},            {"mommy", R::Parent, F},

    {"parent-in-law", R::ParentInLaw, N},
    {"father-in-law", R::ParentInLaw, M},
    {"mother-in-law", R::ParentInLaw, F},

    {"spouse", R::Spouse, N},           {"husband", R::Spouse, M},
    {"wife", R::Spouse, F},

    {"sibling", R::Sibling, N},         {"brother", R::Sibling, M},
    {"sister", R::Sibling, F},

    {"sibling-in-law", R::SiblingInLaw, N},
    {"brother-in-law", R::SiblingInLaw, M},
    {"sister-in-law", R::SiblingInLaw, F},

    {"child", R::Child, N},             {"son", R::Child, M},
    {"daughter", R::Child, F},          {"kid", R::Child, N},

    {"child-in-law", R::ChildInLaw, N}, {"son-in-law", R::ChildInLaw, M},
    {"daughter-in-law", R::ChildInLaw, F},

    {"grandchild", R::Grandchild, N},   {"grandson", R::Grandchild, M},
    {"granddaughter", R::Grandchild, F},
    {"grandkid", R::Grandchild, N},

    {"pibling", R::AuntUncle, N},       {"uncle", R::AuntUncle, M},
    {"aunt", R::AuntUncle, F},          {"auntie", R::AuntUncle, F},

    {"nibling", R::NieceNephew, N},     {"nephew", R::NieceNephew, M},
    {"niece", R::NieceNephew, F},

    {"cousin", R::Cousin, N},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::uint64_t parse_count(const std::string& s, std::size_t line_no) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit)) {
    throw LexiconError("line " + std::to_string(line_no) +
                       ": count must be a non-negative integer");
  }
  return std::stoull(s);
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

RelationLexicon RelationLexicon::builtin() {
  RelationLexicon lex;
  for (const auto& e : kBuiltin) lex.add(e);
  return lex;
}

void RelationLexicon::add(RelationLexiconEntry entry) {
  entry.surface = to_lower(trim(entry.surface));
  if (entry.surface.empty()) throw LexiconError("empty surface form");
  if (!is_definite(entry.gender)) entry.gender = Gender::Unknown;
  const auto it = index_.find(entry.surface);
  if (it != index_.end()) {
    entries_[it->second] = std::move(entry);
    return;
  }
  index_[entry.surface] = entries_.size();
  entries_.push_back(std::move(entry));
}

std::optional<RelationLexiconEntry> RelationLexicon::find(
    std::string_view surface) const {
  const auto it = index_.find(to_lower(surface));
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second];
}

std::string RelationLexicon::surface_for(Relation atom, Gender gender) const {
  const auto lean = leaning(gender);
  const RelationLexiconEntry* neutral = nullptr;
  for (const auto& e : entries_) {
    if (e.atom != atom) continue;
    if (lean && e.gender == *lean) return e.surface;
    if (!neutral && e.gender == Gender::Unknown) neutral = &e;
  }
  if (neutral) return neutral->surface;
  for (const auto& e : entries_) {
    if (e.atom == atom) return e.surface;
  }
  return to_lower(name_of(atom));
}

void RelationLexicon::merge_from(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto f = split_csv(t);
    if (!header) {
      if (f.size() != 3 || to_lower(f[0]) != "surface") {
        throw LexiconError("relation lexicon: missing header");
      }
      header = true;
      continue;
    }
    if (f.size() != 3) {
      throw LexiconError("line " + std::to_string(line_no) +
                         ": expected surface,atom,gender");
    }
    const auto atom = relation_from_name(f[1]);
    if (!atom) {
      throw LexiconError("line " + std::to_string(line_no) +
                         ": unknown relation '" + f[1] + "'");
    }
    const std::string g = to_lower(f[2]);
    Gender gender = Gender::Unknown;
    if (g == "male") {
      gender = Gender::Male;
    } else if (g == "female") {
      gender = Gender::Female;
    } else if (g != "none" && !g.empty()) {
      throw LexiconError("line " + std::to_string(line_no) +
                         ": gender must be male, female or none");
    }
    add({f[0], *atom, gender});
  }
}

void RelationLexicon::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError("cannot open " + path.string());
  merge_from(in);
}

NameLexicon NameLexicon::read(std::istream& is) {
  NameLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto f = split_csv(t);
    if (!header) {
      if (f.size() != 3 || to_lower(f[0]) != "name") {
        throw LexiconError("name lexicon: missing header");
      }
      header = true;
      continue;
    }
    if (f.size() != 3 || f[0].empty()) {
      throw LexiconError("line " + std::to_string(line_no) +
                         ": expected name,male,female");
    }
    lex.add({f[0], parse_count(f[1], line_no), parse_count(f[2], line_no)});
  }
  if (!header) throw LexiconError("name lexicon: missing header");
  return lex;
}

NameLexicon NameLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError("cannot open " + path.string());
  return read(in);
}

void NameLexicon::add(NameRecord record) {
  records_[to_lower(record.name)] = std::move(record);
}

std::optional<NameRecord> NameLexicon::find(std::string_view name) const {
  const auto it = records_.find(to_lower(name));
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

Gender lookup_gender(const NameLexicon& lex, std::string_view name) {
  const auto r = lex.find(name);
  if (!r) return Gender::Unknown;
  if (r->male > 0 && r->female == 0) return Gender::Male;
  if (r->female > 0 && r->male == 0) return Gender::Female;
  if (r->female > 0 && r->male >= 10 * r->female) return Gender::ProbablyMale;
  if (r->male > 0 && r->female >= 10 * r->male) return Gender::ProbablyFemale;
  return Gender::Unknown;
}

}  // namespace kinpgm
