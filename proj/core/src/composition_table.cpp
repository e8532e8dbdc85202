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

#include "kinpgm/composition_table.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace kinpgm {

namespace {

std::string body_line(const CompositionTable& m, Relation r1, Relation r2) {
  std::string line;
  line += name_of(r1);
  line += ' ';
  line += name_of(r2);
  line += " :";
  const RelationSet s = m.at(r1, r2);
  for (Relation r : alphabetical_relations()) {
    if (!s.contains(r)) continue;
    line += ' ';
    line += name_of(r);
  }
  return line;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

Relation parse_atom(const std::string& token, int line_no) {
  auto r = relation_from_name(token);
  if (!r) {
    throw TableFormatError("line " + std::to_string(line_no) +
                           ": unknown relation '" + token + "'");
  }
  return *r;
}

}  // namespace

RelationSet CompositionTable::compose(RelationSet s1, RelationSet s2) const {
  RelationSet out;
  for (Relation r1 : s1) {
    for (Relation r2 : s2) out |= at(r1, r2);
    if (out.is_full()) break;
  }
  return out;
}

std::uint64_t CompositionTable::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Relation r1 : alphabetical_relations()) {
    for (Relation r2 : alphabetical_relations()) {
      for (unsigned char c : body_line(*this, r1, r2) + "\n") {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
    }
  }
  return h;
}

std::string AxiomViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::EmptyEntry:
      os << "empty entry: M(" << r1 << ", " << r2 << ") is empty";
      break;
    case Kind::NotInverseClosed:
      os << "not inverse-closed: M(" << r1 << ", " << r2 << ") is not the inverse of M("
         << inverse(r2) << ", " << inverse(r1) << ")";
      break;
    case Kind::Inconsistent:
      os << "inconsistent: " << *member << " in M(" << r1 << ", " << r2
         << ") but " << r1 << " not in M(" << *member << ", " << inverse(r2)
         << ") or " << r2 << " not in M(" << inverse(r1) << ", " << *member
         << ")";
      break;
    case Kind::InconsistentInverse:
      os << "inconsistent inverse: " << inverse(*member) << " in M(" << r1 << ", " << r2
         << ")^-1 but " << inverse(r2) << " not in M(" << inverse(*member)
         << ", " << r1 << ") or " << inverse(r1) << " not in M(" << r2 << ", "
         << inverse(*member) << ")";
      break;
  }
  return os.str();
}

std::vector<AxiomViolation> check_axioms(const CompositionTable& m) {
  using Kind = AxiomViolation::Kind;
  std::vector<AxiomViolation> out;
  for (Relation r1 : kAllRelations) {
    for (Relation r2 : kAllRelations) {
      const RelationSet s = m.at(r1, r2);
      if (s.empty()) out.push_back({Kind::EmptyEntry, r1, r2, std::nullopt});
      if (m.at(inverse(r2), inverse(r1)) != invert(s)) {
        out.push_back({Kind::NotInverseClosed, r1, r2, std::nullopt});
      }
      for (Relation r : s) {
        if (!m.at(r, inverse(r2)).contains(r1) ||
            !m.at(inverse(r1), r).contains(r2)) {
          out.push_back({Kind::Inconsistent, r1, r2, r});
        }
        // Members of the inverted entry are r^-1 for r in s.
        const Relation rinv = inverse(r);
        if (!m.at(rinv, r1).contains(inverse(r2)) ||
            !m.at(r2, rinv).contains(inverse(r1))) {
          out.push_back({Kind::InconsistentInverse, r1, r2, r});
        }
      }
    }
  }
  return out;
}

bool supports(Relation first, Relation second, const CliqueContext& clique,
              const CompositionTable& m) {
  using D = EdgeDirection;
  // third is X -> Y; the inverted set reads Y -> X.
  const RelationSet xy = clique.third;
  const RelationSet yx = invert(xy);
  if (clique.first == D::IntoShared && clique.second == D::IntoShared) {
    for (Relation r : yx) {
      if (m.at(r, first).contains(second)) return true;
    }
    return false;
  }
  if (clique.first == D::FromShared && clique.second == D::FromShared) {
    for (Relation r : xy) {
      if (m.at(first, r).contains(second)) return true;
    }
    return false;
  }
  if (clique.first == D::IntoShared && clique.second == D::FromShared) {
    for (Relation r : xy) {
      if (m.at(inverse(first), r).contains(second)) return true;
    }
    return false;
  }
  for (Relation r : yx) {
    if (m.at(r, inverse(first)).contains(second)) return true;
  }
  return false;
}

void write_table(std::ostream& os, const CompositionTable& m) {
  const TableMetadata& meta = m.metadata();
  os << "# kinship composition table\n"
     << "# entry: <r1> <r2> : relations possible for (a, c) given r1(a, b) "
        "and r2(b, c)\n";
  os << "version: " << meta.version << "\n";
  os << "seed: " << meta.seed << "\n";
  os << "budget: " << meta.budget << "\n";
  os << "samples: " << meta.samples << "\n";
  os << "checksum: " << hex64(m.checksum()) << "\n";
  for (Relation r1 : alphabetical_relations()) {
    for (Relation r2 : alphabetical_relations()) {
      os << body_line(m, r1, r2) << "\n";
    }
  }
}

CompositionTable read_table(std::istream& is) {
  CompositionTable m;
  TableMetadata& meta = m.metadata();
  std::array<bool, kRelationCount * kRelationCount> seen{};
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw TableFormatError("line " + std::to_string(line_no) +
                             ": expected ':'");
    }
    const std::string head = trim(line.substr(0, colon));
    const std::string tail = trim(line.substr(colon + 1));
    if (head.find(' ') == std::string::npos) {
      try {
        if (head == "version") {
          meta.version = tail;
        } else if (head == "seed") {
          meta.seed = std::stoull(tail);
        } else if (head == "budget") {
          meta.budget = std::stoull(tail);
        } else if (head == "samples") {
          meta.samples = std::stoull(tail);
        } else if (head == "checksum") {
          meta.declared_checksum = std::stoull(tail, nullptr, 16);
        } else {
          throw TableFormatError("line " + std::to_string(line_no) +
                                 ": unknown header '" + head + "'");
        }
      } catch (const std::logic_error&) {
        throw TableFormatError("line " + std::to_string(line_no) +
                               ": bad value for '" + head + "'");
      }
      continue;
    }
    std::istringstream hs(head);
    std::string a, b, extra;
    hs >> a >> b;
    if (hs >> extra) {
      throw TableFormatError("line " + std::to_string(line_no) +
                             ": expected two atoms before ':'");
    }
    const Relation r1 = parse_atom(a, line_no);
    const Relation r2 = parse_atom(b, line_no);
    auto& flag = seen[index_of(r1) * kRelationCount + index_of(r2)];
    if (flag) {
      throw TableFormatError("line " + std::to_string(line_no) +
                             ": duplicate entry " + a + " " + b);
    }
    flag = true;
    RelationSet s;
    std::istringstream ts(tail);
    std::string tok;
    while (ts >> tok) s.insert(parse_atom(tok, line_no));
    m.set(r1, r2, s);
  }
  for (Relation r1 : kAllRelations) {
    for (Relation r2 : kAllRelations) {
      if (!seen[index_of(r1) * kRelationCount + index_of(r2)]) {
        throw TableFormatError("missing entry " + std::string(name_of(r1)) +
                               " " + std::string(name_of(r2)));
      }
    }
  }
  return m;
}

CompositionTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TableFormatError("cannot open " + path.string());
  return read_table(in);
}

void save_table(const std::filesystem::path& path, const CompositionTable& m) {
  std::ofstream out(path);
  if (!out) throw TableFormatError("cannot write " + path.string());
  write_table(out, m);
  if (!out) throw TableFormatError("write failed for " + path.string());
}

}  // namespace kinpgm
