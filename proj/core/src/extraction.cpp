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

#include "kinpgm/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

namespace kinpgm {

namespace {

struct Token {
  std::string text;   // as written
  std::string lower;
};

const std::set<std::string, std::less<>> kStopwords = {
    "i",     "me",    "my",     "myself", "is",    "a",      "an",
    "the",   "and",   "named",  "called", "name",  "have",   "has",
    "yes",   "no",    "same",   "different", "he", "she",    "they",
    "his",   "her",   "their",  "your",   "you",   "of",     "not",
    "one",   "'s",    "person", "people", "who",   "what",   "was",
    "are",   "am",    "to",     "in",     "law",   "it",     "this",
    "that",  "skip",  "y",      "n",
};

const std::map<std::string, Gender, std::less<>> kGenderWords = {
    {"man", Gender::Male},     {"male", Gender::Male},
    {"boy", Gender::Male},     {"woman", Gender::Female},
    {"female", Gender::Female}, {"girl", Gender::Female},
};

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n,");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n,");
  return std::string(s.substr(b, e - b + 1));
}

std::string normalise_quotes(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    // U+2019 RIGHT SINGLE QUOTATION MARK
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
        static_cast<unsigned char>(s[i + 1]) == 0x80 &&
        static_cast<unsigned char>(s[i + 2]) == 0x99) {
      out += '\'';
      i += 2;
      continue;
    }
    out += s[i];
  }
  return out;
}

std::vector<Token> tokenize(std::string_view clause,
                            const RelationLexicon& lex) {
  std::vector<Token> raw;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    std::string lower = to_lower(cur);
    if (lower.size() > 2 && lower.ends_with("'s")) {
      raw.push_back({cur.substr(0, cur.size() - 2),
                     lower.substr(0, lower.size() - 2)});
      raw.push_back({"'s", "'s"});
    } else {
      raw.push_back({cur, lower});
    }
    cur.clear();
  };
  for (char c : clause) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' ||
        c == ':' || c == '"') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();

  // "mother in law" -> "mother-in-law"
  std::vector<Token> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i + 2 < raw.size() && raw[i + 1].lower == "in" &&
        raw[i + 2].lower == "law") {
      const std::string joined = raw[i].lower + "-in-law";
      if (lex.find(joined)) {
        out.push_back({raw[i].text + "-in-law", joined});
        i += 2;
        continue;
      }
    }
    out.push_back(raw[i]);
  }
  return out;
}

// The base of a participant plus the chain of relation words hanging off it:
// "my mother's husband" is (narrator, [mother, husband]).
struct ParticipantSpec {
  bool narrator = false;
  std::string name;
  std::vector<RelationLexiconEntry> chain;
  std::vector<std::string> words;  // original tokens, for spans
};

class ClauseParser {
 public:
  ClauseParser(const RelationLexicon& lex, ParsedUtterance& out)
      : lex_(lex), out_(out) {}

  bool is_name(const Token& t) const {
    if (t.lower.empty() || !std::isalpha(static_cast<unsigned char>(t.lower[0]))) {
      return false;
    }
    for (char c : t.lower) {
      if (!std::isalpha(static_cast<unsigned char>(c)) && c != '\'' && c != '-') {
        return false;
      }
    }
    return !kStopwords.contains(t.lower) && !kGenderWords.contains(t.lower) &&
           !lex_.find(t.lower);
  }

  std::optional<ParticipantSpec> participant(const std::vector<Token>& t,
                                             std::size_t b,
                                             std::size_t e) const {
    if (b >= e) return std::nullopt;
    ParticipantSpec spec;
    std::size_t pos = b;
    if (e - b == 1 && (t[b].lower == "i" || t[b].lower == "me" ||
                       t[b].lower == "myself")) {
      spec.narrator = true;
      spec.words = {t[b].text};
      return spec;
    }
    if (t[b].lower == "my") {
      spec.narrator = true;
      spec.words.push_back(t[b].text);
      pos = b + 1;
      if (pos >= e) return std::nullopt;
      const auto rel = lex_.find(t[pos].lower);
      if (!rel) return std::nullopt;
      spec.chain.push_back(*rel);
      spec.words.push_back(t[pos].text);
      ++pos;
    } else if (is_name(t[b])) {
      spec.name = capitalise(t[b].text);
      spec.words.push_back(t[b].text);
      pos = b + 1;
    } else {
      return std::nullopt;
    }
    while (pos < e) {
      if (t[pos].lower != "'s" || pos + 1 >= e) return std::nullopt;
      const auto rel = lex_.find(t[pos + 1].lower);
      if (!rel) return std::nullopt;
      spec.chain.push_back(*rel);
      spec.words.push_back(t[pos + 1].text);
      pos += 2;
    }
    return spec;
  }

  // Adds mentions for the base and every link but the last `drop` ones.
  std::size_t materialise(const ParticipantSpec& spec, std::size_t drop = 0) {
    std::size_t idx;
    std::string text;
    if (spec.narrator) {
      idx = narrator_mention();
      text = "my";
    } else {
      ParsedMention m;
      m.kind = ParsedMention::Kind::Name;
      m.name = spec.name;
      m.text = spec.name;
      idx = push(std::move(m));
      text = spec.name + "'s";
    }
    for (std::size_t i = 0; i + drop < spec.chain.size(); ++i) {
      const auto& rel = spec.chain[i];
      ParsedMention m;
      m.kind = ParsedMention::Kind::Description;
      m.anchor = idx;
      m.atom = rel.atom;
      m.gender = rel.gender;
      m.text = text + " " + spec.words[i + 1];
      text = m.text + "'s";
      const std::size_t next = push(std::move(m));
      implicit_triple(next, idx, rel);
      idx = next;
    }
    return idx;
  }

  std::size_t indefinite(const RelationLexiconEntry& rel,
                         const std::string& article,
                         const std::string& word) {
    ParsedMention m;
    m.kind = ParsedMention::Kind::Indefinite;
    m.anchor = narrator_mention();
    m.atom = rel.atom;
    m.gender = rel.gender;
    m.text = article + " " + word;
    const std::size_t idx = push(std::move(m));
    implicit_triple(idx, *out_.mentions[idx].anchor, rel);
    return idx;
  }

  void name_binding(std::size_t holder, const std::string& name) {
    ExtractedFact f;
    f.kind = ExtractedFact::Kind::NameBinding;
    f.holder = holder;
    f.name = capitalise(name);
    f.span = span_;
    out_.facts.push_back(std::move(f));
  }

  void gender_binding(std::size_t holder, Gender g) {
    ExtractedFact f;
    f.kind = ExtractedFact::Kind::GenderBinding;
    f.holder = holder;
    f.gender = g;
    f.span = span_;
    out_.facts.push_back(std::move(f));
  }

  void triple(std::size_t holder, std::size_t anchor,
              const RelationLexiconEntry& rel) {
    ExtractedFact f;
    f.kind = ExtractedFact::Kind::RelationTriple;
    f.holder = holder;
    f.anchor = anchor;
    f.atom = rel.atom;
    f.gender = rel.gender;
    f.span = span_;
    out_.facts.push_back(std::move(f));
  }

  std::optional<ExtractedFact> bare(const std::vector<Token>& t) const {
    std::string joined;
    for (const auto& tok : t) {
      if (!joined.empty()) joined += ' ';
      joined += tok.lower;
    }
    ExtractedFact f;
    f.kind = ExtractedFact::Kind::AnswerCandidate;
    f.span = span_;
    static const std::set<std::string, std::less<>> kYes = {"yes", "y"};
    static const std::set<std::string, std::less<>> kNo = {"no", "n"};
    static const std::set<std::string, std::less<>> kSame = {
        "same", "same person", "the same", "the same person"};
    static const std::set<std::string, std::less<>> kDifferent = {
        "different", "different people", "different person",
        "two different people"};
    static const std::set<std::string, std::less<>> kDontKnow = {
        "i don't know", "don't know", "dont know", "i dont know",
        "not sure", "no idea", "skip"};
    if (kYes.contains(joined)) {
      f.answer = AnswerToken::Yes;
    } else if (kNo.contains(joined)) {
      f.answer = AnswerToken::No;
    } else if (kSame.contains(joined)) {
      f.answer = AnswerToken::Same;
    } else if (kDifferent.contains(joined)) {
      f.answer = AnswerToken::Different;
    } else if (kDontKnow.contains(joined)) {
      f.answer = AnswerToken::DontKnow;
    } else if (t.size() == 1 && is_digits(t[0].lower) && t[0].lower.size() < 6) {
      f.answer = AnswerToken::Number;
      f.number = std::stoul(t[0].lower);
    } else if (t.size() == 1 && kGenderWords.contains(t[0].lower)) {
      f.answer = AnswerToken::GenderWord;
      f.gender = kGenderWords.find(t[0].lower)->second;
    } else if (t.size() == 1 && lex_.find(t[0].lower)) {
      const auto rel = *lex_.find(t[0].lower);
      f.answer = AnswerToken::RelationWord;
      f.atom = rel.atom;
      f.gender = rel.gender;
    } else if (t.size() == 1 && is_name(t[0])) {
      f.answer = AnswerToken::Name;
      f.name = capitalise(t[0].text);
    } else {
      return std::nullopt;
    }
    return f;
  }

  bool statement(const std::vector<Token>& t) {
    const std::size_t n = t.size();
    // I have a/an <rel> [named|called NAME]
    if (n >= 4 && t[0].lower == "i" && t[1].lower == "have" &&
        (t[2].lower == "a" || t[2].lower == "an" || t[2].lower == "one")) {
      const auto rel = lex_.find(t[3].lower);
      if (!rel) return false;
      if (n == 4) {
        indefinite(*rel, t[2].text, t[3].text);
        return true;
      }
      if (n == 6 && (t[4].lower == "named" || t[4].lower == "called") &&
          is_name(t[5])) {
        const std::size_t h = indefinite(*rel, t[2].text, t[3].text);
        name_binding(h, t[5].text);
        return true;
      }
      return false;
    }

    const auto is_it = std::find_if(t.begin(), t.end(),
                                    [](const Token& x) { return x.lower == "is"; });
    if (is_it == t.end()) return false;
    const auto p = static_cast<std::size_t>(is_it - t.begin());
    if (p == 0 || p + 1 >= n) return false;

    // <participant>'s name is NAME
    if (p >= 3 && t[p - 1].lower == "name" && t[p - 2].lower == "'s") {
      const auto spec = participant(t, 0, p - 2);
      if (!spec || spec->chain.empty() || n != p + 2 || !is_name(t[p + 1])) {
        return false;
      }
      name_binding(materialise(*spec), t[p + 1].text);
      return true;
    }

    const auto lhs = participant(t, 0, p);
    if (!lhs) return false;
    const bool lhs_is_description = !lhs->chain.empty();
    if (lhs->narrator && !lhs_is_description) return false;
    const std::size_t r = p + 1;

    // ... is named|called NAME
    if (n == r + 2 && (t[r].lower == "named" || t[r].lower == "called") &&
        is_name(t[r + 1])) {
      if (!lhs_is_description) return false;
      name_binding(materialise(*lhs), t[r + 1].text);
      return true;
    }
    // ... is [a|an] man|woman|male|female
    {
      std::size_t g = r;
      if (n == r + 2 && (t[r].lower == "a" || t[r].lower == "an")) g = r + 1;
      if (g + 1 == n && kGenderWords.contains(t[g].lower)) {
        gender_binding(materialise(*lhs), kGenderWords.find(t[g].lower)->second);
        return true;
      }
    }
    // ... is my <rel> / ... is NAME's <rel>
    if (const auto rhs = participant(t, r, n); rhs && !rhs->chain.empty()) {
      const std::size_t holder = materialise(*lhs);
      const std::size_t anchor = materialise(*rhs, 1);
      triple(holder, anchor, rhs->chain.back());
      return true;
    }
    // my <rel> is NAME
    if (n == r + 1 && lhs_is_description && is_name(t[r])) {
      name_binding(materialise(*lhs), t[r].text);
      return true;
    }
    return false;
  }

  void clause(const std::string& text, bool only_clause) {
    span_ = text;
    const auto tokens = tokenize(text, lex_);
    const std::size_t mentions_before = out_.mentions.size();
    const std::size_t facts_before = out_.facts.size();
    const auto narrator_before = narrator_;
    if (only_clause) {
      if (auto f = bare(tokens)) {
        out_.facts.push_back(std::move(*f));
        return;
      }
    }
    if (statement(tokens)) return;
    // Drop anything a failed attempt may have left behind.
    out_.mentions.resize(mentions_before);
    out_.facts.resize(facts_before);
    narrator_ = narrator_before;
    ExtractedFact f;
    f.kind = ExtractedFact::Kind::Unparseable;
    f.span = text;
    out_.facts.push_back(std::move(f));
  }

 private:
  std::size_t push(ParsedMention m) {
    out_.mentions.push_back(std::move(m));
    return out_.mentions.size() - 1;
  }

  std::size_t narrator_mention() {
    if (!narrator_) {
      ParsedMention m;
      m.kind = ParsedMention::Kind::Narrator;
      m.text = "I";
      narrator_ = push(std::move(m));
    }
    return *narrator_;
  }

  void implicit_triple(std::size_t holder, std::size_t anchor,
                       const RelationLexiconEntry& rel) {
    triple(holder, anchor, rel);
  }

  const RelationLexicon& lex_;
  ParsedUtterance& out_;
  std::optional<std::size_t> narrator_;
  std::string span_;
};

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

bool gender_compatible(Gender have, Gender want) {
  if (!is_definite(want)) return true;
  const auto lean = leaning(have);
  return !lean || *lean == want;
}

}  // namespace

std::string capitalise(std::string_view name) {
  std::string out(name);
  if (!out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

std::vector<std::string> split_clauses(std::string_view text) {
  const std::string s = normalise_quotes(text);
  std::vector<std::string> pieces;
  std::string cur;
  for (char c : s) {
    if (c == '.' || c == '!' || c == '?' || c == ';') {
      pieces.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  pieces.push_back(cur);

  std::vector<std::string> out;
  for (const std::string& piece : pieces) {
    // Split on the standalone word "and", case-insensitively.
    const std::string lower = to_lower(piece);
    std::size_t start = 0;
    std::size_t pos = 0;
    while ((pos = lower.find("and", pos)) != std::string::npos) {
      const bool left = pos == 0 || std::isspace(static_cast<unsigned char>(lower[pos - 1])) ||
                        lower[pos - 1] == ',';
      const bool right = pos + 3 == lower.size() ||
                         std::isspace(static_cast<unsigned char>(lower[pos + 3]));
      if (left && right) {
        out.push_back(trim(piece.substr(start, pos - start)));
        start = pos + 3;
      }
      pos += 3;
    }
    out.push_back(trim(piece.substr(start)));
  }
  std::erase_if(out, [](const std::string& c) { return c.empty(); });
  return out;
}

std::optional<ExtractedFact> ParsedUtterance::bare_answer() const {
  if (facts.size() == 1 &&
      facts[0].kind == ExtractedFact::Kind::AnswerCandidate) {
    return facts[0];
  }
  return std::nullopt;
}

bool ParsedUtterance::has_statements() const {
  return std::any_of(facts.begin(), facts.end(), [](const ExtractedFact& f) {
    return f.kind == ExtractedFact::Kind::RelationTriple ||
           f.kind == ExtractedFact::Kind::NameBinding ||
           f.kind == ExtractedFact::Kind::GenderBinding;
  });
}

ParsedUtterance parse_utterance(std::string_view text,
                                const RelationLexicon& relations) {
  ParsedUtterance out;
  out.clauses = split_clauses(text);
  ClauseParser parser(relations, out);
  for (const std::string& c : out.clauses) {
    parser.clause(c, out.clauses.size() == 1);
  }
  return out;
}

MentionGroups group_mentions(const ParsedUtterance& u) {
  const std::size_t n = u.mentions.size();
  UnionFind uf(n);

  std::vector<std::string> name(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (u.mentions[i].kind == ParsedMention::Kind::Name) {
      name[i] = to_lower(u.mentions[i].name);
    }
  }
  for (const auto& f : u.facts) {
    if (f.kind == ExtractedFact::Kind::NameBinding && name[f.holder].empty() &&
        u.mentions[f.holder].kind != ParsedMention::Kind::Narrator) {
      name[f.holder] = to_lower(f.name);
    }
  }
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < n; ++i) {
    if (name[i].empty()) continue;
    const auto [it, fresh] = by_name.emplace(name[i], i);
    if (!fresh) uf.unite(it->second, i);
  }

  // Identical descriptions ("my father" twice) share an entity. Anchors can
  // merge as a result, so repeat until nothing changes.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::tuple<std::size_t, Relation, Gender>, std::size_t> by_desc;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& m = u.mentions[i];
      if (m.kind != ParsedMention::Kind::Description) continue;
      const auto key = std::make_tuple(uf.find(*m.anchor), m.atom, m.gender);
      const auto [it, fresh] = by_desc.emplace(key, i);
      if (!fresh && uf.unite(it->second, i)) changed = true;
    }
  }

  MentionGroups g;
  g.group_of.assign(n, 0);
  std::map<std::size_t, std::size_t> group_of_root;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(i);
    const auto [it, fresh] = group_of_root.emplace(root, g.members.size());
    if (fresh) g.members.emplace_back();
    g.group_of[i] = it->second;
    g.members[it->second].push_back(i);
  }
  return g;
}

ParsedUtterance without_spans(const ParsedUtterance& u,
                              const std::set<std::string>& spans) {
  ParsedUtterance out;
  for (const auto& c : u.clauses) {
    if (!spans.contains(c)) out.clauses.push_back(c);
  }
  std::vector<bool> keep(u.mentions.size(), false);
  auto mark = [&](std::size_t m) {
    for (std::optional<std::size_t> x = m; x && !keep[*x];
         x = u.mentions[*x].anchor) {
      keep[*x] = true;
    }
  };
  for (const auto& f : u.facts) {
    if (spans.contains(f.span)) continue;
    if (f.kind == ExtractedFact::Kind::RelationTriple) {
      mark(f.holder);
      mark(f.anchor);
    } else if (f.kind == ExtractedFact::Kind::NameBinding ||
               f.kind == ExtractedFact::Kind::GenderBinding) {
      mark(f.holder);
    }
  }
  std::vector<std::size_t> index(u.mentions.size(), 0);
  for (std::size_t i = 0; i < u.mentions.size(); ++i) {
    if (!keep[i]) continue;
    index[i] = out.mentions.size();
    ParsedMention m = u.mentions[i];
    if (m.anchor) m.anchor = index[*m.anchor];
    out.mentions.push_back(std::move(m));
  }
  for (const auto& f : u.facts) {
    if (spans.contains(f.span)) continue;
    ExtractedFact g = f;
    g.holder = keep[f.holder] ? index[f.holder] : 0;
    g.anchor = keep[f.anchor] ? index[f.anchor] : 0;
    out.facts.push_back(std::move(g));
  }
  return out;
}

GroundingPlan resolve_mentions(const ParsedUtterance& u,
                               const WorldModel& world, EntityId narrator,
                               const ForcedChoices& forced) {
  GroundingPlan plan;
  plan.groups = group_mentions(u);
  plan.entity.assign(plan.groups.members.size(), std::nullopt);

  auto candidates = [&](std::size_t m) {
    std::vector<EntityId> out;
    const ParsedMention& pm = u.mentions[m];
    switch (pm.kind) {
      case ParsedMention::Kind::Narrator:
        out.push_back(narrator);
        break;
      case ParsedMention::Kind::Name: {
        const std::string want = to_lower(pm.name);
        for (const auto& [id, e] : world.entities()) {
          if (e.narrator) continue;
          for (const auto& nm : e.names) {
            if (to_lower(nm) == want) {
              out.push_back(id);
              break;
            }
          }
        }
        break;
      }
      case ParsedMention::Kind::Description: {
        const auto& anchor = plan.entity[plan.groups.group_of[*pm.anchor]];
        if (!anchor) break;
        for (const auto& [id, e] : world.entities()) {
          if (id == *anchor) continue;
          const auto rel = world.possible_relations(id, *anchor);
          if (rel && *rel == RelationSet{pm.atom} &&
              gender_compatible(e.gender, pm.gender)) {
            out.push_back(id);
          }
        }
        break;
      }
      case ParsedMention::Kind::Indefinite:
        break;
    }
    return out;
  };

  for (std::size_t g = 0; g < plan.groups.members.size(); ++g) {
    bool chosen = false;
    for (std::size_t m : plan.groups.members[g]) {
      const auto it = forced.find(to_lower(u.mentions[m].text));
      if (it != forced.end()) {
        plan.entity[g] = it->second;
        chosen = true;
        break;
      }
    }
    if (chosen) continue;
    std::optional<EntityId> unique;
    std::optional<std::pair<std::size_t, std::vector<EntityId>>> ambiguous;
    for (std::size_t m : plan.groups.members[g]) {
      auto c = candidates(m);
      if (c.size() == 1) {
        unique = c.front();
        break;
      }
      if (c.size() > 1 && !ambiguous) ambiguous.emplace(m, std::move(c));
    }
    if (unique) {
      plan.entity[g] = unique;
    } else if (ambiguous) {
      plan.ambiguity = Clarification{g, u.mentions[ambiguous->first].text,
                                     std::move(ambiguous->second)};
      return plan;
    }
  }
  return plan;
}

}  // namespace kinpgm
