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

#include "kinpgm/dialog.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "kinpgm/extraction.hpp"

namespace kinpgm {

namespace {

constexpr std::pair<QuestionKind, std::string_view> kKindNames[] = {
    {QuestionKind::ChooseRelation, "choose-relation"},
    {QuestionKind::YesNoSelf, "yes-no-self"},
    {QuestionKind::YesNoRelation, "yes-no-relation"},
    {QuestionKind::AskGender, "ask-gender"},
    {QuestionKind::AskName, "ask-name"},
    {QuestionKind::ConfirmSplit, "confirm-split"},
    {QuestionKind::ClarifyMention, "clarify-mention"},
};

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '\'' ||
         c == '-';
}

// Case-insensitive whole-word replacement.
std::string replace_word(const std::string& text, const std::string& word,
                         const std::string& with) {
  if (word.empty()) return text;
  const std::string lt = to_lower(text);
  const std::string lw = to_lower(word);
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t pos = lt.find(lw, i);
    if (pos == std::string::npos) break;
    const std::size_t end = pos + lw.size();
    const bool left = pos == 0 || !is_word_char(text[pos - 1]);
    // A possessive "'s" still ends the word.
    const bool right = end == text.size() || !is_word_char(text[end]) ||
                       (text[end] == '\'' && end + 1 < text.size() &&
                        (text[end + 1] == 's' || text[end + 1] == 'S'));
    out += text.substr(i, pos - i);
    if (left && right) {
      out += with;
    } else {
      out += text.substr(pos, lw.size());
    }
    i = end;
  }
  out += text.substr(i);
  return out;
}

std::string normalise(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  while (!out.empty() && (out.back() == '.' || out.back() == '!' ||
                          out.back() == '?' || out.back() == ' ')) {
    out.pop_back();
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string first_name(const Entity& e) {
  return e.names.empty() ? std::string() : *e.names.begin();
}

bool name_is_unique(const WorldModel& w, EntityId e, const std::string& name) {
  const std::string want = to_lower(name);
  for (const auto& [id, other] : w.entities()) {
    if (id == e) continue;
    for (const auto& n : other.names) {
      if (to_lower(n) == want) return false;
    }
  }
  return true;
}

// "your daughter" when e is known to bear exactly one kin atom to the
// narrator.
std::string relation_phrase(const WorldModel& w, const RelationLexicon& lex,
                            EntityId e) {
  const auto narrator = w.narrator();
  if (!narrator || *narrator == e) return {};
  const auto rel = w.possible_relations(e, *narrator);
  if (!rel) return {};
  const auto atom = rel->single();
  if (!atom || *atom == Relation::Self || *atom == Relation::OutOfGraph) {
    return {};
  }
  return "your " + lex.surface_for(*atom, w.entity(e).gender);
}

std::string option_label(const RelationLexicon& lex, Relation r, Gender g) {
  if (r == Relation::Self) return "the same person";
  if (r == Relation::OutOfGraph) return "none of these";
  return lex.surface_for(r, g);
}

// Builds text and template together: a slot is used whenever an entity is
// referred to by name.
class Renderer {
 public:
  Renderer(Question& q, const WorldModel& w, const RelationLexicon& lex)
      : q_(q), w_(w), lex_(lex) {}

  // Reference to e for use in a sentence; named references become slots.
  std::string ref(EntityId e, bool prefer_relation = false,
                  bool force_name = false) {
    if (w_.entity(e).narrator) return "you";
    const std::string name = first_name(w_.entity(e));
    const std::string rel = relation_phrase(w_, lex_, e);
    if (force_name && !name.empty()) return slot(name);
    if (prefer_relation && !rel.empty()) return rel;
    if (!name.empty() && (rel.empty() || name_is_unique(w_, e, name))) {
      return slot(name);
    }
    if (!rel.empty()) return rel;
    return "the person you mentioned";
  }

  // Possessive form: "your" for the narrator, "Sam's" otherwise.
  std::string possessive(EntityId e) {
    if (w_.entity(e).narrator) return "your";
    return ref(e) + "'s";
  }

  std::string slot(const std::string& name) {
    auto it = std::find(q_.slot_names.begin(), q_.slot_names.end(), name);
    std::size_t i = static_cast<std::size_t>(it - q_.slot_names.begin());
    if (it == q_.slot_names.end()) {
      q_.slot_names.push_back(name);
    }
    return i == 0 ? "{X}" : (i == 1 ? "{Y}" : "{Z}");
  }

  void finish(std::string tmpl) {
    q_.template_id = tmpl;
    static const char* kSlots[] = {"{X}", "{Y}", "{Z}"};
    for (std::size_t i = 0; i < q_.slot_names.size() && i < 3; ++i) {
      std::size_t pos;
      while ((pos = tmpl.find(kSlots[i])) != std::string::npos) {
        tmpl.replace(pos, 3, q_.slot_names[i]);
      }
    }
    q_.text = tmpl;
  }

  std::string numbered(const std::vector<std::string>& options) {
    std::string s;
    for (std::size_t i = 0; i < options.size(); ++i) {
      s += " " + std::to_string(i + 1) + ") " + options[i];
    }
    return s;
  }

  void run() {
    q_.slot_names.clear();
    q_.options.clear();
    switch (q_.kind) {
      case QuestionKind::ChooseRelation: {
        const Gender g = w_.entity(q_.a).gender;
        for (Relation r : q_.candidates) {
          q_.options.push_back(option_label(lex_, r, g));
        }
        const std::string x = ref(q_.a);
        const std::string y = w_.entity(q_.b).narrator ? "you" : ref(q_.b);
        finish("What is " + x + " to " + y + "?" + numbered(q_.options));
        break;
      }
      case QuestionKind::YesNoRelation: {
        const std::string x = ref(q_.a);
        const std::string word =
            lex_.surface_for(q_.atom, w_.entity(q_.a).gender);
        finish("Is " + x + " " + possessive(q_.b) + " " + word + "?");
        q_.options = {"yes", "no"};
        break;
      }
      case QuestionKind::YesNoSelf: {
        const std::string x = ref(q_.a, false, true);
        std::string y = w_.entity(q_.b).narrator ? "you" : ref(q_.b, true);
        if (y == x) y = "the other " + y;
        finish("Is " + x + " the same person as " + y + "?");
        q_.options = {"yes", "no"};
        break;
      }
      case QuestionKind::AskGender: {
        const std::string x = ref(q_.a);
        if (q_.gender == Gender::ProbablyMale) {
          finish("Is " + x + " a man?");
          q_.options = {"yes", "no"};
        } else if (q_.gender == Gender::ProbablyFemale) {
          finish("Is " + x + " a woman?");
          q_.options = {"yes", "no"};
        } else {
          finish("Is " + x + " male or female?");
          q_.options = {"male", "female"};
        }
        break;
      }
      case QuestionKind::AskName: {
        const std::string rel = relation_phrase(w_, lex_, q_.a);
        finish(rel.empty() ? "What is the name of the person you mentioned?"
                           : "What is " + rel + "'s name?");
        break;
      }
      case QuestionKind::ConfirmSplit: {
        const std::string name = first_name(w_.entity(q_.a));
        std::string current = relation_phrase(w_, lex_, q_.a);
        if (current.empty()) current = "the one I already know";
        const std::string word = lex_.surface_for(q_.atom, q_.gender);
        const std::string refused =
            w_.entity(q_.b).narrator ? "your " + word
                                     : possessive(q_.b) + " " + word;
        if (!name.empty()) {
          finish("It sounds like there are two different people called " +
                 slot(name) + ": " + current + " and " + refused +
                 ". Is that right?");
        } else {
          finish("It sounds like " + current + " and " + refused +
                 " are two different people. Is that right?");
        }
        q_.options = {"yes", "no"};
        break;
      }
      case QuestionKind::ClarifyMention: {
        for (const auto& c : q_.choices) {
          if (!c || !w_.has_entity(*c)) {
            q_.options.push_back("someone new");
            continue;
          }
          const std::string name = first_name(w_.entity(*c));
          const std::string rel = relation_phrase(w_, lex_, *c);
          std::string label = name.empty() ? rel : name;
          if (!name.empty() && !rel.empty()) label += ", " + rel;
          if (label.empty()) label = "person #" + std::to_string(*c);
          q_.options.push_back(label);
        }
        finish("Which " + q_.phrase + " do you mean?" + numbered(q_.options));
        break;
      }
    }
  }

 private:
  Question& q_;
  const WorldModel& w_;
  const RelationLexicon& lex_;
};

std::optional<Answer> validate(const Question& q, Answer a) {
  switch (a.value) {
    case Answer::Value::Atom:
      if (q.kind != QuestionKind::ChooseRelation ||
          std::find(q.candidates.begin(), q.candidates.end(), a.atom) ==
              q.candidates.end()) {
        return std::nullopt;
      }
      return a;
    case Answer::Value::Choice:
      if (q.kind != QuestionKind::ClarifyMention || a.choice >= q.choices.size()) {
        return std::nullopt;
      }
      return a;
    case Answer::Value::Yes:
    case Answer::Value::No:
      if (q.kind == QuestionKind::YesNoSelf ||
          q.kind == QuestionKind::YesNoRelation ||
          q.kind == QuestionKind::ConfirmSplit) {
        return a;
      }
      if (q.kind == QuestionKind::AskGender && is_probable(q.gender)) {
        const bool yes = a.value == Answer::Value::Yes;
        a.value = Answer::Value::Gender;
        a.gender = yes ? *leaning(q.gender) : opposite(*leaning(q.gender));
        return a;
      }
      return std::nullopt;
    case Answer::Value::Gender:
      return q.kind == QuestionKind::AskGender ? std::optional(a) : std::nullopt;
    case Answer::Value::Name:
      return q.kind == QuestionKind::AskName ? std::optional(a) : std::nullopt;
    case Answer::Value::Declined:
      return a;
    case Answer::Value::Unknown:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Answer> direct(const Question& q, const ParsedUtterance& u) {
  Answer a;
  if (const auto bare = u.bare_answer()) {
    switch (bare->answer) {
      case AnswerToken::Yes:
        a.value = Answer::Value::Yes;
        break;
      case AnswerToken::No:
        a.value = Answer::Value::No;
        break;
      case AnswerToken::Same:
        if (q.kind == QuestionKind::YesNoSelf) a.value = Answer::Value::Yes;
        if (q.kind == QuestionKind::ConfirmSplit) a.value = Answer::Value::No;
        break;
      case AnswerToken::Different:
        if (q.kind == QuestionKind::YesNoSelf) a.value = Answer::Value::No;
        if (q.kind == QuestionKind::ConfirmSplit) a.value = Answer::Value::Yes;
        break;
      case AnswerToken::DontKnow:
        a.value = Answer::Value::Declined;
        break;
      case AnswerToken::Number:
        if (bare->number < 1) break;
        if (q.kind == QuestionKind::ChooseRelation &&
            bare->number <= q.candidates.size()) {
          a.value = Answer::Value::Atom;
          a.atom = q.candidates[bare->number - 1];
        } else if (q.kind == QuestionKind::ClarifyMention) {
          a.value = Answer::Value::Choice;
          a.choice = bare->number - 1;
        }
        break;
      case AnswerToken::RelationWord:
        a.value = Answer::Value::Atom;
        a.atom = bare->atom;
        a.gender = bare->gender;
        break;
      case AnswerToken::GenderWord:
        a.value = Answer::Value::Gender;
        a.gender = bare->gender;
        break;
      case AnswerToken::Name:
        a.value = Answer::Value::Name;
        a.name = bare->name;
        break;
    }
    if (a.value == Answer::Value::Unknown) return std::nullopt;
    // The gender of a yes/no reply to "Is X a man?" depends on the guess.
    if (q.kind == QuestionKind::AskGender &&
        (a.value == Answer::Value::Yes || a.value == Answer::Value::No)) {
      if (!is_probable(q.gender)) return std::nullopt;
      const Gender guess = *leaning(q.gender);
      a.gender = a.value == Answer::Value::Yes ? guess : opposite(guess);
      a.value = Answer::Value::Gender;
      return a;
    }
    return validate(q, a);
  }

  // Question-specific statement forms.
  if (q.kind == QuestionKind::AskName) {
    std::optional<std::string> name;
    for (const auto& f : u.facts) {
      if (f.kind != ExtractedFact::Kind::NameBinding) continue;
      if (name) return std::nullopt;
      name = f.name;
    }
    if (name) {
      a.value = Answer::Value::Name;
      a.name = *name;
      return a;
    }
  }
  if (q.kind == QuestionKind::YesNoRelation && !q.slot_names.empty() &&
      u.facts.size() == 1 &&
      u.facts[0].kind == ExtractedFact::Kind::RelationTriple) {
    const auto& f = u.facts[0];
    const auto& holder = u.mentions[f.holder];
    const auto& anchor = u.mentions[f.anchor];
    if (holder.kind == ParsedMention::Kind::Name &&
        to_lower(holder.name) == to_lower(q.slot_names[0]) &&
        anchor.kind == ParsedMention::Kind::Narrator && f.atom == q.atom) {
      a.value = Answer::Value::Yes;
      return a;
    }
  }
  return std::nullopt;
}

// Matches `text` against a pattern whose {X}/{Y} slots are already filled;
// {NAME} matches one word and is captured.
std::optional<std::optional<std::string>> match_pattern(
    const std::string& pattern, std::string_view text) {
  const auto pt = split_ws(normalise(pattern));
  std::string raw(text);
  while (!raw.empty() && (raw.back() == '.' || raw.back() == '!' ||
                          raw.back() == '?' || std::isspace(static_cast<unsigned char>(raw.back())))) {
    raw.pop_back();
  }
  const auto tt_orig = split_ws(raw);
  const auto tt = split_ws(normalise(text));
  if (pt.size() != tt.size() || tt.size() != tt_orig.size()) {
    return std::nullopt;
  }
  std::optional<std::string> captured;
  for (std::size_t i = 0; i < pt.size(); ++i) {
    if (pt[i] == "{name}") {
      captured = capitalise(tt_orig[i]);
      continue;
    }
    if (pt[i] != tt[i]) return std::nullopt;
  }
  return captured;
}

}  // namespace

std::string_view name_of(QuestionKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "choose-relation";
}

std::optional<QuestionKind> question_kind_from_name(std::string_view name) {
  for (const auto& [kind, n] : kKindNames) {
    if (n == name) return kind;
  }
  return std::nullopt;
}

std::string_view family_of(QuestionKind k) {
  switch (k) {
    case QuestionKind::YesNoSelf:
    case QuestionKind::YesNoRelation:
    case QuestionKind::ConfirmSplit:
      return "yes-no";
    default:
      return name_of(k);
  }
}

void render(Question& q, const WorldModel& w, const RelationLexicon& lex) {
  Renderer(q, w, lex).run();
}

std::string describe(const WorldModel& w, const RelationLexicon& lex,
                     EntityId e, bool prefer_relation) {
  Question scratch;
  Renderer r(scratch, w, lex);
  std::string s = r.ref(e, prefer_relation);
  if (s == "{X}") s = scratch.slot_names.front();
  return s;
}

std::string Answer::canonical() const {
  switch (value) {
    case Value::Yes: return "yes";
    case Value::No: return "no";
    case Value::Atom: return "atom:" + std::string(kinpgm::name_of(atom));
    case Value::Name: return "name:" + name;
    case Value::Gender: return "gender:" + std::string(kinpgm::name_of(gender));
    case Value::Choice: return "choice:" + std::to_string(choice + 1);
    case Value::Declined: return "declined";
    case Value::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Answer> Answer::from_canonical(std::string_view s) {
  Answer a;
  const auto colon = s.find(':');
  const std::string_view head = s.substr(0, colon);
  const std::string_view tail =
      colon == std::string_view::npos ? std::string_view() : s.substr(colon + 1);
  if (s == "yes") {
    a.value = Value::Yes;
  } else if (s == "no") {
    a.value = Value::No;
  } else if (s == "declined") {
    a.value = Value::Declined;
  } else if (head == "atom") {
    const auto r = relation_from_name(tail);
    if (!r) return std::nullopt;
    a.value = Value::Atom;
    a.atom = *r;
  } else if (head == "name" && !tail.empty()) {
    a.value = Value::Name;
    a.name = std::string(tail);
  } else if (head == "gender") {
    const auto g = gender_from_name(tail);
    if (!g) return std::nullopt;
    a.value = Value::Gender;
    a.gender = *g;
  } else if (head == "choice") {
    const std::string t(tail);
    if (t.empty() || !std::all_of(t.begin(), t.end(), ::isdigit) ||
        t.size() > 6 || std::stoul(t) == 0) {
      return std::nullopt;
    }
    a.value = Value::Choice;
    a.choice = std::stoul(t) - 1;
  } else {
    return std::nullopt;
  }
  return a;
}

ParaphraseStore::ParaphraseStore(std::filesystem::path file)
    : file_(std::move(file)) {
  std::ifstream in(*file_);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t1 = line.find('\t');
    if (t1 == std::string::npos) continue;
    const auto t2 = line.find('\t', t1 + 1);
    if (t2 == std::string::npos) continue;
    ParaphraseEntry e{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1),
                      line.substr(t2 + 1)};
    if (!Answer::from_canonical(e.answer) &&
        e.answer != "name:{NAME}") {
      continue;
    }
    const auto it = std::find_if(
        entries_.begin(), entries_.end(), [&](const ParaphraseEntry& x) {
          return x.context == e.context &&
                 normalise(x.pattern) == normalise(e.pattern);
        });
    if (it != entries_.end()) {
      *it = std::move(e);
    } else {
      entries_.push_back(std::move(e));
    }
  }
}

void ParaphraseStore::add(ParaphraseEntry entry) {
  for (std::string* s : {&entry.context, &entry.pattern, &entry.answer}) {
    std::replace_if(s->begin(), s->end(),
                    [](char c) { return c == '\t' || c == '\n' || c == '\r'; },
                    ' ');
  }
  std::lock_guard lock(mu_);
  const auto it = std::find_if(
      entries_.begin(), entries_.end(), [&](const ParaphraseEntry& x) {
        return x.context == entry.context &&
               normalise(x.pattern) == normalise(entry.pattern);
      });
  if (it != entries_.end()) {
    *it = entry;
  } else {
    entries_.push_back(entry);
  }
  if (file_) {
    std::ofstream out(*file_, std::ios::app);
    out << entry.context << '\t' << entry.pattern << '\t' << entry.answer
        << '\n';
  }
}

std::vector<ParaphraseEntry> ParaphraseStore::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t ParaphraseStore::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::optional<Answer> ParaphraseStore::lookup(const Question& q,
                                              std::string_view text) const {
  const std::string family = "kind:" + std::string(family_of(q.kind));
  std::lock_guard lock(mu_);
  for (const std::string& context : {q.template_id, family}) {
    // Most recent entry wins.
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
      if (it->context != context) continue;
      std::string pattern = it->pattern;
      bool missing_slot = false;
      static const char* kSlots[] = {"{X}", "{Y}", "{Z}"};
      for (std::size_t i = 0; i < 3; ++i) {
        if (pattern.find(kSlots[i]) == std::string::npos) continue;
        if (i >= q.slot_names.size()) {
          missing_slot = true;
          break;
        }
        std::size_t pos;
        while ((pos = pattern.find(kSlots[i])) != std::string::npos) {
          pattern.replace(pos, 3, q.slot_names[i]);
        }
      }
      if (missing_slot) continue;
      const auto m = match_pattern(pattern, text);
      if (!m) continue;
      std::optional<Answer> a;
      if (it->answer == "name:{NAME}") {
        if (!*m) continue;
        a = Answer{};
        a->value = Answer::Value::Name;
        a->name = **m;
      } else {
        a = Answer::from_canonical(it->answer);
      }
      if (!a) continue;
      a->provenance = Answer::Provenance::Paraphrase;
      if (auto v = validate(q, *a)) return v;
    }
  }
  return std::nullopt;
}

double score_edge(const WorldModel& w, EntityId a, EntityId b) {
  const auto rel = w.possible_relations(a, b);
  if (!rel || rel->size() < 2) {
    throw std::invalid_argument("score_edge: edge must have at least two atoms");
  }
  double total = 0;
  for (Relation r : *rel) {
    WorldModel copy = w;
    const auto res = copy.assert_relation(a, {r}, b);
    if (res.ok()) total += static_cast<double>(copy.total_cardinality());
  }
  return total / static_cast<double>(rel->size());
}

std::string decline_key(const Question& q) {
  switch (q.kind) {
    case QuestionKind::AskName:
      return "name:" + std::to_string(q.a);
    case QuestionKind::AskGender:
      return "gender:" + std::to_string(q.a);
    case QuestionKind::ConfirmSplit:
    case QuestionKind::ClarifyMention:
      return "repair:" + std::to_string(q.id);
    default: {
      const auto k = EdgeKey::of(q.a, q.b);
      return "pair:" + std::to_string(k.lo) + ":" + std::to_string(k.hi);
    }
  }
}

std::optional<Question> next_question(const WorldModel& w,
                                      std::optional<EntityId> narrator,
                                      const std::set<std::string>& declined,
                                      const RelationLexicon& lex) {
  auto finish = [&](Question q) {
    render(q, w, lex);
    return std::optional<Question>(std::move(q));
  };

  // Unnamed entities that might be someone already known.
  for (const auto& [id, e] : w.entities()) {
    if (e.narrator || !e.names.empty() ||
        declined.contains("name:" + std::to_string(id))) {
      continue;
    }
    for (EntityId m : w.component_members(id)) {
      if (m == id) continue;
      const auto rel = w.possible_relations(id, m);
      if (rel && rel->contains(Relation::Self) && !w.entity(m).names.empty()) {
        Question q;
        q.kind = QuestionKind::AskName;
        q.a = id;
        return finish(std::move(q));
      }
    }
  }

  // A gender decides between Spouse and Self.
  for (const auto& [key, set] : w.edges()) {
    if (set != RelationSet{Relation::Spouse, Relation::Self}) continue;
    for (EntityId e : {key.lo, key.hi}) {
      const Entity& ent = w.entity(e);
      if (is_definite(ent.gender) ||
          declined.contains("gender:" + std::to_string(e))) {
        continue;
      }
      Question q;
      q.kind = QuestionKind::AskGender;
      q.a = e;
      q.gender = is_probable(ent.gender) ? ent.gender : Gender::Unknown;
      return finish(std::move(q));
    }
  }

  // Hop distance from the narrator over resolved kin edges.
  std::map<EntityId, std::size_t> dist;
  if (narrator && w.has_entity(*narrator)) {
    std::deque<EntityId> queue{*narrator};
    dist[*narrator] = 0;
    while (!queue.empty()) {
      const EntityId x = queue.front();
      queue.pop_front();
      for (EntityId y : w.component_members(x)) {
        if (dist.contains(y)) continue;
        const auto rel = w.possible_relations(x, y);
        const auto atom = rel ? rel->single() : std::nullopt;
        if (!atom || *atom == Relation::OutOfGraph || *atom == Relation::Self) {
          continue;
        }
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  auto distance = [&](EntityId e) {
    const auto it = dist.find(e);
    return it == dist.end() ? std::numeric_limits<std::size_t>::max()
                            : it->second;
  };

  struct Candidate {
    double score;
    std::size_t hops;
    std::size_t size;
    EdgeKey key;
  };
  std::optional<Candidate> best;
  for (const auto& [key, set] : w.edges()) {
    if (set.size() < 2) continue;
    if (declined.contains("pair:" + std::to_string(key.lo) + ":" +
                          std::to_string(key.hi))) {
      continue;
    }
    Candidate c{score_edge(w, key.lo, key.hi),
                std::min(distance(key.lo), distance(key.hi)), set.size(), key};
    if (!best || std::tie(c.score, c.hops, c.size, c.key) <
                     std::tie(best->score, best->hops, best->size, best->key)) {
      best = c;
    }
  }
  if (!best) return std::nullopt;

  Question q;
  const EdgeKey k = best->key;
  if (narrator && (k.lo == *narrator || k.hi == *narrator)) {
    q.b = *narrator;
    q.a = k.lo == *narrator ? k.hi : k.lo;
  } else {
    q.a = k.hi;
    q.b = k.lo;
  }
  const RelationSet set = *w.possible_relations(q.a, q.b);
  if (set.contains(Relation::Self)) {
    q.kind = QuestionKind::YesNoSelf;
  } else if (narrator && q.b == *narrator && set.size() == 2) {
    q.kind = QuestionKind::YesNoRelation;
    q.atom = *set.begin();
  } else {
    q.kind = QuestionKind::ChooseRelation;
    q.candidates.assign(set.begin(), set.end());
  }
  return finish(std::move(q));
}

Answer interpret_answer(const Question& q, std::string_view text,
                        const RelationLexicon& lex,
                        const ParaphraseStore* store) {
  const ParsedUtterance u = parse_utterance(text, lex);
  if (auto a = direct(q, u)) return *a;
  if (store) {
    if (auto a = store->lookup(q, text)) return *a;
  }
  return Answer{};
}

std::optional<ParaphraseEntry> learn_paraphrase(const Question& q,
                                                std::string_view failed_text,
                                                const Answer& followup,
                                                ParaphraseStore& store) {
  if (!followup.known() || followup.value == Answer::Value::Declined) {
    return std::nullopt;
  }
  std::string pattern(failed_text);
  const auto b = pattern.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return std::nullopt;
  pattern = pattern.substr(b, pattern.find_last_not_of(" \t\r\n") - b + 1);

  static const char* kSlots[] = {"{X}", "{Y}", "{Z}"};
  for (std::size_t i = 0; i < q.slot_names.size() && i < 3; ++i) {
    pattern = replace_word(pattern, q.slot_names[i], kSlots[i]);
  }
  std::string answer = followup.canonical();
  if (followup.value == Answer::Value::Name) {
    const std::string abstracted =
        replace_word(pattern, followup.name, "{NAME}");
    if (abstracted != pattern) {
      pattern = abstracted;
      answer = "name:{NAME}";
    }
  }
  const bool has_slot = pattern.find("{X}") != std::string::npos ||
                        pattern.find("{Y}") != std::string::npos ||
                        pattern.find("{Z}") != std::string::npos;
  ParaphraseEntry entry{
      has_slot ? q.template_id : "kind:" + std::string(family_of(q.kind)),
      pattern, answer};
  store.add(entry);
  return entry;
}

}  // namespace kinpgm
