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

#include "kinpgm/session.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json_io.hpp"

namespace kinpgm {

using detail::json;

namespace {

constexpr const char* kSessionFormat = "kinpgm-session-1";

std::string now_iso8601() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Runs `step` on w; on contradiction w is restored and the contradiction
// returned.
template <class F>
std::optional<Contradiction> transact(WorldModel& w, F&& step) {
  WorldModel backup = w;
  std::optional<Contradiction> c = step(w);
  if (c) w = std::move(backup);
  return c;
}

template <class T>
std::optional<Contradiction> failure(const Result<T>& r) {
  if (r.ok()) return std::nullopt;
  return r.contradiction();
}

json question_json(const Question& q) {
  json j{{"id", q.id},
         {"kind", std::string(name_of(q.kind))},
         {"a", q.a},
         {"b", q.b},
         {"text", q.text},
         {"options", q.options},
         {"slots", q.slot_names},
         {"template", q.template_id}};
  if (!q.candidates.empty()) {
    json c = json::array();
    for (Relation r : q.candidates) c.push_back(std::string(name_of(r)));
    j["candidates"] = c;
  }
  if (q.kind == QuestionKind::YesNoRelation ||
      q.kind == QuestionKind::ConfirmSplit) {
    j["atom"] = std::string(name_of(q.atom));
  }
  if (q.gender != Gender::Unknown) j["gender"] = detail::gender_to_json(q.gender);
  if (!q.partition.empty()) j["partition"] = q.partition;
  if (!q.phrase.empty()) j["phrase"] = q.phrase;
  if (!q.choices.empty()) {
    json c = json::array();
    for (const auto& x : q.choices) c.push_back(x ? json(*x) : json(nullptr));
    j["choices"] = c;
  }
  return j;
}

Question question_from_json(const json& j) {
  Question q;
  q.id = j.at("id").get<std::uint64_t>();
  const auto kind = question_kind_from_name(j.at("kind").get<std::string>());
  if (!kind) throw detail::JsonFormatError("unknown question kind");
  q.kind = *kind;
  q.a = j.at("a").get<EntityId>();
  q.b = j.at("b").get<EntityId>();
  q.text = j.at("text").get<std::string>();
  q.options = j.at("options").get<std::vector<std::string>>();
  q.slot_names = j.at("slots").get<std::vector<std::string>>();
  q.template_id = j.at("template").get<std::string>();
  if (j.contains("candidates")) {
    for (const auto& c : j["candidates"]) {
      const auto r = relation_from_name(c.get<std::string>());
      if (!r) throw detail::JsonFormatError("unknown relation in question");
      q.candidates.push_back(*r);
    }
  }
  if (j.contains("atom")) {
    const auto r = relation_from_name(j["atom"].get<std::string>());
    if (!r) throw detail::JsonFormatError("unknown relation in question");
    q.atom = *r;
  }
  if (j.contains("gender")) q.gender = detail::gender_from_json(j["gender"]);
  if (j.contains("partition")) {
    q.partition = j["partition"].get<std::vector<MentionId>>();
  }
  if (j.contains("phrase")) q.phrase = j["phrase"].get<std::string>();
  if (j.contains("choices")) {
    for (const auto& c : j["choices"]) {
      q.choices.push_back(c.is_null() ? std::nullopt
                                      : std::optional(c.get<EntityId>()));
    }
  }
  return q;
}

json snapshot_json(const GraphSnapshot& s) {
  json entities = json::array();
  for (const auto& n : s.entities) {
    entities.push_back({{"id", n.id},
                        {"names", n.names},
                        {"gender", detail::gender_to_json(n.gender)},
                        {"narrator", n.narrator},
                        {"component", n.component}});
  }
  json edges = json::array();
  for (const auto& e : s.edges) {
    json atoms = json::array();
    for (Relation r : e.atoms) atoms.push_back(std::string(name_of(r)));
    edges.push_back({{"a", e.a},
                     {"b", e.b},
                     {"atoms", atoms},
                     {"ambiguous", e.ambiguous}});
  }
  return {{"entities", entities},
          {"edges", edges},
          {"components", s.components},
          {"version", s.version}};
}

}  // namespace

GraphSnapshot snapshot_of(const WorldModel& w) {
  GraphSnapshot s;
  for (const auto& [id, e] : w.entities()) {
    s.entities.push_back({id,
                          {e.names.begin(), e.names.end()},
                          e.gender,
                          e.narrator,
                          w.component_of(id)});
  }
  for (const auto& [key, set] : w.edges()) {
    s.edges.push_back({key.lo, key.hi, {set.begin(), set.end()}, set.size() > 1});
  }
  s.components = w.component_ids();
  s.version = w.version();
  return s;
}

std::string to_json(const GraphSnapshot& s) { return snapshot_json(s).dump(); }

std::string to_json(const Question& q) {
  return json{{"id", q.id},
              {"kind", std::string(name_of(q.kind))},
              {"text", q.text},
              {"options", q.options},
              {"template", q.template_id}}
      .dump();
}

Session::Session(std::string id, SessionConfig config)
    : id_(std::move(id)),
      config_(std::move(config)),
      created_(now_iso8601()),
      world_(config_.table) {
  if (!config_.relations) {
    config_.relations =
        std::make_shared<RelationLexicon>(RelationLexicon::builtin());
  }
  if (!config_.names) config_.names = std::make_shared<NameLexicon>();
  narrator_ = world_.add_entity(std::nullopt, Gender::Unknown, true);
}

std::optional<RelationSet> Session::relations(EntityId a, EntityId b) const {
  if (!world_.has_entity(a) || !world_.has_entity(b)) {
    throw std::invalid_argument("unknown entity id");
  }
  if (a == b) return RelationSet{Relation::Self};
  return world_.possible_relations(a, b);
}

std::uint64_t Session::user_turns() const {
  std::uint64_t n = 0;
  for (const auto& t : transcript_) {
    if (t.speaker == TranscriptItem::Speaker::User) ++n;
  }
  return n;
}

std::string Session::utterance_text(std::uint64_t index) const {
  std::uint64_t n = 0;
  for (const auto& t : transcript_) {
    if (t.speaker != TranscriptItem::Speaker::User) continue;
    if (n++ == index) return t.text;
  }
  return {};
}

Mention Session::new_mention(std::uint64_t utterance, std::string text) {
  return Mention{next_mention_++, utterance, std::move(text)};
}

SayResult Session::say(std::string_view raw) {
  const std::string text(raw);
  transcript_.push_back({TranscriptItem::Speaker::User, text});
  const std::uint64_t turn = user_turns() - 1;
  std::vector<std::string> replies;
  const RelationLexicon& lex = *config_.relations;

  if (pending_) {
    const Answer answer =
        interpret_answer(*pending_, text, lex, config_.paraphrases.get());
    if (answer.known()) {
      const Question q = *pending_;
      pending_.reset();
      if (failed_text_ && answer.provenance == Answer::Provenance::Direct &&
          config_.paraphrases) {
        if (learn_paraphrase(q, *failed_text_, answer, *config_.paraphrases)) {
          replies.push_back("I'll remember that \"" + *failed_text_ +
                            "\" means " + answer.canonical() + " here.");
        }
      }
      failed_text_.reset();
      apply_answer(q, answer, replies);
    } else {
      const ParsedUtterance u = parse_utterance(text, lex);
      if (u.has_statements()) {
        pending_.reset();
        failed_text_.reset();
        process_statements(u, {}, turn, text, replies);
      } else {
        failed_text_ = text;
        replies.push_back("Sorry, I don't understand \"" + text + "\".");
      }
    }
  } else {
    const ParsedUtterance u = parse_utterance(text, lex);
    if (u.has_statements()) {
      process_statements(u, {}, turn, text, replies);
    } else if (u.bare_answer()) {
      replies.push_back("There is no open question right now.");
    } else if (!u.facts.empty()) {
      replies.push_back("Sorry, I don't understand \"" + text + "\".");
    }
  }

  auto_merge(replies);
  if (!pending_) pending_ = ask_next();

  for (const auto& r : replies) {
    transcript_.push_back({TranscriptItem::Speaker::System, r});
  }
  if (pending_) {
    transcript_.push_back({TranscriptItem::Speaker::System, pending_->text});
  }
  return SayResult{replies, pending_, world_.version()};
}

void Session::process_statements(const ParsedUtterance& u,
                                 const ForcedChoices& forced,
                                 std::uint64_t utterance_index,
                                 const std::string& utterance,
                                 std::vector<std::string>& replies) {
  ParsedUtterance current = u;
  for (;;) {
    WorldModel backup = world_;
    const std::size_t repairs_before = repairs_.size();
    const MentionId mentions_before = next_mention_;
    std::vector<std::string> round;
    std::vector<std::string> refusals;
    const auto refused = ground_and_apply(current, forced, utterance_index,
                                          utterance, round, refusals);
    if (refused.empty()) {
      replies.insert(replies.end(), round.begin(), round.end());
      return;
    }
    world_ = std::move(backup);
    repairs_.resize(repairs_before);
    next_mention_ = mentions_before;
    replies.insert(replies.end(), refusals.begin(), refusals.end());
    current = without_spans(current, refused);
    if (!current.has_statements()) return;
  }
}

std::set<std::string> Session::ground_and_apply(
    const ParsedUtterance& u, const ForcedChoices& forced,
    std::uint64_t utterance_index, const std::string& utterance,
    std::vector<std::string>& replies, std::vector<std::string>& refusals) {
  std::set<std::string> refused;
  const GroundingPlan plan = resolve_mentions(u, world_, narrator_, forced);
  if (plan.ambiguity) {
    Repair r;
    r.kind = Repair::Kind::Clarify;
    r.utterance = utterance;
    r.utterance_index = utterance_index;
    r.forced = forced;
    r.phrase = plan.ambiguity->text;
    r.candidates = plan.ambiguity->candidates;
    repairs_.push_back(std::move(r));
    replies.push_back("I know more than one " + plan.ambiguity->text + ".");
    return refused;
  }

  const std::size_t n = u.mentions.size();
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (u.mentions[i].kind == ParsedMention::Kind::Name) names[i] = u.mentions[i].name;
  }
  for (const auto& f : u.facts) {
    if (f.kind == ExtractedFact::Kind::NameBinding && names[f.holder].empty()) {
      names[f.holder] = f.name;
    }
  }

  std::vector<EntityId> entity_of(n, narrator_);
  std::vector<std::optional<Mention>> mention_of(n);
  for (std::size_t g = 0; g < plan.groups.members.size(); ++g) {
    const auto& members = plan.groups.members[g];
    for (std::size_t m : members) {
      if (u.mentions[m].kind != ParsedMention::Kind::Narrator) {
        mention_of[m] = new_mention(utterance_index, u.mentions[m].text);
      }
    }
    std::optional<EntityId> e = plan.entity[g];
    std::optional<std::size_t> creator;
    if (!e) {
      for (std::size_t m : members) {
        if (mention_of[m]) {
          creator = m;
          break;
        }
      }
      if (!creator) continue;
      e = world_.add_entity(std::nullopt, Gender::Unknown, false,
                            mention_of[*creator]);
    }
    for (std::size_t m : members) {
      entity_of[m] = *e;
      if (!mention_of[m]) continue;
      if (creator == m && names[m].empty()) continue;
      world_.add_name(*e, names[m], mention_of[m]);
    }
  }

  bool accepted = false;
  for (const auto& f : u.facts) {
    switch (f.kind) {
      case ExtractedFact::Kind::RelationTriple:
      case ExtractedFact::Kind::GenderBinding: {
        Fact fact;
        fact.holder = entity_of[f.holder];
        fact.holder_mention = mention_of[f.holder];
        fact.gender = f.gender;
        fact.span = f.span;
        if (f.kind == ExtractedFact::Kind::GenderBinding) {
          fact.gender_only = true;
        } else {
          fact.anchor = entity_of[f.anchor];
          fact.anchor_mention = mention_of[f.anchor];
          fact.atom = f.atom;
        }
        const std::string span = fact.span;
        std::vector<std::string> notes;
        switch (apply_fact(std::move(fact), true, notes)) {
          case Outcome::Accepted:
            accepted = true;
            break;
          case Outcome::Repair:
            break;
          case Outcome::Refused:
            refused.insert(span);
            refusals.insert(refusals.end(), notes.begin(), notes.end());
            break;
        }
        break;
      }
      case ExtractedFact::Kind::NameBinding:
        accepted = true;
        break;
      case ExtractedFact::Kind::Unparseable:
        replies.push_back("Sorry, I didn't understand \"" + f.span + "\".");
        break;
      case ExtractedFact::Kind::AnswerCandidate:
        break;
    }
  }
  for (std::size_t m = 0; m < n; ++m) {
    if (mention_of[m] && !names[m].empty() && world_.has_entity(entity_of[m])) {
      hint_gender(entity_of[m], names[m], mention_of[m]);
    }
  }
  if (accepted) replies.push_back("Got it.");
  return refused;
}

void Session::hint_gender(EntityId e, const std::string& name,
                          const std::optional<Mention>& m) {
  const Gender g = lookup_gender(*config_.names, name);
  if (g == Gender::Unknown) return;
  // A name is weaker evidence than a kin word: ignore it when it clashes.
  (void)transact(world_, [&](WorldModel& w) {
    return failure(w.set_gender(e, g, m));
  });
}

Session::Outcome Session::apply_fact(Fact f, bool allow_repair,
                                     std::vector<std::string>& replies) {
  if (!world_.has_entity(f.holder) ||
      (!f.gender_only && !world_.has_entity(f.anchor))) {
    return Outcome::Refused;
  }
  if (!f.gender_only && f.holder == f.anchor) {
    replies.push_back("I can't accept \"" + f.span +
                      "\": nobody is their own " +
                      config_.relations->surface_for(f.atom, f.gender) + ".");
    return Outcome::Refused;
  }
  const auto c = transact(world_, [&](WorldModel& w) -> std::optional<Contradiction> {
    if (!f.gender_only) {
      if (auto bad = failure(w.assert_relation(f.holder, {f.atom}, f.anchor,
                                               f.holder_mention,
                                               f.anchor_mention))) {
        return bad;
      }
    }
    if (is_definite(f.gender)) {
      return failure(w.set_gender(f.holder, f.gender, f.holder_mention));
    }
    return std::nullopt;
  });
  if (!c) return Outcome::Accepted;

  if (allow_repair && !f.gender_only) {
    const std::pair<EntityId, std::optional<Mention>> sides[] = {
        {f.holder, f.holder_mention}, {f.anchor, f.anchor_mention}};
    for (int i = 0; i < 2; ++i) {
      const auto& [e, m] = sides[i];
      if (!m || e == narrator_) continue;
      const Entity& ent = world_.entity(e);
      if (ent.mentions.size() < 2 || !ent.has_mention(m->id)) continue;
      Repair r;
      r.kind = Repair::Kind::Split;
      r.entity = e;
      r.moved = m->id;
      r.holder_side = i == 0;
      r.fact = f;
      repairs_.push_back(std::move(r));
      return Outcome::Repair;
    }
  }
  refuse(f, *c, replies);
  return Outcome::Refused;
}

std::string Session::pair_phrase(EntityId x, EntityId y) const {
  const Entity& ex = world_.entity(x);
  std::string a = ex.names.empty() ? describe(world_, *config_.relations, x)
                                   : *ex.names.begin();
  std::string b = describe(world_, *config_.relations, y, true);
  if (a == b) return "both mentions of " + a;
  return a + " and " + b;
}

void Session::refuse(const Fact& f, const Contradiction& c,
                     std::vector<std::string>& replies) const {
  std::set<std::uint64_t> turns;
  for (std::size_t idx : c.support) {
    if (idx >= world_.log().size()) continue;
    const LogEntry& e = world_.log()[idx];
    if (e.mention) turns.insert(e.mention->utterance);
    if (e.mention_b) turns.insert(e.mention_b->utterance);
  }
  std::string because;
  const std::uint64_t current = user_turns() - 1;
  for (std::uint64_t t : turns) {
    if (t == current) continue;
    const std::string said = utterance_text(t);
    if (said.empty()) continue;
    because += because.empty() ? "" : ", ";
    because += "\"" + said + "\"";
  }
  std::string msg = "I can't accept \"" + f.span + "\"";
  if (c.kind == Contradiction::Kind::GenderConflict) {
    msg += ": it clashes with a gender I already know";
  } else {
    msg += ": it leaves no possible relation between " +
           describe(world_, *config_.relations, c.a) + " and " +
           describe(world_, *config_.relations, c.b);
  }
  if (!because.empty()) msg += " given " + because;
  replies.push_back(msg + ".");
}

void Session::apply_answer(const Question& q, const Answer& a,
                           std::vector<std::string>& replies) {
  const bool repair = q.kind == QuestionKind::ConfirmSplit ||
                      q.kind == QuestionKind::ClarifyMention;
  if (repair) {
    if (repairs_.empty() || repairs_.front().question_id != q.id) return;
    Repair r = std::move(repairs_.front());
    repairs_.pop_front();
    if (r.kind == Repair::Kind::Split) {
      if (a.value != Answer::Value::Yes) {
        refuse(r.fact,
               Contradiction{Contradiction::Kind::EmptyEdge, r.fact.holder,
                             r.fact.anchor, {}, {}, {}},
               replies);
        return;
      }
      if (!world_.has_entity(r.entity)) return;
      const auto split = world_.split_entity(r.entity, {r.moved});
      if (!split.ok()) {
        refuse(r.fact, split.contradiction(), replies);
        return;
      }
      const EntityId fresh = split.value().second;
      (r.holder_side ? r.fact.holder : r.fact.anchor) = fresh;
      replies.push_back("OK, I'll treat them as two different people.");
      apply_fact(r.fact, false, replies);
      return;
    }
    // Clarify.
    if (a.value != Answer::Value::Choice || a.choice >= q.choices.size()) {
      replies.push_back("OK, I'll set \"" + r.utterance + "\" aside.");
      return;
    }
    ForcedChoices forced = r.forced;
    forced[to_lower(r.phrase)] = q.choices[a.choice];
    process_statements(parse_utterance(r.utterance, *config_.relations), forced,
                       r.utterance_index, r.utterance, replies);
    return;
  }

  if (a.value == Answer::Value::Declined) {
    declined_.insert(decline_key(q));
    replies.push_back("OK, let's leave that open.");
    return;
  }
  if (!world_.has_entity(q.a) ||
      (q.kind != QuestionKind::AskGender && q.kind != QuestionKind::AskName &&
       !world_.has_entity(q.b))) {
    return;
  }

  std::optional<Contradiction> c;
  std::string ack = "Got it.";
  switch (q.kind) {
    case QuestionKind::ChooseRelation:
      c = transact(world_, [&](WorldModel& w) -> std::optional<Contradiction> {
        if (auto bad = failure(w.assert_relation(q.a, {a.atom}, q.b))) return bad;
        if (is_definite(a.gender)) return failure(w.set_gender(q.a, a.gender));
        return std::nullopt;
      });
      break;
    case QuestionKind::YesNoRelation: {
      const auto set = world_.possible_relations(q.a, q.b);
      if (!set) return;
      const RelationSet want =
          a.value == Answer::Value::Yes ? RelationSet{q.atom}
                                        : *set - RelationSet{q.atom};
      c = transact(world_, [&](WorldModel& w) {
        return failure(w.assert_relation(q.a, want, q.b));
      });
      break;
    }
    case QuestionKind::YesNoSelf: {
      const auto set = world_.possible_relations(q.a, q.b);
      if (!set) return;
      if (a.value == Answer::Value::Yes) {
        const std::string both = pair_phrase(q.a, q.b);
        c = transact(world_, [&](WorldModel& w) {
          return failure(w.merge_entities(q.a, q.b));
        });
        ack = "OK, " + both + " are the same person.";
      } else {
        c = transact(world_, [&](WorldModel& w) {
          return failure(
              w.assert_relation(q.a, *set - RelationSet{Relation::Self}, q.b));
        });
      }
      break;
    }
    case QuestionKind::AskGender:
      c = transact(world_, [&](WorldModel& w) {
        return failure(w.set_gender(q.a, a.gender));
      });
      break;
    case QuestionKind::AskName: {
      const Mention m = new_mention(user_turns() - 1, a.name);
      world_.add_name(q.a, a.name, m);
      hint_gender(q.a, a.name, m);
      break;
    }
    case QuestionKind::ConfirmSplit:
    case QuestionKind::ClarifyMention:
      break;
  }
  if (c) {
    Fact f;
    f.span = utterance_text(user_turns() - 1);
    refuse(f, *c, replies);
    return;
  }
  replies.push_back(ack);
}

void Session::auto_merge(std::vector<std::string>& replies) {
  for (;;) {
    std::optional<EdgeKey> self;
    for (const auto& [key, set] : world_.edges()) {
      if (set == RelationSet{Relation::Self}) {
        self = key;
        break;
      }
    }
    if (!self) return;
    const std::string both = pair_phrase(self->hi, self->lo);
    const auto c = transact(world_, [&](WorldModel& w) {
      return failure(w.merge_entities(self->lo, self->hi));
    });
    if (c) return;
    replies.push_back("I take it " + both + " are the same person.");
  }
}

std::optional<Question> Session::ask_next() {
  while (!repairs_.empty()) {
    Repair& r = repairs_.front();
    Question q;
    if (r.kind == Repair::Kind::Split) {
      const EntityId other = r.holder_side ? r.fact.anchor : r.fact.holder;
      if (!world_.has_entity(r.entity) || !world_.has_entity(other) ||
          !world_.entity(r.entity).has_mention(r.moved)) {
        repairs_.pop_front();
        continue;
      }
      q.kind = QuestionKind::ConfirmSplit;
      q.a = r.entity;
      q.b = other;
      q.partition = {r.moved};
      if (r.holder_side) {
        q.atom = r.fact.atom;
        q.gender = r.fact.gender;
      } else {
        q.atom = inverse(r.fact.atom);
        q.gender = world_.entity(r.entity).gender;
      }
    } else {
      q.kind = QuestionKind::ClarifyMention;
      q.phrase = r.phrase;
      for (EntityId c : r.candidates) q.choices.emplace_back(c);
      q.choices.emplace_back(std::nullopt);
    }
    q.id = next_question_id_++;
    r.question_id = q.id;
    render(q, world_, *config_.relations);
    return q;
  }
  auto q = next_question(world_, narrator_, declined_, *config_.relations);
  if (q) q->id = next_question_id_++;
  return q;
}

std::string Session::to_json() const {
  json log = json::array();
  for (const LogEntry& e : world_.log()) log.push_back(detail::log_entry_to_json(e));
  json transcript = json::array();
  for (const auto& t : transcript_) {
    transcript.push_back(
        {{"speaker", t.speaker == TranscriptItem::Speaker::User ? "user" : "system"},
         {"text", t.text}});
  }
  auto fact_json = [](const Fact& f) {
    json j{{"holder", f.holder},
           {"anchor", f.anchor},
           {"atom", std::string(name_of(f.atom))},
           {"gender", detail::gender_to_json(f.gender)},
           {"gender_only", f.gender_only},
           {"span", f.span}};
    if (f.holder_mention) j["holder_mention"] = detail::mention_to_json(*f.holder_mention);
    if (f.anchor_mention) j["anchor_mention"] = detail::mention_to_json(*f.anchor_mention);
    return j;
  };
  json repairs = json::array();
  for (const Repair& r : repairs_) {
    json forced = json::array();
    for (const auto& [g, e] : r.forced) {
      forced.push_back({{"phrase", g}, {"entity", e ? json(*e) : json(nullptr)}});
    }
    repairs.push_back({{"kind", r.kind == Repair::Kind::Split ? "split" : "clarify"},
                       {"question_id", r.question_id},
                       {"entity", r.entity},
                       {"moved", r.moved},
                       {"holder_side", r.holder_side},
                       {"fact", fact_json(r.fact)},
                       {"utterance", r.utterance},
                       {"utterance_index", r.utterance_index},
                       {"forced", forced},
                       {"phrase", r.phrase},
                       {"candidates", r.candidates}});
  }
  json j{{"format", kSessionFormat},
         {"id", id_},
         {"created", created_},
         {"narrator", narrator_},
         {"next_mention", next_mention_},
         {"next_question_id", next_question_id_},
         {"log", log},
         {"transcript", transcript},
         {"pending", pending_ ? question_json(*pending_) : json(nullptr)},
         {"failed_text", failed_text_ ? json(*failed_text_) : json(nullptr)},
         {"declined", declined_},
         {"repairs", repairs}};
  return j.dump(2);
}

Session Session::from_json(std::string_view text, SessionConfig config) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kSessionFormat) {
      throw SessionError("unsupported session format");
    }
    Session s(j.at("id").get<std::string>(), std::move(config));
    s.created_ = j.at("created").get<std::string>();
    std::vector<LogEntry> log;
    for (const auto& e : j.at("log")) log.push_back(detail::log_entry_from_json(e));
    auto replayed = WorldModel::replay(s.config_.table, log);
    if (!replayed.ok()) {
      throw SessionError("session log does not replay: " +
                         replayed.contradiction().explain());
    }
    s.world_ = replayed.value();
    s.narrator_ = j.at("narrator").get<EntityId>();
    if (!s.world_.has_entity(s.narrator_) ||
        !s.world_.entity(s.narrator_).narrator) {
      throw SessionError("session narrator is missing");
    }
    s.next_mention_ = j.at("next_mention").get<MentionId>();
    s.next_question_id_ = j.at("next_question_id").get<std::uint64_t>();
    for (const auto& t : j.at("transcript")) {
      const std::string who = t.at("speaker").get<std::string>();
      if (who != "user" && who != "system") throw SessionError("bad speaker");
      s.transcript_.push_back({who == "user" ? TranscriptItem::Speaker::User
                                             : TranscriptItem::Speaker::System,
                               t.at("text").get<std::string>()});
    }
    if (!j.at("pending").is_null()) s.pending_ = question_from_json(j["pending"]);
    if (!j.at("failed_text").is_null()) {
      s.failed_text_ = j["failed_text"].get<std::string>();
    }
    s.declined_ = j.at("declined").get<std::set<std::string>>();
    auto fact_from = [](const json& f) {
      Fact out;
      out.holder = f.at("holder").get<EntityId>();
      out.anchor = f.at("anchor").get<EntityId>();
      const auto atom = relation_from_name(f.at("atom").get<std::string>());
      if (!atom) throw SessionError("bad relation in repair");
      out.atom = *atom;
      out.gender = detail::gender_from_json(f.at("gender"));
      out.gender_only = f.at("gender_only").get<bool>();
      out.span = f.at("span").get<std::string>();
      if (f.contains("holder_mention")) {
        out.holder_mention = detail::mention_from_json(f["holder_mention"]);
      }
      if (f.contains("anchor_mention")) {
        out.anchor_mention = detail::mention_from_json(f["anchor_mention"]);
      }
      return out;
    };
    for (const auto& r : j.at("repairs")) {
      Repair rep;
      rep.kind = r.at("kind").get<std::string>() == "split" ? Repair::Kind::Split
                                                             : Repair::Kind::Clarify;
      rep.question_id = r.at("question_id").get<std::uint64_t>();
      rep.entity = r.at("entity").get<EntityId>();
      rep.moved = r.at("moved").get<MentionId>();
      rep.holder_side = r.at("holder_side").get<bool>();
      rep.fact = fact_from(r.at("fact"));
      rep.utterance = r.at("utterance").get<std::string>();
      rep.utterance_index = r.at("utterance_index").get<std::uint64_t>();
      for (const auto& f : r.at("forced")) {
        const auto& e = f.at("entity");
        rep.forced[f.at("phrase").get<std::string>()] =
            e.is_null() ? std::nullopt : std::optional(e.get<EntityId>());
      }
      rep.phrase = r.at("phrase").get<std::string>();
      rep.candidates = r.at("candidates").get<std::vector<EntityId>>();
      s.repairs_.push_back(std::move(rep));
    }
    return s;
  } catch (const SessionError&) {
    throw;
  } catch (const std::exception& ex) {
    throw SessionError(std::string("malformed session: ") + ex.what());
  }
}

void Session::save(const std::filesystem::path& path) const {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw SessionError("cannot write " + tmp);
    out << to_json() << '\n';
    if (!out) throw SessionError("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Session Session::load(const std::filesystem::path& path, SessionConfig config) {
  std::ifstream in(path);
  if (!in) throw SessionError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str(), std::move(config));
}

}  // namespace kinpgm
