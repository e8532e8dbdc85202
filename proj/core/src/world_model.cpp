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

#include "kinpgm/world_model.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <random>
#include <sstream>
#include <utility>

namespace kinpgm {

namespace {

// Thrown inside a mutation, caught at the public boundary.
struct ContradictionSignal {
  Contradiction c;
};

[[noreturn]] void empty_edge(EntityId a, EntityId b, RelationSet before) {
  Contradiction c;
  c.kind = Contradiction::Kind::EmptyEdge;
  c.a = a;
  c.b = b;
  c.before = before;
  throw ContradictionSignal{std::move(c)};
}

std::string entity_tag(EntityId e) { return "#" + std::to_string(e); }

constexpr std::array<std::pair<LogEntry::Kind, std::string_view>, 6>
    kLogKinds{{
        {LogEntry::Kind::Entity, "entity"},
        {LogEntry::Kind::Assert, "assert"},
        {LogEntry::Kind::Gender, "gender"},
        {LogEntry::Kind::Name, "name"},
        {LogEntry::Kind::Merge, "merge"},
        {LogEntry::Kind::Split, "split"},
    }};

// Entities folded into `e` through earlier merges, e included.
std::set<EntityId> merge_family(const std::vector<LogEntry>& log, EntityId e) {
  std::set<EntityId> family{e};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const LogEntry& entry : log) {
      if (entry.kind == LogEntry::Kind::Merge && family.count(entry.a) &&
          family.insert(entry.b).second) {
        grew = true;
      }
    }
  }
  return family;
}

// Re-attributes entries grounded through `moved` from e's merge family to
// `fresh`, and creates `fresh` next to the first family member.
std::vector<LogEntry> rewrite_for_split(const std::vector<LogEntry>& log,
                                        EntityId e, EntityId fresh,
                                        const std::set<MentionId>& moved) {
  const std::set<EntityId> family = merge_family(log, e);
  auto is_moved = [&](const std::optional<Mention>& m) {
    return m && moved.count(m->id) != 0;
  };
  std::vector<LogEntry> out;
  out.reserve(log.size() + 4);
  bool twin_made = false;
  for (const LogEntry& entry : log) {
    LogEntry copy = entry;
    switch (entry.kind) {
      case LogEntry::Kind::Entity: {
        if (!family.count(entry.a)) break;
        if (!is_moved(entry.mention)) {
          out.push_back(copy);
          if (!twin_made) {
            out.push_back(LogEntry{.kind = LogEntry::Kind::Entity, .a = fresh});
            twin_made = true;
          }
          continue;
        }
        copy.name.clear();
        copy.gender = Gender::Unknown;
        copy.mention.reset();
        out.push_back(copy);
        if (!twin_made) {
          out.push_back(LogEntry{.kind = LogEntry::Kind::Entity,
                                 .a = fresh,
                                 .gender = entry.gender,
                                 .name = entry.name,
                                 .mention = entry.mention});
          twin_made = true;
        } else {
          if (!entry.name.empty()) {
            out.push_back(LogEntry{.kind = LogEntry::Kind::Name,
                                   .a = fresh,
                                   .name = entry.name,
                                   .mention = entry.mention});
          }
          if (entry.gender != Gender::Unknown) {
            out.push_back(LogEntry{.kind = LogEntry::Kind::Gender,
                                   .a = fresh,
                                   .gender = entry.gender,
                                   .mention = entry.mention});
          }
        }
        continue;
      }
      case LogEntry::Kind::Assert:
        if (family.count(entry.a) && is_moved(entry.mention)) copy.a = fresh;
        if (family.count(entry.b) && is_moved(entry.mention_b)) copy.b = fresh;
        break;
      case LogEntry::Kind::Gender:
      case LogEntry::Kind::Name:
        if (family.count(entry.a) && is_moved(entry.mention)) copy.a = fresh;
        break;
      case LogEntry::Kind::Merge:
      case LogEntry::Kind::Split:
        break;
    }
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace

bool Entity::has_mention(MentionId m) const {
  return std::any_of(mentions.begin(), mentions.end(),
                     [m](const Mention& x) { return x.id == m; });
}

std::string Contradiction::explain() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::GenderConflict:
      os << "gender of " << entity_tag(a) << " is already fixed";
      break;
    case Kind::Precondition:
      os << "precondition failed for " << entity_tag(a) << " and "
         << entity_tag(b);
      break;
    case Kind::EmptyEdge:
      os << "no relation left between " << entity_tag(a) << " and "
         << entity_tag(b) << " (was " << before.to_string() << ")";
      break;
  }
  if (!trigger.empty()) os << " after " << trigger;
  if (!support.empty()) {
    os << "; earlier entries:";
    for (std::size_t i : support) os << ' ' << i;
  }
  return os.str();
}

std::string_view name_of(LogEntry::Kind k) {
  for (const auto& [kind, name] : kLogKinds) {
    if (kind == k) return name;
  }
  return "entity";
}

std::optional<LogEntry::Kind> log_kind_from_name(std::string_view name) {
  for (const auto& [kind, n] : kLogKinds) {
    if (n == name) return kind;
  }
  return std::nullopt;
}

struct WorldModel::Worklist {
  std::deque<EdgeKey> queue;
  std::set<EdgeKey> queued;
  // Entities whose gender just became definite.
  std::set<EntityId> genders;
  std::optional<std::mt19937_64> rng;

  void push(EdgeKey k) {
    if (queued.insert(k).second) queue.push_back(k);
  }
  EdgeKey pop() {
    std::size_t at = 0;
    if (rng) {
      at = std::uniform_int_distribution<std::size_t>(0, queue.size() - 1)(*rng);
    }
    const EdgeKey k = queue[at];
    queue.erase(queue.begin() + static_cast<std::ptrdiff_t>(at));
    queued.erase(k);
    return k;
  }
};

WorldModel::WorldModel(std::shared_ptr<const CompositionTable> table)
    : table_(std::move(table)) {
  if (!table_) throw InvalidTableError("no composition table given");
  const auto violations = check_axioms(*table_);
  if (!violations.empty()) {
    throw InvalidTableError("composition table violates axioms: " +
                            violations.front().describe() + " (" +
                            std::to_string(violations.size()) + " total)");
  }
}

// ---- storage helpers ------------------------------------------------------

RelationSet WorldModel::rel(EntityId a, EntityId b) const {
  if (a == b) return {Relation::Self};
  const auto it = state_.edges.find(EdgeKey::of(a, b));
  if (it == state_.edges.end()) {
    throw std::logic_error("no edge between " + entity_tag(a) + " and " +
                           entity_tag(b));
  }
  return a < b ? it->second : invert(it->second);
}

void WorldModel::put(EntityId a, EntityId b, RelationSet s) {
  state_.edges[EdgeKey::of(a, b)] = a < b ? s : invert(s);
}

void WorldModel::require_entity(EntityId e) const {
  if (!has_entity(e)) {
    throw std::invalid_argument("unknown entity " + entity_tag(e));
  }
}

const Entity& WorldModel::entity(EntityId e) const {
  require_entity(e);
  return state_.entities.at(e);
}

Entity& WorldModel::mutable_entity(EntityId e) {
  require_entity(e);
  return state_.entities.at(e);
}

EntityId WorldModel::component_of(EntityId e) const {
  require_entity(e);
  return state_.component.at(e);
}

const std::vector<EntityId>& WorldModel::component_members(EntityId e) const {
  return state_.members.at(component_of(e));
}

std::vector<EntityId> WorldModel::component_ids() const {
  std::vector<EntityId> out;
  out.reserve(state_.members.size());
  for (const auto& [id, members] : state_.members) out.push_back(id);
  return out;
}

std::optional<EntityId> WorldModel::narrator() const {
  for (const auto& [id, e] : state_.entities) {
    if (e.narrator) return id;
  }
  return std::nullopt;
}

std::size_t WorldModel::total_cardinality() const {
  std::size_t n = 0;
  for (const auto& [key, s] : state_.edges) n += s.size();
  return n;
}

void WorldModel::connect(EntityId a, EntityId b) {
  const EntityId ca = state_.component.at(a);
  const EntityId cb = state_.component.at(b);
  if (ca == cb) return;
  const EntityId keep = std::min(ca, cb);
  const EntityId drop = std::max(ca, cb);
  std::vector<EntityId>& kept = state_.members.at(keep);
  std::vector<EntityId> moved = std::move(state_.members.at(drop));
  state_.members.erase(drop);
  for (EntityId x : kept) {
    for (EntityId y : moved) put(x, y, RelationSet::full());
  }
  for (EntityId y : moved) state_.component[y] = keep;
  kept.insert(kept.end(), moved.begin(), moved.end());
  std::sort(kept.begin(), kept.end());
}

void WorldModel::create_entity(EntityId id, std::optional<std::string> name,
                               Gender gender, bool narrator,
                               std::optional<Mention> mention) {
  if (has_entity(id)) {
    throw std::invalid_argument("entity " + entity_tag(id) + " exists");
  }
  if (narrator && this->narrator()) {
    throw std::invalid_argument("model already has a narrator");
  }
  Entity e;
  e.id = id;
  if (name && !name->empty()) e.names.insert(*name);
  e.gender = gender;
  e.narrator = narrator;
  if (mention) e.mentions.push_back(*mention);
  state_.entities.emplace(id, std::move(e));
  state_.component[id] = id;
  state_.members[id] = {id};
  state_.next_id = std::max(state_.next_id, id + 1);
}

void WorldModel::attach_mention(EntityId e, const std::optional<Mention>& m) {
  if (!m) return;
  Entity& ent = mutable_entity(e);
  if (!ent.has_mention(m->id)) ent.mentions.push_back(*m);
}

std::vector<std::size_t> WorldModel::support_for(EntityId a,
                                                 EntityId b) const {
  constexpr std::size_t kMaxSupport = 16;
  std::vector<std::size_t> out;
  for (std::size_t i = log_.size(); i-- > 0 && out.size() < kMaxSupport;) {
    const LogEntry& e = log_[i];
    if (e.kind == LogEntry::Kind::Entity) continue;
    if (e.a == a || e.a == b ||
        (e.kind != LogEntry::Kind::Gender && e.kind != LogEntry::Kind::Name &&
         (e.b == a || e.b == b))) {
      out.push_back(i);
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// ---- inference ------------------------------------------------------------

CliqueChange WorldModel::clique_step(EntityId i, EntityId j, EntityId k,
                                     CliqueOrder order) {
  const RelationSet ij = rel(i, j);
  const RelationSet jk = rel(j, k);
  const RelationSet ik = rel(i, k);
  RelationSet new_ik;
  RelationSet new_jk;
  if (order == CliqueOrder::IkFirst) {
    new_ik = ik & table_->compose(ij, jk);
    if (new_ik.empty()) empty_edge(i, k, ik);
    new_jk = jk & table_->compose(invert(ij), new_ik);
    if (new_jk.empty()) empty_edge(j, k, jk);
  } else {
    new_jk = jk & table_->compose(invert(ij), ik);
    if (new_jk.empty()) empty_edge(j, k, jk);
    new_ik = ik & table_->compose(ij, new_jk);
    if (new_ik.empty()) empty_edge(i, k, ik);
  }
  CliqueChange change{new_ik != ik, new_jk != jk};
  if (change.ik_changed) put(i, k, new_ik);
  if (change.jk_changed) put(j, k, new_jk);
  return change;
}

void WorldModel::assign_gender(EntityId e, Gender g) {
  mutable_entity(e).gender = g;
}

bool WorldModel::apply_gender_rules(EntityId x, EntityId y, Worklist& work,
                                    PropagationOutcome& out) {
  const Gender gx = state_.entities.at(x).gender;
  const Gender gy = state_.entities.at(y).gender;
  const RelationSet before = rel(x, y);
  RelationSet s = before;
  if (is_definite(gx) && is_definite(gy)) {
    s.erase(gx == gy ? Relation::Spouse : Relation::Self);
  }
  if (s.empty()) empty_edge(x, y, before);
  const bool changed = s != before;
  if (changed) {
    put(x, y, s);
    out.changed_edges.push_back(EdgeKey::of(x, y));
  }
  if (s == RelationSet{Relation::Spouse}) {
    if (is_definite(gx) && !is_definite(gy)) {
      assign_gender(y, opposite(gx));
      work.genders.insert(y);
      out.gender_changes.push_back(y);
    } else if (is_definite(gy) && !is_definite(gx)) {
      assign_gender(x, opposite(gy));
      work.genders.insert(x);
      out.gender_changes.push_back(x);
    }
  }
  return changed;
}

PropagationOutcome WorldModel::run_propagation(
    Worklist& work, const PropagationOptions& options) {
  if (options.shuffle_seed) work.rng.emplace(*options.shuffle_seed);
  PropagationOutcome out;
  while (true) {
    if (!work.genders.empty()) {
      const EntityId e = *work.genders.begin();
      work.genders.erase(work.genders.begin());
      for (EntityId k : component_members(e)) {
        if (k != e) work.push(EdgeKey::of(e, k));
      }
      continue;
    }
    if (work.queue.empty()) break;
    const EdgeKey key = work.pop();
    const EntityId i = key.lo;
    const EntityId j = key.hi;
    apply_gender_rules(i, j, work, out);
    for (EntityId k : state_.members.at(state_.component.at(i))) {
      if (k == i || k == j) continue;
      const CliqueChange ch = clique_step(i, j, k, CliqueOrder::IkFirst);
      ++out.clique_updates;
      if (ch.ik_changed) {
        work.push(EdgeKey::of(i, k));
        out.changed_edges.push_back(EdgeKey::of(i, k));
      }
      if (ch.jk_changed) {
        work.push(EdgeKey::of(j, k));
        out.changed_edges.push_back(EdgeKey::of(j, k));
      }
    }
  }
  std::sort(out.changed_edges.begin(), out.changed_edges.end());
  out.changed_edges.erase(
      std::unique(out.changed_edges.begin(), out.changed_edges.end()),
      out.changed_edges.end());
  return out;
}

void WorldModel::do_assert(EntityId a, RelationSet constraint, EntityId b,
                           PropagationOutcome& out) {
  Worklist work;
  if (state_.component.at(a) != state_.component.at(b)) {
    const auto& ma = component_members(a);
    const auto& mb = component_members(b);
    std::vector<EdgeKey> cross;
    for (EntityId x : ma) {
      for (EntityId y : mb) cross.push_back(EdgeKey::of(x, y));
    }
    connect(a, b);
    put(a, b, constraint);
    for (const EdgeKey& k : cross) work.push(k);
  } else {
    const RelationSet before = rel(a, b);
    const RelationSet after = before & constraint;
    if (after.empty()) empty_edge(a, b, before);
    if (after == before) return;
    put(a, b, after);
    work.push(EdgeKey::of(a, b));
  }
  out = run_propagation(work, {});
}

void WorldModel::do_set_gender(EntityId e, Gender g,
                               PropagationOutcome& out) {
  Entity& ent = mutable_entity(e);
  if (is_probable(g)) {
    if (!is_definite(ent.gender)) ent.gender = g;
    return;
  }
  if (!is_definite(g)) {
    throw std::invalid_argument("gender must be male, female or probable");
  }
  if (is_definite(ent.gender)) {
    if (ent.gender == g) return;
    Contradiction c;
    c.kind = Contradiction::Kind::GenderConflict;
    c.a = e;
    c.b = e;
    throw ContradictionSignal{std::move(c)};
  }
  ent.gender = g;
  Worklist work;
  work.genders.insert(e);
  out = run_propagation(work, {});
  out.gender_changes.insert(out.gender_changes.begin(), e);
}

EntityId WorldModel::do_merge(EntityId a, EntityId b) {
  require_entity(a);
  require_entity(b);
  if (a == b) throw std::invalid_argument("cannot merge an entity with itself");
  if (state_.entities.at(a).narrator && state_.entities.at(b).narrator) {
    throw std::invalid_argument("two narrators");
  }
  PropagationOutcome ignored;
  do_assert(a, {Relation::Self}, b, ignored);

  const EntityId keep = std::min(a, b);
  const EntityId gone = std::max(a, b);
  Entity& k = state_.entities.at(keep);
  Entity g = std::move(state_.entities.at(gone));

  Worklist work;
  const Gender gk = k.gender;
  const Gender gg = g.gender;
  if (is_definite(gk) && is_definite(gg) && gk != gg) {
    Contradiction c;
    c.kind = Contradiction::Kind::GenderConflict;
    c.a = keep;
    c.b = gone;
    throw ContradictionSignal{std::move(c)};
  }
  if (!is_definite(gk)) {
    if (is_definite(gg)) {
      k.gender = gg;
      work.genders.insert(keep);
    } else if (is_probable(gk) && is_probable(gg) && gk != gg) {
      k.gender = Gender::Unknown;
    } else if (gk == Gender::Unknown) {
      k.gender = gg;
    }
  }

  const EntityId comp = state_.component.at(keep);
  std::vector<EntityId>& members = state_.members.at(comp);
  for (EntityId x : members) {
    if (x == keep || x == gone) continue;
    const RelationSet before = rel(keep, x);
    const RelationSet s = before & rel(gone, x);
    if (s.empty()) empty_edge(keep, x, before);
    if (s != before) {
      put(keep, x, s);
      work.push(EdgeKey::of(keep, x));
    }
    state_.edges.erase(EdgeKey::of(gone, x));
  }
  state_.edges.erase(EdgeKey::of(keep, gone));
  members.erase(std::remove(members.begin(), members.end(), gone),
                members.end());
  state_.component.erase(gone);

  k.names.insert(g.names.begin(), g.names.end());
  for (const Mention& m : g.mentions) {
    if (!k.has_mention(m.id)) k.mentions.push_back(m);
  }
  k.narrator = k.narrator || g.narrator;
  state_.entities.erase(gone);

  run_propagation(work, {});
  return keep;
}

void WorldModel::do_split(EntityId e, EntityId fresh,
                          const std::set<MentionId>& moved) {
  const Entity& ent = entity(e);
  if (ent.mentions.size() < 2) {
    throw std::invalid_argument("entity " + entity_tag(e) +
                                " has fewer than two mentions");
  }
  if (moved.empty() || moved.size() >= ent.mentions.size()) {
    throw std::invalid_argument("split partition is trivial");
  }
  for (MentionId m : moved) {
    if (!ent.has_mention(m)) {
      throw std::invalid_argument("mention " + std::to_string(m) +
                                  " does not belong to " + entity_tag(e));
    }
  }
  if (has_entity(fresh)) {
    throw std::invalid_argument("entity " + entity_tag(fresh) + " exists");
  }
  const std::vector<LogEntry> rewritten =
      rewrite_for_split(log_, e, fresh, moved);
  WorldModel rebuilt(table_, 0);
  for (const LogEntry& entry : rewritten) rebuilt.apply(entry);
  const EntityId next = std::max({rebuilt.state_.next_id, fresh + 1,
                                  state_.next_id});
  state_ = std::move(rebuilt.state_);
  state_.next_id = next;
}

void WorldModel::apply(const LogEntry& entry) {
  PropagationOutcome out;
  switch (entry.kind) {
    case LogEntry::Kind::Entity:
      create_entity(entry.a,
                    entry.name.empty() ? std::nullopt
                                       : std::optional<std::string>(entry.name),
                    entry.gender, entry.narrator, entry.mention);
      break;
    case LogEntry::Kind::Assert:
      require_entity(entry.a);
      require_entity(entry.b);
      if (entry.a == entry.b || entry.relations.empty()) {
        throw std::invalid_argument("malformed assert entry");
      }
      attach_mention(entry.a, entry.mention);
      attach_mention(entry.b, entry.mention_b);
      do_assert(entry.a, entry.relations, entry.b, out);
      break;
    case LogEntry::Kind::Gender:
      attach_mention(entry.a, entry.mention);
      do_set_gender(entry.a, entry.gender, out);
      break;
    case LogEntry::Kind::Name:
      attach_mention(entry.a, entry.mention);
      if (!entry.name.empty()) mutable_entity(entry.a).names.insert(entry.name);
      break;
    case LogEntry::Kind::Merge:
      if (do_merge(entry.a, entry.b) != entry.a) {
        throw std::invalid_argument("merge entry names the wrong survivor");
      }
      break;
    case LogEntry::Kind::Split:
      do_split(entry.a, entry.b,
               std::set<MentionId>(entry.moved.begin(), entry.moved.end()));
      break;
  }
  log_.push_back(entry);
}

// ---- public mutations -----------------------------------------------------

namespace {

template <class T, class Fn, class State, class Support>
Result<T> transact(State& state, std::vector<LogEntry>& log,
                   const std::string& trigger, Support support, Fn&& fn) {
  State backup = state;
  const std::size_t log_size = log.size();
  try {
    return fn();
  } catch (ContradictionSignal& s) {
    state = std::move(backup);
    log.resize(log_size);
    Contradiction c = std::move(s.c);
    c.trigger = trigger;
    c.support = support(c.a, c.b);
    return c;
  }
}

}  // namespace

EntityId WorldModel::add_entity(std::optional<std::string> name, Gender gender,
                                bool narrator, std::optional<Mention> mention) {
  LogEntry entry{.kind = LogEntry::Kind::Entity,
                 .a = state_.next_id,
                 .gender = gender,
                 .narrator = narrator,
                 .name = name.value_or(""),
                 .mention = mention};
  apply(entry);
  return entry.a;
}

Result<PropagationOutcome> WorldModel::assert_relation(
    EntityId a, RelationSet constraint, EntityId b,
    std::optional<Mention> mention_a, std::optional<Mention> mention_b) {
  require_entity(a);
  require_entity(b);
  if (a == b) throw std::invalid_argument("relation needs two entities");
  if (constraint.empty()) throw std::invalid_argument("empty constraint");
  const std::string trigger = "asserting " + constraint.to_string() + " for " +
                              entity_tag(a) + " -> " + entity_tag(b);
  return transact<PropagationOutcome>(
      state_, log_, trigger,
      [this](EntityId x, EntityId y) { return support_for(x, y); },
      [&]() -> PropagationOutcome {
        LogEntry entry{.kind = LogEntry::Kind::Assert,
                       .a = a,
                       .b = b,
                       .relations = constraint,
                       .mention = std::move(mention_a),
                       .mention_b = std::move(mention_b)};
        attach_mention(a, entry.mention);
        attach_mention(b, entry.mention_b);
        PropagationOutcome out;
        do_assert(a, constraint, b, out);
        log_.push_back(std::move(entry));
        return out;
      });
}

Result<PropagationOutcome> WorldModel::set_gender(
    EntityId e, Gender g, std::optional<Mention> mention) {
  require_entity(e);
  if (g == Gender::Unknown) {
    throw std::invalid_argument("cannot set gender to unknown");
  }
  const std::string trigger = "setting " + entity_tag(e) + " to " +
                              std::string(name_of(g));
  return transact<PropagationOutcome>(
      state_, log_, trigger,
      [this](EntityId x, EntityId y) { return support_for(x, y); },
      [&]() -> PropagationOutcome {
        LogEntry entry{.kind = LogEntry::Kind::Gender,
                       .a = e,
                       .gender = g,
                       .mention = std::move(mention)};
        attach_mention(e, entry.mention);
        PropagationOutcome out;
        do_set_gender(e, g, out);
        log_.push_back(std::move(entry));
        return out;
      });
}

void WorldModel::add_name(EntityId e, const std::string& name,
                          std::optional<Mention> mention) {
  require_entity(e);
  apply(LogEntry{.kind = LogEntry::Kind::Name,
                 .a = e,
                 .name = name,
                 .mention = std::move(mention)});
}

Result<EntityId> WorldModel::merge_entities(EntityId a, EntityId b) {
  require_entity(a);
  require_entity(b);
  if (a == b) throw std::invalid_argument("cannot merge an entity with itself");
  const std::string trigger =
      "merging " + entity_tag(a) + " and " + entity_tag(b);
  return transact<EntityId>(
      state_, log_, trigger,
      [this](EntityId x, EntityId y) { return support_for(x, y); },
      [&]() -> EntityId {
        const EntityId keep = do_merge(a, b);
        log_.push_back(LogEntry{.kind = LogEntry::Kind::Merge,
                                .a = keep,
                                .b = std::max(a, b)});
        return keep;
      });
}

Result<std::pair<EntityId, EntityId>> WorldModel::split_entity(
    EntityId e, const std::set<MentionId>& moved) {
  require_entity(e);
  const EntityId fresh = state_.next_id;
  const std::string trigger = "splitting " + entity_tag(e);
  return transact<std::pair<EntityId, EntityId>>(
      state_, log_, trigger,
      [this](EntityId x, EntityId y) { return support_for(x, y); },
      [&]() -> std::pair<EntityId, EntityId> {
        do_split(e, fresh, moved);
        log_.push_back(LogEntry{.kind = LogEntry::Kind::Split,
                                .a = e,
                                .b = fresh,
                                .moved = {moved.begin(), moved.end()}});
        return {e, fresh};
      });
}

// ---- building blocks ------------------------------------------------------

Result<CliqueChange> WorldModel::update_clique(EntityId i, EntityId j,
                                               EntityId k, CliqueOrder order) {
  require_entity(i);
  require_entity(j);
  require_entity(k);
  if (i == j || j == k || i == k) {
    throw std::invalid_argument("clique needs three distinct entities");
  }
  const EntityId c = component_of(i);
  if (component_of(j) != c || component_of(k) != c) {
    throw std::invalid_argument("clique spans several components");
  }
  try {
    return clique_step(i, j, k, order);
  } catch (ContradictionSignal& s) {
    s.c.trigger = "clique update";
    return s.c;
  }
}

Result<PropagationOutcome> WorldModel::propagate(
    std::vector<EdgeKey> dirty, const PropagationOptions& options) {
  Worklist work;
  for (const EdgeKey& k : dirty) {
    if (!state_.edges.count(k)) {
      throw std::invalid_argument("dirty edge " + entity_tag(k.lo) + "-" +
                                  entity_tag(k.hi) + " does not exist");
    }
    work.push(k);
  }
  try {
    return run_propagation(work, options);
  } catch (ContradictionSignal& s) {
    s.c.trigger = "propagation";
    return s.c;
  }
}

Result<PropagationOutcome> WorldModel::join_components(
    EntityId a, EntityId b, RelationSet seed,
    const PropagationOptions& options) {
  require_entity(a);
  require_entity(b);
  if (component_of(a) == component_of(b)) {
    throw std::invalid_argument("entities already share a component");
  }
  if (seed.empty()) throw std::invalid_argument("empty seed");
  Worklist work;
  for (EntityId x : component_members(a)) {
    for (EntityId y : component_members(b)) work.push(EdgeKey::of(x, y));
  }
  connect(a, b);
  put(a, b, seed);
  try {
    return run_propagation(work, options);
  } catch (ContradictionSignal& s) {
    s.c.trigger = "join";
    return s.c;
  }
}

void WorldModel::set_edge_unchecked(EntityId a, EntityId b, RelationSet s) {
  require_entity(a);
  require_entity(b);
  if (a == b) throw std::invalid_argument("edge needs two entities");
  if (s.empty()) throw std::invalid_argument("empty edge set");
  connect(a, b);
  put(a, b, s);
}

// ---- queries --------------------------------------------------------------

std::optional<RelationSet> WorldModel::possible_relations(EntityId a,
                                                          EntityId b) const {
  require_entity(a);
  require_entity(b);
  if (a == b) return RelationSet{Relation::Self};
  if (state_.component.at(a) != state_.component.at(b)) return std::nullopt;
  return rel(a, b);
}

bool WorldModel::is_stable() const {
  for (const auto& [id, members] : state_.members) {
    for (EntityId i : members) {
      for (EntityId j : members) {
        if (i == j) continue;
        const RelationSet ij = rel(i, j);
        for (EntityId k : members) {
          if (k == i || k == j) continue;
          if (!ij.is_subset_of(table_->compose(rel(i, k), rel(k, j)))) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

Result<WorldModel> WorldModel::replay(
    std::shared_ptr<const CompositionTable> table,
    const std::vector<LogEntry>& log) {
  WorldModel w(std::move(table));
  for (std::size_t i = 0; i < log.size(); ++i) {
    try {
      w.apply(log[i]);
    } catch (ContradictionSignal& s) {
      s.c.trigger = "replaying entry " + std::to_string(i);
      return s.c;
    }
  }
  return w;
}

}  // namespace kinpgm
