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

#include "service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <random>
#include <sstream>

#include "kinpgm/composition_table.hpp"

namespace kinpgm::service {
namespace {

using json = nlohmann::json;

std::string hex_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  std::ostringstream os;
  os << std::hex << rng();
  return os.str();
}

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, int status, const std::string& message) {
  send(res, status, json{{"error", message}});
}

std::optional<EntityId> parse_id(const std::string& s) {
  EntityId v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return v;
}

// Wraps a handler that needs a session id; maps the usual failures to status
// codes.
template <typename Fn>
httplib::Server::Handler session_route(SessionManager& sessions, Fn fn) {
  return [&sessions, fn](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.path_params.at("id");
    try {
      if (!SessionManager::valid_id(id)) {
        fail(res, 404, "no such session: " + id);
        return;
      }
      fn(id, req, res);
    } catch (const UnknownSession& e) {
      fail(res, 404, e.what());
    } catch (const json::exception& e) {
      fail(res, 400, std::string("malformed body: ") + e.what());
    } catch (const SessionError& e) {
      fail(res, 400, e.what());
    }
  };
}

}  // namespace

SessionConfig load_config(const Settings& s) {
  auto table = std::make_shared<const CompositionTable>(load_table(s.table));
  const auto bad = check_axioms(*table);
  if (!bad.empty()) {
    throw std::runtime_error(s.table.string() + " breaks " +
                             std::to_string(bad.size()) + " axiom(s), first: " +
                             bad.front().describe());
  }
  auto relations = std::make_shared<RelationLexicon>(RelationLexicon::builtin());
  if (s.relation_lexicon) relations->merge_file(*s.relation_lexicon);
  auto names = std::make_shared<const NameLexicon>(
      s.name_lexicon ? NameLexicon::load(*s.name_lexicon) : NameLexicon{});
  auto store = s.paraphrases ? std::make_shared<ParaphraseStore>(*s.paraphrases)
                             : std::make_shared<ParaphraseStore>();
  return SessionConfig{std::move(table), std::move(relations), std::move(names),
                       std::move(store)};
}

SessionManager::SessionManager(SessionConfig config,
                               std::filesystem::path session_dir)
    : config_(std::move(config)), dir_(std::move(session_dir)) {}

bool SessionManager::valid_id(const std::string& id) {
  return !id.empty() && id.size() <= 64 &&
         std::all_of(id.begin(), id.end(), [](unsigned char c) {
           return std::isalnum(c) || c == '_' || c == '-';
         });
}

std::string SessionManager::create() {
  auto slot = std::make_shared<Slot>();
  std::lock_guard lock(registry_mutex_);
  std::string id;
  do {
    id = hex_id();
  } while (sessions_.count(id));
  slot->session = std::make_unique<Session>(id, config_);
  sessions_.emplace(id, std::move(slot));
  return id;
}

bool SessionManager::contains(const std::string& id) const {
  std::lock_guard lock(registry_mutex_);
  return sessions_.count(id) != 0;
}

std::shared_ptr<SessionManager::Slot> SessionManager::find(
    const std::string& id) const {
  std::lock_guard lock(registry_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw UnknownSession("no such session: " + id);
  return it->second;
}

std::filesystem::path SessionManager::path_of(const std::string& id) const {
  return dir_ / (id + ".json");
}

std::filesystem::path SessionManager::save(const std::string& id) {
  const auto path = path_of(id);
  with(id, [&](Session& s) {
    std::filesystem::create_directories(dir_);
    s.save(path);
  });
  return path;
}

void SessionManager::load(const std::string& id) {
  const auto path = path_of(id);
  if (!valid_id(id) || !std::filesystem::exists(path)) {
    throw UnknownSession("no saved session: " + id);
  }
  auto fresh = std::make_unique<Session>(Session::load(path, config_));
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(registry_mutex_);
    auto& entry = sessions_[id];
    if (!entry) entry = std::make_shared<Slot>();
    slot = entry;
  }
  std::lock_guard lock(slot->mutex);
  slot->session = std::move(fresh);
}

void install_routes(httplib::Server& server, SessionManager& sessions) {
  server.Post("/api/session",
              [&sessions](const httplib::Request&, httplib::Response& res) {
                send(res, 201, json{{"session_id", sessions.create()}});
              });

  server.Post(
      "/api/session/:id/say",
      session_route(sessions, [&sessions](const std::string& id,
                                          const httplib::Request& req,
                                          httplib::Response& res) {
        const json body = json::parse(req.body);
        if (!body.is_object() || !body.contains("text") ||
            !body["text"].is_string()) {
          fail(res, 400, "expected {\"text\": string}");
          return;
        }
        const auto text = body["text"].get<std::string>();
        json out = sessions.with(id, [&](Session& s) {
          const SayResult r = s.say(text);
          json j{{"replies", r.replies}, {"graph_version", r.graph_version}};
          if (r.question) j["question"] = json::parse(to_json(*r.question));
          return j;
        });
        send(res, 200, out);
      }));

  server.Get("/api/session/:id/graph",
             session_route(sessions, [&sessions](const std::string& id,
                                                 const httplib::Request&,
                                                 httplib::Response& res) {
               const std::string body = sessions.with(
                   id, [](Session& s) { return to_json(s.snapshot()); });
               res.set_content(body, "application/json");
             }));

  server.Get(
      "/api/session/:id/relations",
      session_route(sessions, [&sessions](const std::string& id,
                                          const httplib::Request& req,
                                          httplib::Response& res) {
        const auto a = parse_id(req.get_param_value("a"));
        const auto b = parse_id(req.get_param_value("b"));
        if (!a || !b) {
          fail(res, 400, "query needs numeric a and b");
          return;
        }
        sessions.with(id, [&](Session& s) {
          if (!s.world().has_entity(*a) || !s.world().has_entity(*b)) {
            fail(res, 404, "no such entity");
            return;
          }
          const auto rel = s.relations(*a, *b);
          json j{{"a", *a}, {"b", *b}, {"disjoint", !rel.has_value()}};
          j["atoms"] = json::array();
          if (rel) {
            for (Relation r : *rel) j["atoms"].push_back(std::string(name_of(r)));
          }
          send(res, 200, j);
        });
      }));

  server.Post("/api/session/:id/save",
              session_route(sessions, [&sessions](const std::string& id,
                                                  const httplib::Request&,
                                                  httplib::Response& res) {
                const auto path = sessions.save(id);
                send(res, 200, json{{"session_id", id}, {"path", path.string()}});
              }));

  server.Post("/api/session/:id/load",
              session_route(sessions, [&sessions](const std::string& id,
                                                  const httplib::Request&,
                                                  httplib::Response& res) {
                sessions.load(id);
                const auto version = sessions.with(
                    id, [](Session& s) { return s.world().version(); });
                send(res, 200, json{{"session_id", id}, {"graph_version", version}});
              }));
}

}  // namespace kinpgm::service
