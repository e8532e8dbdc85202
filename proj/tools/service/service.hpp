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

#ifndef KINPGM_TOOLS_SERVICE_HPP_
#define KINPGM_TOOLS_SERVICE_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "kinpgm/session.hpp"

namespace httplib {
class Server;
}

namespace kinpgm::service {

/// Paths a deployment is configured with. Empty optional paths fall back to
/// the built-in lexicons and an in-memory paraphrase store.
struct Settings {
  std::filesystem::path table;
  std::optional<std::filesystem::path> name_lexicon;
  std::optional<std::filesystem::path> relation_lexicon;
  std::optional<std::filesystem::path> paraphrases;
  std::filesystem::path session_dir = "sessions";
};

/// Loads and validates everything a session needs. Throws std::runtime_error
/// with a readable message when a file is missing or malformed, or when the
/// table breaks an axiom.
SessionConfig load_config(const Settings& settings);

class UnknownSession : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Registry of live sessions. Calls on one session are serialised by its own
/// mutex; different sessions proceed in parallel.
class SessionManager {
 public:
  SessionManager(SessionConfig config, std::filesystem::path session_dir);

  std::string create();
  bool contains(const std::string& id) const;

  /// Runs `fn` with the session locked. Throws UnknownSession.
  template <typename Fn>
  auto with(const std::string& id, Fn&& fn) {
    auto slot = find(id);
    std::lock_guard lock(slot->mutex);
    return fn(*slot->session);
  }

  /// Writes <session_dir>/<id>.json and returns its path.
  std::filesystem::path save(const std::string& id);
  /// Replaces (or registers) the session from <session_dir>/<id>.json.
  /// Throws UnknownSession when the file does not exist.
  void load(const std::string& id);

  const SessionConfig& config() const { return config_; }
  const std::filesystem::path& session_dir() const { return dir_; }

  /// Ids are used as file names, so only [A-Za-z0-9_-] is accepted.
  static bool valid_id(const std::string& id);

 private:
  struct Slot {
    std::mutex mutex;
    std::unique_ptr<Session> session;
  };
  std::shared_ptr<Slot> find(const std::string& id) const;
  std::filesystem::path path_of(const std::string& id) const;

  SessionConfig config_;
  std::filesystem::path dir_;
  mutable std::mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

/// Registers the /api routes on `server`.
void install_routes(httplib::Server& server, SessionManager& sessions);

}  // namespace kinpgm::service

#endif  // KINPGM_TOOLS_SERVICE_HPP_
