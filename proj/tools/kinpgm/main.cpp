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

#include <CLI11.hpp>
#include <httplib.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kinpgm/composition_table.hpp"
#include "kinpgm/derivation.hpp"
#include "kinpgm/session.hpp"
#include "service.hpp"

namespace fs = std::filesystem;
using namespace kinpgm;

namespace {

fs::path default_data_dir() {
  const fs::path installed = KINPGM_INSTALLED_DATA_DIR;
  if (fs::exists(installed / "composition_table.txt")) return installed;
  return KINPGM_SOURCE_DATA_DIR;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

void print_graph(std::ostream& os, const Session& s) {
  const GraphSnapshot g = s.snapshot();
  os << "version " << g.version << "\n";
  for (const auto& n : g.entities) {
    os << "  #" << n.id;
    if (n.narrator) os << " (you)";
    for (const auto& name : n.names) os << " " << name;
    os << " [" << name_of(n.gender) << "]\n";
  }
  if (!g.edges.empty()) os << "edges (a -> b : a is R of b)\n";
  for (const auto& e : g.edges) {
    os << "  #" << e.a << " -> #" << e.b << " :";
    for (Relation r : e.atoms) os << " " << name_of(r);
    os << "\n";
  }
}

// Accepts an entity id, "me", or a name carried by exactly one entity.
std::optional<EntityId> lookup_entity(const Session& s, const std::string& key,
                                      std::string& error) {
  if (key == "me" || key == "I") return s.narrator();
  if (!key.empty() && std::all_of(key.begin(), key.end(), ::isdigit)) {
    const EntityId id = std::stoull(key);
    if (s.world().has_entity(id)) return id;
    error = "no entity #" + key;
    return std::nullopt;
  }
  std::vector<EntityId> hits;
  for (const auto& [id, e] : s.world().entities()) {
    for (const auto& n : e.names) {
      if (to_lower(n) == to_lower(key)) {
        hits.push_back(id);
        break;
      }
    }
  }
  if (hits.size() == 1) return hits.front();
  error = hits.empty() ? "nobody is called " + key
                       : key + " is ambiguous; use an id from :graph";
  return std::nullopt;
}

void print_reply(std::ostream& os, const SayResult& r) {
  for (const auto& line : r.replies) os << line << "\n";
  if (r.question) os << r.question->text << "\n";
}

int run_repl(const SessionConfig& config) {
  auto session = std::make_unique<Session>("repl", config);
  const bool interactive = ::isatty(STDIN_FILENO);
  std::string line;
  for (;;) {
    if (interactive) std::cout << "> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    if (line.empty() || line[0] == '#') continue;
    if (line[0] != ':') {
      print_reply(std::cout, session->say(line));
      continue;
    }
    std::istringstream in(line);
    std::string cmd;
    in >> cmd;
    if (cmd == ":quit" || cmd == ":q") break;
    if (cmd == ":graph") {
      print_graph(std::cout, *session);
    } else if (cmd == ":ask") {
      std::string a, b, err;
      in >> a >> b;
      const auto ea = lookup_entity(*session, a, err);
      const auto eb = ea ? lookup_entity(*session, b, err) : std::nullopt;
      if (!ea || !eb) {
        std::cout << "error: " << (err.empty() ? "usage: :ask A B" : err) << "\n";
        continue;
      }
      const auto rel = session->relations(*ea, *eb);
      std::cout << (rel ? rel->to_string() : std::string("disjoint")) << "\n";
    } else if (cmd == ":save" || cmd == ":load") {
      std::string file;
      in >> file;
      if (file.empty()) {
        std::cout << "error: usage: " << cmd << " FILE\n";
        continue;
      }
      try {
        if (cmd == ":save") {
          session->save(file);
          std::cout << "saved " << file << "\n";
        } else {
          session = std::make_unique<Session>(Session::load(file, config));
          std::cout << "loaded " << file << "\n";
          if (session->pending_question()) {
            std::cout << session->pending_question()->text << "\n";
          }
        }
      } catch (const std::exception& e) {
        std::cout << "error: " << e.what() << "\n";
      }
    } else {
      std::cout << "error: unknown command " << cmd
                << " (try :graph, :ask A B, :save F, :load F, :quit)\n";
    }
  }
  return 0;
}

int run_serve(const SessionConfig& config, const fs::path& session_dir,
              const std::string& host, int port) {
  service::SessionManager sessions(config, session_dir);
  httplib::Server server;
  service::install_routes(server, sessions);
  std::cerr << "listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

int run_derive(std::uint64_t budget, std::uint64_t confirm, std::uint64_t seed,
               const std::string& out) {
  oracle::DerivationConfig cfg;
  cfg.budget = budget;
  cfg.confirmation_round = confirm;
  cfg.seed = seed;
  CompositionTable table;
  try {
    table = oracle::derive_table(cfg);
  } catch (const oracle::DerivationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const auto bad = check_axioms(table);
  for (const auto& v : bad) std::cerr << "violation: " << v.describe() << "\n";
  if (out == "-") {
    write_table(std::cout, table);
  } else {
    save_table(out, table);
  }
  std::cerr << "samples " << table.metadata().samples << ", checksum "
            << hex(table.checksum()) << "\n";
  return bad.empty() ? 0 : 1;
}

int run_check(const fs::path& path) {
  CompositionTable table;
  try {
    table = load_table(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const auto bad = check_axioms(table);
  for (const auto& v : bad) std::cout << "violation: " << v.describe() << "\n";
  if (table.metadata().declared_checksum &&
      *table.metadata().declared_checksum != table.checksum()) {
    std::cout << "checksum mismatch: header "
              << hex(*table.metadata().declared_checksum) << ", body "
              << hex(table.checksum()) << "\n";
    return 1;
  }
  if (!bad.empty()) return 1;
  std::cout << "ok " << path.string() << " checksum " << hex(table.checksum())
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinpgm: possibilistic family-relation tracking"};
  app.require_subcommand(1);

  const fs::path data = default_data_dir();
  service::Settings settings;
  settings.table = data / "composition_table.txt";
  settings.name_lexicon = data / "names.csv";
  std::string table = settings.table.string();
  std::string names = settings.name_lexicon->string();
  std::string relations, paraphrases;
  std::string session_dir = "sessions";
  int port = 8080;
  std::string host = "127.0.0.1";

  app.add_option("--table", table, "Composition table file")
      ->envname("KINPGM_TABLE")
      ->capture_default_str();
  app.add_option("--name-lexicon", names, "Name/gender CSV (name,male,female)")
      ->envname("KINPGM_NAME_LEXICON")
      ->capture_default_str();
  app.add_option("--relation-lexicon", relations,
                 "Extra relation words CSV (surface,atom,gender)")
      ->envname("KINPGM_RELATION_LEXICON");
  app.add_option("--paraphrases", paraphrases, "Learned paraphrase file (TSV)")
      ->envname("KINPGM_PARAPHRASES");
  app.add_option("--session-dir", session_dir, "Directory for saved sessions")
      ->envname("KINPGM_SESSION_DIR")
      ->capture_default_str();
  app.add_option("--port", port, "HTTP port for serve")
      ->envname("KINPGM_PORT")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();

  auto* repl = app.add_subcommand("repl", "Talk to the model on stdin/stdout");
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("--host", host, "Address to bind")->capture_default_str();

  auto* derive = app.add_subcommand("derive-table",
                                    "Derive the composition table from samples");
  oracle::DerivationConfig defaults;
  std::uint64_t budget = defaults.budget;
  std::uint64_t confirm = defaults.confirmation_round;
  std::uint64_t seed = defaults.seed;
  std::string out = "-";
  derive->add_option("--budget", budget, "Maximum genealogies")->capture_default_str();
  derive->add_option("--confirm", confirm, "Unchanged samples before stopping")
      ->capture_default_str();
  derive->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  derive->add_option("-o,--out", out, "Output file, - for stdout")
      ->capture_default_str();

  auto* check = app.add_subcommand("check-table", "Validate a table file");
  std::string check_path;
  check->add_option("path", check_path, "Table file (defaults to --table)");

  CLI11_PARSE(app, argc, argv);

  if (*derive) return run_derive(budget, confirm, seed, out);
  if (*check) return run_check(check_path.empty() ? table : check_path);

  settings.table = table;
  settings.name_lexicon = names.empty() ? std::nullopt
                                        : std::optional<fs::path>(names);
  if (!relations.empty()) settings.relation_lexicon = relations;
  if (!paraphrases.empty()) settings.paraphrases = paraphrases;
  settings.session_dir = session_dir;

  SessionConfig config;
  try {
    config = service::load_config(settings);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (*repl) return run_repl(config);
  return run_serve(config, settings.session_dir, host, port);
}
