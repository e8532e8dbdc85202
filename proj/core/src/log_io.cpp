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

#include "kinpgm/log_io.hpp"

#include <sstream>

#include "json_io.hpp"

namespace kinpgm {

namespace detail {

json relations_to_json(RelationSet s) {
  json out = json::array();
  for (Relation r : s) out.push_back(std::string(name_of(r)));
  return out;
}

RelationSet relations_from_json(const json& j) {
  if (!j.is_array()) throw JsonFormatError("relation set must be an array");
  RelationSet s;
  for (const auto& item : j) {
    const auto r = relation_from_name(item.get<std::string>());
    if (!r) {
      throw JsonFormatError("unknown relation '" + item.get<std::string>() +
                            "'");
    }
    s.insert(*r);
  }
  return s;
}

json gender_to_json(Gender g) { return std::string(name_of(g)); }

Gender gender_from_json(const json& j) {
  const auto g = gender_from_name(j.get<std::string>());
  if (!g) throw JsonFormatError("unknown gender '" + j.get<std::string>() + "'");
  return *g;
}

json mention_to_json(const Mention& m) {
  return {{"id", m.id}, {"utterance", m.utterance}, {"text", m.text}};
}

Mention mention_from_json(const json& j) {
  return Mention{j.at("id").get<MentionId>(),
                 j.at("utterance").get<std::uint64_t>(),
                 j.at("text").get<std::string>()};
}

json log_entry_to_json(const LogEntry& e) {
  json j{{"kind", std::string(name_of(e.kind))}, {"a", e.a}};
  if (e.b != 0 || e.kind == LogEntry::Kind::Assert ||
      e.kind == LogEntry::Kind::Merge || e.kind == LogEntry::Kind::Split) {
    j["b"] = e.b;
  }
  if (!e.relations.empty()) j["relations"] = relations_to_json(e.relations);
  if (e.gender != Gender::Unknown) j["gender"] = gender_to_json(e.gender);
  if (e.narrator) j["narrator"] = true;
  if (!e.name.empty()) j["name"] = e.name;
  if (e.mention) j["mention"] = mention_to_json(*e.mention);
  if (e.mention_b) j["mention_b"] = mention_to_json(*e.mention_b);
  if (!e.moved.empty()) j["moved"] = e.moved;
  return j;
}

LogEntry log_entry_from_json(const json& j) {
  if (!j.is_object()) throw JsonFormatError("log entry must be an object");
  LogEntry e;
  const auto kind = log_kind_from_name(j.at("kind").get<std::string>());
  if (!kind) {
    throw JsonFormatError("unknown entry kind '" +
                          j.at("kind").get<std::string>() + "'");
  }
  e.kind = *kind;
  e.a = j.at("a").get<EntityId>();
  if (j.contains("b")) e.b = j["b"].get<EntityId>();
  if (j.contains("relations")) e.relations = relations_from_json(j["relations"]);
  if (j.contains("gender")) e.gender = gender_from_json(j["gender"]);
  if (j.contains("narrator")) e.narrator = j["narrator"].get<bool>();
  if (j.contains("name")) e.name = j["name"].get<std::string>();
  if (j.contains("mention")) e.mention = mention_from_json(j["mention"]);
  if (j.contains("mention_b")) e.mention_b = mention_from_json(j["mention_b"]);
  if (j.contains("moved")) e.moved = j["moved"].get<std::vector<MentionId>>();
  return e;
}

}  // namespace detail

std::string write_log_jsonl(const std::vector<LogEntry>& log) {
  std::string out;
  for (const LogEntry& e : log) {
    out += detail::log_entry_to_json(e).dump();
    out += '\n';
  }
  return out;
}

std::vector<LogEntry> read_log_jsonl(std::string_view text) {
  std::vector<LogEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(detail::log_entry_from_json(detail::json::parse(line)));
    } catch (const std::exception& ex) {
      throw LogFormatError("log line " + std::to_string(line_no) + ": " +
                           ex.what());
    }
  }
  return out;
}

}  // namespace kinpgm
