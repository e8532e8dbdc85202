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

// nlohmann::json conversions shared by the persistence code. Private to the
// library: the public API exchanges plain strings.

#ifndef KINPGM_SRC_JSON_IO_HPP_
#define KINPGM_SRC_JSON_IO_HPP_

#include <json.hpp>

#include "kinpgm/gender.hpp"
#include "kinpgm/relation.hpp"
#include "kinpgm/world_model.hpp"

namespace kinpgm::detail {

using nlohmann::json;

class JsonFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json relations_to_json(RelationSet s);
RelationSet relations_from_json(const json& j);

json gender_to_json(Gender g);
Gender gender_from_json(const json& j);

json mention_to_json(const Mention& m);
Mention mention_from_json(const json& j);

json log_entry_to_json(const LogEntry& e);
LogEntry log_entry_from_json(const json& j);

}  // namespace kinpgm::detail

#endif  // KINPGM_SRC_JSON_IO_HPP_
