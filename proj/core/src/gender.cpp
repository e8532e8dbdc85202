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

#include "kinpgm/gender.hpp"

#include <array>
#include <utility>

namespace kinpgm {

namespace {

constexpr std::array<std::pair<Gender, std::string_view>, 5> kNames{{
    {Gender::Unknown, "unknown"},
    {Gender::ProbablyMale, "probably-male"},
    {Gender::ProbablyFemale, "probably-female"},
    {Gender::Male, "male"},
    {Gender::Female, "female"},
}};

}  // namespace

std::string_view name_of(Gender g) {
  for (const auto& [value, name] : kNames) {
    if (value == g) return name;
  }
  return "unknown";
}

std::optional<Gender> gender_from_name(std::string_view name) {
  for (const auto& [value, n] : kNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

}  // namespace kinpgm
