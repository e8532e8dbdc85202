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

#ifndef KINPGM_GENDER_HPP_
#define KINPGM_GENDER_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

namespace kinpgm {

enum class Gender : std::uint8_t {
  Unknown,
  ProbablyMale,
  ProbablyFemale,
  Male,
  Female,
};

constexpr bool is_definite(Gender g) {
  return g == Gender::Male || g == Gender::Female;
}

constexpr bool is_probable(Gender g) {
  return g == Gender::ProbablyMale || g == Gender::ProbablyFemale;
}

/// Male <-> Female; anything else maps to Unknown.
constexpr Gender opposite(Gender g) {
  switch (g) {
    case Gender::Male: return Gender::Female;
    case Gender::Female: return Gender::Male;
    default: return Gender::Unknown;
  }
}

/// Male for Male/ProbablyMale, Female for Female/ProbablyFemale.
constexpr std::optional<Gender> leaning(Gender g) {
  switch (g) {
    case Gender::Male:
    case Gender::ProbablyMale:
      return Gender::Male;
    case Gender::Female:
    case Gender::ProbablyFemale:
      return Gender::Female;
    default:
      return std::nullopt;
  }
}

/// "unknown", "probably-male", "probably-female", "male", "female".
std::string_view name_of(Gender g);
std::optional<Gender> gender_from_name(std::string_view name);

}  // namespace kinpgm

#endif  // KINPGM_GENDER_HPP_
