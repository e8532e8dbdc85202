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

#ifndef KINPGM_TESTS_FIXTURES_HPP_
#define KINPGM_TESTS_FIXTURES_HPP_

#include <filesystem>
#include <memory>

#include "kinpgm/composition_table.hpp"

namespace kinpgm::testing {

inline std::filesystem::path data_dir() { return KINPGM_DATA_DIR; }

/// The shipped table, loaded once per process.
inline std::shared_ptr<const CompositionTable> shipped_table() {
  static const auto table = std::make_shared<const CompositionTable>(
      load_table(data_dir() / "composition_table.txt"));
  return table;
}

}  // namespace kinpgm::testing

#endif  // KINPGM_TESTS_FIXTURES_HPP_
