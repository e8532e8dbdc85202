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

#ifndef KINPGM_BENCHMARKS_COMMON_HPP_
#define KINPGM_BENCHMARKS_COMMON_HPP_

#include <memory>

#include "kinpgm/composition_table.hpp"

namespace kinpgm::bench {

inline std::shared_ptr<const CompositionTable> table() {
  static const auto t = std::make_shared<const CompositionTable>(
      load_table(std::string(KINPGM_DATA_DIR) + "/composition_table.txt"));
  return t;
}

}  // namespace kinpgm::bench

#endif  // KINPGM_BENCHMARKS_COMMON_HPP_
