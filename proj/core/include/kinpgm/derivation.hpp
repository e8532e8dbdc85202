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

#ifndef KINPGM_DERIVATION_HPP_
#define KINPGM_DERIVATION_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kinpgm/composition_table.hpp"
#include "kinpgm/genealogy.hpp"

namespace kinpgm::oracle {

inline constexpr const char* kTableVersion = "kinpgm-table-1";

struct DerivationConfig {
  // Maximum number of genealogies to sample.
  std::uint64_t budget = 40000;
  // Stop once this many consecutive samples leave the table unchanged.
  std::uint64_t confirmation_round = 8000;
  std::uint64_t seed = 20141114;
  // Cycled through in order; each sample gets its own derived seed.
  std::vector<GenealogyParams> params_list = default_derivation_params();

  static std::vector<GenealogyParams> default_derivation_params();
};

class DerivationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adds classify(a, c) to entry (classify(a, b), classify(b, c)) for every
/// ordered triple of people, including repeated ones.
void accumulate_triples(const Genealogy& g, CompositionTable& table);

/// Samples genealogies until the table is stable for a full confirmation
/// round (or the budget runs out). Throws DerivationError naming every entry
/// that is still empty.
CompositionTable derive_table(const DerivationConfig& config);

}  // namespace kinpgm::oracle

#endif  // KINPGM_DERIVATION_HPP_
