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

#include "kinpgm/derivation.hpp"

#include <array>

namespace kinpgm::oracle {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<GenealogyParams> DerivationConfig::default_derivation_params() {
  return {
      {.max_persons = 25, .max_generations = 3, .families = 2,
       .intermarriage_rate = 0.5},
      {.max_persons = 40, .max_generations = 5, .families = 3,
       .intermarriage_rate = 0.6},
      {.max_persons = 30, .max_generations = 4, .families = 2,
       .intermarriage_rate = 0.9},
      {.max_persons = 14, .max_generations = 3, .families = 2,
       .intermarriage_rate = 1.0},
      {.max_persons = 50, .max_generations = 5, .families = 4,
       .intermarriage_rate = 0.4},
  };
}

void accumulate_triples(const Genealogy& g, CompositionTable& table) {
  const std::size_t n = g.size();
  const std::vector<Relation> rel = classify_all(g);
  // Bit masks per entry, flushed into the table once.
  std::array<RelationSet::Bits, kRelationCount * kRelationCount> acc{};
  for (std::size_t a = 0; a < n; ++a) {
    const Relation* row_a = &rel[a * n];
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t r1 = index_of(row_a[b]) * kRelationCount;
      const Relation* row_b = &rel[b * n];
      for (std::size_t c = 0; c < n; ++c) {
        acc[r1 + index_of(row_b[c])] |=
            static_cast<RelationSet::Bits>(1U << index_of(row_a[c]));
      }
    }
  }
  for (Relation r1 : kAllRelations) {
    for (Relation r2 : kAllRelations) {
      const auto bits = acc[index_of(r1) * kRelationCount + index_of(r2)];
      table.set(r1, r2, table.at(r1, r2) | RelationSet::from_bits(bits));
    }
  }
}

CompositionTable derive_table(const DerivationConfig& config) {
  if (config.budget < 1) throw DerivationError("budget must be >= 1");
  if (config.params_list.empty()) {
    throw DerivationError("no genealogy parameters given");
  }

  CompositionTable table;
  std::uint64_t unchanged = 0;
  std::uint64_t drawn = 0;
  for (std::uint64_t i = 0; i < config.budget; ++i) {
    GenealogyParams params = config.params_list[i % config.params_list.size()];
    params.seed = splitmix64(config.seed ^ splitmix64(i));
    const Genealogy g = generate_genealogy(params);
    const CompositionTable before = table;
    accumulate_triples(g, table);
    ++drawn;
    unchanged = table == before ? unchanged + 1 : 0;
    if (unchanged >= config.confirmation_round) break;
  }

  std::string missing;
  for (Relation r1 : kAllRelations) {
    for (Relation r2 : kAllRelations) {
      if (table.at(r1, r2).empty()) {
        missing += " (" + std::string(name_of(r1)) + ", " +
                   std::string(name_of(r2)) + ")";
      }
    }
  }
  if (!missing.empty()) {
    throw DerivationError("no witness found for:" + missing);
  }

  TableMetadata& meta = table.metadata();
  meta.version = kTableVersion;
  meta.seed = config.seed;
  meta.budget = config.budget;
  meta.samples = drawn;
  return table;
}

}  // namespace kinpgm::oracle
