// Copyright 2026 The kchain Authors
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

#include "kchain/models.hpp"

#include <bit>
#include <stdexcept>

namespace kchain {

namespace {

using Term = OperatorMap::Term;

// Appends coeff * (pattern placed at every ring site) for plain maps, or a
// single canonical representative for reduced maps. `pattern` maps local
// offset -> pauli char.
void add_pattern(std::vector<Term>& terms, int n_sites, bool reduced,
                 const std::string& pattern, double coeff) {
  if (static_cast<int>(pattern.size()) > n_sites) {
    throw std::invalid_argument("pattern does not fit on the ring");
  }
  SiteMask x, z;
  for (int j = 0; j < static_cast<int>(pattern.size()); ++j) {
    switch (pattern[static_cast<std::size_t>(j)]) {
      case 'I': break;
      case 'X': x.set(j); break;
      case 'Y': x.set(j); z.set(j); break;
      case 'Z': z.set(j); break;
      default: throw std::invalid_argument("bad pattern character");
    }
  }
  if (reduced) {
    terms.push_back({x, z, coeff});
    return;
  }
  for (int d = 0; d < n_sites; ++d) {
    terms.push_back({x.rotated(d, n_sites), z.rotated(d, n_sites), coeff});
  }
}

}  // namespace

OperatorMap build_xxz(double delta, double field, int n_sites, bool reduced) {
  if (n_sites < 3) throw std::invalid_argument("xxz ring needs n_sites >= 3");
  std::vector<Term> terms;
  add_pattern(terms, n_sites, reduced, "XX", 1.0);
  add_pattern(terms, n_sites, reduced, "YY", 1.0);
  add_pattern(terms, n_sites, reduced, "ZZ", delta);
  add_pattern(terms, n_sites, reduced, "Z", field);
  return OperatorMap::from_terms(n_sites, reduced, std::move(terms));
}

OperatorMap build_chaotic(int n_sites, bool reduced) {
  if (n_sites < 2) {
    throw std::invalid_argument("ising ring needs n_sites >= 2");
  }
  std::vector<Term> terms;
  add_pattern(terms, n_sites, reduced, "XX", 1.0);
  add_pattern(terms, n_sites, reduced, "Z", -1.05);
  add_pattern(terms, n_sites, reduced, "X", 0.5);
  return OperatorMap::from_terms(n_sites, reduced, std::move(terms));
}

OperatorMap plus_string_operator(int k, int n_sites, bool reduced) {
  if (k < 1) throw std::invalid_argument("pattern length must be positive");
  if (n_sites <= k) {
    throw std::invalid_argument("ring too small for the seed support");
  }
  // Product of (X + iY)/2 over k sites plus its conjugate: strings with an
  // even number of Y factors survive, signed by (-1)^(y/2).
  std::vector<Term> terms;
  const double unit = 1.0 / static_cast<double>(1ULL << (k - 1));
  for (std::uint64_t sel = 0; sel < (1ULL << k); ++sel) {
    const int y = std::popcount(sel);
    if (y & 1) continue;
    std::string pattern(static_cast<std::size_t>(k), 'X');
    for (int j = 0; j < k; ++j) {
      if ((sel >> j) & 1) pattern[static_cast<std::size_t>(j)] = 'Y';
    }
    const double sign = (y / 2) % 2 == 0 ? 1.0 : -1.0;
    add_pattern(terms, n_sites, reduced, pattern, sign * unit);
  }
  return OperatorMap::from_terms(n_sites, reduced, std::move(terms));
}

OperatorMap build_seed(const std::string& name, int n_sites, bool reduced) {
  OperatorMap seed;
  if (name == "Q1") {
    std::vector<Term> terms;
    add_pattern(terms, n_sites, reduced, "X", 1.0);
    seed = OperatorMap::from_terms(n_sites, reduced, std::move(terms));
  } else if (name == "Q3") {
    seed = plus_string_operator(3, n_sites, reduced);
  } else if (name == "Q5") {
    seed = plus_string_operator(5, n_sites, reduced);
  } else if (name == "chaotic_O0") {
    std::vector<Term> terms;
    add_pattern(terms, n_sites, reduced, "XX", 1.05);
    add_pattern(terms, n_sites, reduced, "Z", 1.0);
    seed = OperatorMap::from_terms(n_sites, reduced, std::move(terms));
  } else {
    throw std::invalid_argument("unknown seed name: " + name);
  }
  const double norm = seed.norm();
  if (norm == 0.0) throw std::invalid_argument("seed is identically zero");
  seed.scale(1.0 / norm);
  return seed;
}

int seed_span(const std::string& name) {
  if (name == "Q1") return 1;
  if (name == "Q3") return 3;
  if (name == "Q5") return 5;
  if (name == "chaotic_O0") return 2;
  throw std::invalid_argument("unknown seed name: " + name);
}

}  // namespace kchain
