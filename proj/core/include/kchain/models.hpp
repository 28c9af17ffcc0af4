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

#pragma once

#include <string>

#include "kchain/operator_map.hpp"

namespace kchain {

// Spin operators are realized as full Pauli matrices (s == sigma, not
// sigma/2), and s± = (X ± iY)/2. Hamiltonians are periodic-ring sums; seed
// operators are summed over all sites and normalized to unit norm in the
// active representation.

/// Anisotropic Heisenberg ring with a longitudinal field:
/// H = sum_i (X_i X_{i+1} + Y_i Y_{i+1} + delta Z_i Z_{i+1} + field Z_i).
OperatorMap build_xxz(double delta, double field, int n_sites,
                      bool translation_reduced);

/// Tilted-field Ising ring: H = sum_i (X_i X_{i+1} - 1.05 Z_i + 0.5 X_i).
OperatorMap build_chaotic(int n_sites, bool translation_reduced);

/// Named seed operators, normalized to <O,O> = 1:
///  - "Q1": sum_i (s+_i + s-_i) = sum_i X_i
///  - "Q3": sum_i (s+ s+ s+ on three consecutive sites) + h.c.
///  - "Q5": the five-site pattern extension of Q3 (an interpretation; the
///    five-site raising product plus its conjugate)
///  - "chaotic_O0": sum_i (1.05 X_i X_{i+1} + Z_i), orthogonal to the
///    tilted-field Ising Hamiltonian
/// Throws std::invalid_argument for unknown names.
OperatorMap build_seed(const std::string& name, int n_sites,
                       bool translation_reduced);

/// Contiguous support width of the named seed (1 for Q1, 3 for Q3, ...).
int seed_span(const std::string& name);

/// sum_i (product of s+ over k consecutive sites) + h.c., unnormalized.
/// Expands into 2^(k-1) string classes of X/Y factors with signs
/// (-1)^(y/2)/2^(k-1) over even Y counts y.
OperatorMap plus_string_operator(int k, int n_sites, bool translation_reduced);

}  // namespace kchain
