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

#include <iosfwd>
#include <string>
#include <vector>

#include "kchain/operator_map.hpp"

namespace kchain {

/// Finite-ring stand-in for the infinite chain. With translation reduction
/// one canonical representative is stored per translation orbit and inner
/// products are per-site; this matches thermodynamic-limit coefficients
/// exactly as long as operator supports never wrap, which requires
/// n_sites >= 2*depth + seed_span + 2.
struct RingGeometry {
  int n_sites = 0;
  bool translation_reduced = true;

  bool supports_depth(int depth, int seed_span) const {
    return n_sites >= 2 * depth + seed_span + 2;
  }
};

struct LanczosOptions {
  /// Recursion depth l; coefficients b_1..b_{l+1} are produced (the open
  /// boundary construction consumes one coefficient past the cut).
  int depth = 0;
  TruncationPolicy policy;
  bool keep_basis = false;
  /// Explicit re-orthogonalization against all retained elements each step
  /// (only possible when keep_basis is set).
  bool reorthogonalize = true;
  /// b_n < closure_rel_tol * b_1 declares exact closure of the chain.
  double closure_rel_tol = 1e-10;
  std::string seed_label;
};

/// Ordered Lanczos coefficients plus (optionally) the Krylov basis. Basis
/// element n is stored as a real-coefficient map with the grade flag n mod 2
/// recording the factored-out power of i (the physical element is
/// i^grade * map).
struct KrylovChain {
  std::vector<double> b;              // b_1, b_2, ... (all > 0)
  std::vector<OperatorMap> basis;     // O_0..O_m when kept
  std::vector<int> grades;            // per basis element, n mod 2
  std::vector<std::size_t> retained;  // string count entering each b_n
  std::string seed_label;
  TruncationPolicy policy;
  RingGeometry geometry;
  int hamiltonian_span = 0;
  bool closed = false;   // chain terminated by a vanishing coefficient
  int closed_at = -1;    // index n at which closure was declared

  /// Depth l such that b holds b_1..b_{l+1}; -1 when too short.
  int usable_depth() const { return static_cast<int>(b.size()) - 1; }
};

/// Operator Lanczos recursion: O'_n = L O_{n-1} - b_{n-1} O_{n-2} with
/// L = [H, .], b_n = ||O'_n||, O_n = O'_n / b_n, run in the stored-real
/// grading (all coefficients stay real; grade flags track powers of i).
///
/// The seed is normalized internally if needed. Throws std::invalid_argument
/// when the seed commutes with H (trivial Krylov space), on representation
/// mismatches, and when a reduced-mode run violates the non-wrapping bound.
KrylovChain run_lanczos(const OperatorMap& hamiltonian,
                        const OperatorMap& seed, const RingGeometry& geometry,
                        const LanczosOptions& options);

/// Per-step support report against the bound
/// span(O_n) <= seed_span + n * (hamiltonian_span - 1).
struct LocalityReport {
  bool ok = false;            // report could be produced
  bool within_bound = false;  // every retained element satisfies the bound
  std::string message;
  std::vector<int> span;   // circular support span of O_n
  std::vector<int> bound;  // allowed span at step n
};

LocalityReport locality_bound_check(const KrylovChain& chain, int seed_span);

/// CSV emission: comment header (model id, seed, policy, geometry) followed
/// by one line per n with b_n and the retained-string count.
void write_chain_csv(std::ostream& out, const KrylovChain& chain,
                     const std::string& model_id);

}  // namespace kchain
