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

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "kchain/lanczos.hpp"
#include "kchain/open_chain.hpp"
#include "kchain/operator_map.hpp"

namespace kchain {

/// Expectation value in the all-|+> product state: the sum of coefficients
/// over strings made of X and identity factors only (empty z mask).
/// Per-site for translation-reduced operators.
double plus_state_weight(const OperatorMap& a);

/// Total |coefficient| mass per circular support span (index = span).
std::vector<double> support_histogram(const OperatorMap& a);

/// Per-site expectation trajectory <O_0(t)> in the |+>^N quench.
struct QuenchResult {
  std::vector<double> times;
  std::vector<double> expectation;
  std::string seed_label;
  int depth = 0;
  TruncationPolicy policy;
};

/// Propagates the delta_{n0} chain state under the given truncated
/// Liouvillian and resums per-site plus-state weights of the Krylov basis,
/// with the stored grade flags resolving the i^n factors to signs. Requires
/// the chain to retain its basis and the Liouvillian size to match.
QuenchResult quench_trajectory(const KrylovChain& chain,
                               const OpenLiouvillian& liouvillian,
                               std::span<const double> times,
                               const EvolveOptions& options = {});

/// A complex operator split into real-coefficient parts: A = real + i*imag.
/// Both parts are Hermitian string sums; the Hermitian part of A is `real`.
struct ComplexOperator {
  OperatorMap real_part;
  OperatorMap imag_part;

  double norm() const;
};

/// Folds mode amplitudes and grade flags back into string space:
/// A = sum_n phi_n i^(grade_n) O_n, pruned per policy.
ComplexOperator reconstruct_mode_operator(const KrylovChain& chain,
                                          const SpectralMode& mode,
                                          const TruncationPolicy& policy);

struct RefineResult {
  /// Final Hermitian seed (normalized) after the last completed round.
  OperatorMap seed;
  /// Tracked eigenfrequency per round.
  std::vector<std::complex<double>> omega_trace;
  /// Operator-space residual ||[H,A] + omega A|| / ||A|| of the
  /// reconstructed mode, per round.
  std::vector<double> residual_trace;
  /// Lanczos chain of the last completed round.
  KrylovChain last_chain;
  bool stopped_early = false;
  std::string stop_reason;
};

/// ||[H, A] + omega A|| / ||A|| for a complex string operator, evaluated
/// exactly on the stored terms.
double dynamical_symmetry_residual(const OperatorMap& hamiltonian,
                                   const ComplexOperator& a,
                                   std::complex<double> omega);

/// Round-by-round sharpening of a dynamical-symmetry candidate: each round
/// runs the Lanczos recursion from the current seed, picks the perpetual
/// mode with the largest seed overlap |phi_0|, reconstructs it, and re-seeds
/// with its normalized Hermitian part trimmed of sub-percent coefficients
/// (a compact seed keeps the next round's early recursion exact). Stops
/// early (with a diagnostic) when no perpetual candidate exists.
/// `eps_perpetual` widens or narrows the candidate window (0 selects the
/// median-based default, which is usually too strict before the first
/// refinement of a truncated run). Throws std::invalid_argument for
/// rounds < 1.
RefineResult iterative_refine(const OperatorMap& hamiltonian,
                              const OperatorMap& seed, int rounds, int depth,
                              const TruncationPolicy& policy,
                              const RingGeometry& geometry,
                              double eps_perpetual = 0.0);

}  // namespace kchain
