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

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kchain/pauli_string.hpp"

namespace kchain {

/// Pruning discipline applied to operator sums. The default (zero threshold,
/// no caps) reproduces exact arithmetic.
struct TruncationPolicy {
  /// Terms with |coefficient| below this are dropped.
  double coeff_threshold = 0.0;
  /// Keep at most this many terms, largest |coefficient| first; ties broken
  /// by mask order. Zero disables the cap.
  std::optional<std::size_t> max_strings;
  /// Drop strings acting nontrivially on more than this many sites.
  std::optional<int> max_weight;

  bool is_exact() const {
    return coeff_threshold == 0.0 && !max_strings && !max_weight;
  }
  std::string describe() const;
};

/// A real-coefficient sum of Pauli strings on a ring of n_sites spins.
///
/// Terms are kept sorted by (x, z) mask order, with no duplicate strings and
/// no exact zeros, so equal operators compare equal term by term and all
/// reductions run in deterministic order.
///
/// When `translation_reduced` is set, each stored string is the canonical
/// representative of its translation orbit and the operator it denotes is
/// the sum of all n_sites translates of every term (inner products are then
/// per-site quantities). Reduced operators require strings that never wrap
/// the ring, which the Lanczos driver enforces through its geometry bound.
class OperatorMap {
 public:
  struct Term {
    SiteMask x;
    SiteMask z;
    double coeff = 0.0;
  };

  OperatorMap() = default;
  OperatorMap(int n_sites, bool translation_reduced = false);

  /// Builds from arbitrary (string, coefficient) pairs: canonicalizes
  /// rotations in reduced mode, merges duplicates, drops zeros, sorts.
  static OperatorMap from_terms(int n_sites, bool translation_reduced,
                                std::vector<Term> terms);

  int n_sites() const { return n_sites_; }
  bool translation_reduced() const { return reduced_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of one string (0 when absent). The mask pair is
  /// canonicalized first in reduced mode.
  double coefficient(SiteMask x, SiteMask z) const;
  double coefficient(const PauliString& p) const;

  void scale(double factor);

  /// this += factor * other (exact merge; no pruning).
  void axpy(double factor, const OperatorMap& other);

  /// Normalized trace inner product <A,B> = Tr[A^dag B]/2^N, which for
  /// orthonormal Pauli strings reduces to the sum of products of matching
  /// coefficients. For reduced operators this is the per-site value.
  double inner_product(const OperatorMap& other) const;

  double norm() const;

  /// Largest circular support span over all terms (0 when empty).
  int max_span() const;

  /// Applies a truncation policy in place. Deterministic: the max_strings
  /// cap keeps the largest |coefficient| terms with mask-order tie-breaking.
  void prune(const TruncationPolicy& policy);

  bool operator==(const OperatorMap& other) const;

  /// One term per line as `±c STRING`, preceded by a small header carrying
  /// n_sites, the i-grading flag and the reduced flag. Round-trips
  /// losslessly (coefficients written with max precision).
  void serialize(std::ostream& out, int grade = 0) const;
  static std::pair<OperatorMap, int> deserialize(std::istream& in);

 private:
  friend class TermAccumulator;
  int n_sites_ = 0;
  bool reduced_ = false;
  std::vector<Term> terms_;  // sorted by mask_pair_less, no zeros
};

/// C = -i [A, B] for real-coefficient operators A and B.
///
/// With A and B Hermitian (real coefficients on Pauli strings), [A, B] is
/// anti-Hermitian and equals i*C with C again a real sum; C is what is
/// returned, so a grade flag tracks the factored-out i. Commuting string
/// pairs contribute nothing and are skipped. The result is pruned per
/// `policy`. Throws std::invalid_argument on mismatched n_sites or
/// representation.
OperatorMap commutator(const OperatorMap& a, const OperatorMap& b,
                       const TruncationPolicy& policy = {});

}  // namespace kchain
