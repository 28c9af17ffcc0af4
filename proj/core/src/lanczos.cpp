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

#include "kchain/lanczos.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace kchain {

KrylovChain run_lanczos(const OperatorMap& hamiltonian,
                        const OperatorMap& seed, const RingGeometry& geometry,
                        const LanczosOptions& options) {
  if (hamiltonian.n_sites() != geometry.n_sites ||
      seed.n_sites() != geometry.n_sites ||
      hamiltonian.translation_reduced() != geometry.translation_reduced ||
      seed.translation_reduced() != geometry.translation_reduced) {
    throw std::invalid_argument(
        "hamiltonian/seed do not match the ring geometry");
  }
  if (options.depth < 0) throw std::invalid_argument("depth must be >= 0");
  if (geometry.translation_reduced &&
      !geometry.supports_depth(options.depth, seed.max_span())) {
    throw std::invalid_argument(
        "ring too small for the requested depth: need n_sites >= " +
        std::to_string(2 * options.depth + seed.max_span() + 2) +
        " to keep supports from wrapping");
  }

  KrylovChain chain;
  chain.seed_label = options.seed_label;
  chain.policy = options.policy;
  chain.geometry = geometry;
  chain.hamiltonian_span = hamiltonian.max_span();

  OperatorMap prev2;                // O_{n-2}
  OperatorMap prev = seed;          // O_{n-1}
  const double seed_norm = prev.norm();
  if (seed_norm == 0.0) throw std::invalid_argument("seed operator is zero");
  if (std::abs(seed_norm - 1.0) > 1e-12) prev.scale(1.0 / seed_norm);

  if (options.keep_basis) {
    chain.basis.push_back(prev);
    chain.grades.push_back(0);
  }

  // Pruning is deferred until after the norm: b_n is the exact norm of the
  // assembled O'_n (given the truncated inputs), which removes the downward
  // bias a pre-norm cut would impose on late coefficients.
  TruncationPolicy weight_only;
  weight_only.max_weight = options.policy.max_weight;

  const int steps = options.depth + 1;  // b_1..b_{depth+1}
  double b1 = 0.0;
  for (int n = 1; n <= steps; ++n) {
    // O'_n = sigma * (-i)[H, O_{n-1}] - b_{n-1} O_{n-2} in the stored-real
    // grading; sigma folds i^2 = -1 into the coefficients on even steps.
    OperatorMap work = commutator(hamiltonian, prev, weight_only);
    const double sigma = (n % 2 == 0) ? -1.0 : 1.0;
    if (sigma != 1.0) work.scale(sigma);
    if (n >= 2) work.axpy(-chain.b[static_cast<std::size_t>(n - 2)], prev2);

    const double bn = work.norm();
    if (n == 1) {
      if (bn < 1e-14 * hamiltonian.norm() || work.empty()) {
        throw std::invalid_argument(
            "seed is conserved; Krylov space is trivial");
      }
      b1 = bn;
    } else if (bn < options.closure_rel_tol * b1) {
      chain.closed = true;
      chain.closed_at = n;
      break;
    }

    work.prune(options.policy);
    if (options.keep_basis && options.reorthogonalize) {
      for (const OperatorMap& o : chain.basis) {
        const double overlap = o.inner_product(work);
        if (overlap != 0.0) work.axpy(-overlap, o);
      }
      TruncationPolicy threshold_only;
      threshold_only.coeff_threshold = options.policy.coeff_threshold;
      work.prune(threshold_only);
    }

    chain.b.push_back(bn);
    chain.retained.push_back(work.size());
    const double kept = work.norm();
    if (kept == 0.0) {
      chain.closed = true;
      chain.closed_at = n;
      chain.b.pop_back();
      chain.retained.pop_back();
      break;
    }
    work.scale(1.0 / kept);
    prev2 = std::move(prev);
    prev = std::move(work);
    // The final step only supplies the extra coefficient b_{depth+1}; the
    // element past the cut is not part of the truncated chain's basis.
    if (options.keep_basis && n <= options.depth) {
      chain.basis.push_back(prev);
      chain.grades.push_back(n % 2);
    }
  }
  return chain;
}

LocalityReport locality_bound_check(const KrylovChain& chain, int seed_span) {
  LocalityReport report;
  if (chain.basis.empty()) {
    report.ok = false;
    report.message = "no Krylov basis retained; rerun with keep_basis";
    return report;
  }
  report.ok = true;
  report.within_bound = true;
  const int growth = std::max(chain.hamiltonian_span - 1, 0);
  for (std::size_t n = 0; n < chain.basis.size(); ++n) {
    const int span = chain.basis[n].max_span();
    const int bound = seed_span + static_cast<int>(n) * growth;
    report.span.push_back(span);
    report.bound.push_back(bound);
    if (span > bound) report.within_bound = false;
  }
  report.message = report.within_bound ? "all supports within bound"
                                       : "support bound exceeded";
  return report;
}

void write_chain_csv(std::ostream& out, const KrylovChain& chain,
                     const std::string& model_id) {
  out << "# kchain-chain v1\n";
  out << "# model=" << model_id << " seed=" << chain.seed_label
      << " policy=" << chain.policy.describe()
      << " geometry=N" << chain.geometry.n_sites
      << (chain.geometry.translation_reduced ? ",reduced" : ",plain")
      << " h_span=" << chain.hamiltonian_span << "\n";
  out << "# closed=" << (chain.closed ? 1 : 0) << " closed_at=" << chain.closed_at
      << "\n";
  out << "n,b_n,retained_strings\n";
  char buf[64];
  for (std::size_t i = 0; i < chain.b.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", chain.b[i]);
    out << (i + 1) << "," << buf << "," << chain.retained[i] << "\n";
  }
}

}  // namespace kchain
