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
#include <vector>

#include "json.hpp"

namespace kchain {

// Closed-form validators for the exactly solvable chains b_n = alpha*n and
// b_n = sqrt(n).

/// Meixner-type polynomial from the three-term recurrence
/// M_{n+1}(x) = x M_n(x) - n^2 M_{n-1}(x), M_0 = 1, M_1 = x.
std::complex<double> meixner(int n, std::complex<double> x);

/// Same polynomial from the defining sum
/// M_n(x) = i^n n! sum_k 2^k C(n,k) C((-ix-1)/2, k); usable for n <~ 30 and
/// kept as an independent check on the recurrence.
std::complex<double> meixner_direct(int n, std::complex<double> x);

/// Monic Hermite-type polynomial H_{n+1} = x H_n - n H_{n-1}, H_0 = 1,
/// H_1 = x. phi_n = i^n H_n(omega)/sqrt(n!) solves the interior rows of the
/// b_n = sqrt(n) chain.
std::complex<double> modified_hermite(int n, std::complex<double> x);

/// Eigenvector entries phi_n = i^n M_n(omega)/n! of the open b_n = n chain,
/// evaluated with running normalization (max |phi| = 1) to avoid overflow.
/// Returns entries 0..l.
std::vector<std::complex<double>> meixner_chain_vector(
    std::complex<double> omega, int l);

/// Scaled boundary-condition polynomial for the open b_n = n chain at cut l.
/// Its roots are exactly the chain eigenvalues; the two trivial roots -i and
/// -3i are exact at every l. `value` is P(omega) divided by the running
/// normalization (l! and the phi rescaling factored out); `scale` is the
/// magnitude sum of the combined terms, so |value|/scale is the meaningful
/// dimensionless residual for root tests.
struct BoundaryEval {
  std::complex<double> value;
  double scale = 1.0;       // term-magnitude scale of `value`
  bool scaled = false;      // true when the phi recursion was renormalized
  double log10_scale = 0.0; // decimal log of the factored-out magnitude
};
BoundaryEval boundary_polynomial(std::complex<double> omega, int l);

/// b_n = alpha * n, n = 1..count.
std::vector<double> linear_coefficients(int count, double alpha = 1.0);
/// b_n = sqrt(n), n = 1..count.
std::vector<double> sqrt_coefficients(int count);
/// Solvable dissipative comparison chain: hopping b_n = sqrt(1-gamma^2)*n
/// paired with the diagonal -gamma*(2n+1) of ChainKind::diagonal_dissipative.
std::vector<double> dissipative_toy_coefficients(int count, double gamma);

/// Structure checks on the open b_n = alpha*n chain at cut l: a constant
/// eigenvector at omega = -i*alpha, an eigenvector proportional to 2n+1
/// (n counted from 0) at omega = -3i*alpha, and Im(omega) = -2*alpha for
/// every other mode. Returns a JSON report with one entry per assertion
/// (name, measured deviation, tolerance, pass flag).
nlohmann::json verify_linear_chain_structure(int l, double alpha = 1.0,
                                             double tol = 1e-6);

}  // namespace kchain
