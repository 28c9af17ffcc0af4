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

#include <Eigen/Dense>
#include <complex>

#include "kchain/operator_map.hpp"

namespace kchain {

/// Sites above this count are refused by to_dense (4^12 complex entries is
/// the intended ceiling for exact cross-checks).
inline constexpr int kDenseSiteGuard = 12;

/// Exact 2^N x 2^N matrix of a single Pauli string (site 0 = least
/// significant bit of the basis index).
Eigen::MatrixXcd to_dense(const PauliString& p);

/// Exact dense realization of an operator sum; translation-reduced maps are
/// expanded into all n_sites translates. `grade` multiplies the result by
/// i^grade, matching the stored-real convention for odd Krylov elements.
/// Throws std::invalid_argument above the site guard.
Eigen::MatrixXcd to_dense(const OperatorMap& a, int grade = 0);

}  // namespace kchain
