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

#include "kchain/dense.hpp"

#include <bit>
#include <stdexcept>

namespace kchain {

namespace {

std::complex<double> i_power(int k) {
  switch (k & 3) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

void check_guard(int n_sites) {
  if (n_sites > kDenseSiteGuard) {
    throw std::invalid_argument(
        "dense construction refused: n_sites = " + std::to_string(n_sites) +
        " exceeds the guard of " + std::to_string(kDenseSiteGuard) + " sites");
  }
}

// Accumulates coeff * (string) into m. A string with masks (x, z) acts on a
// basis state |c> as i^{#Y} (-1)^{|c & z|} |c ^ x>.
void accumulate_string(Eigen::MatrixXcd& m, SiteMask x, SiteMask z,
                       std::complex<double> coeff) {
  const auto dim = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t xb = x.lo;
  const std::uint64_t zb = z.lo;
  const std::complex<double> base = coeff * i_power((x & z).count());
  for (std::uint64_t c = 0; c < dim; ++c) {
    const double sign = (std::popcount(c & zb) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(c ^ xb), static_cast<Eigen::Index>(c)) +=
        sign * base;
  }
}

}  // namespace

Eigen::MatrixXcd to_dense(const PauliString& p) {
  check_guard(p.n_sites);
  const Eigen::Index dim = Eigen::Index{1} << p.n_sites;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  accumulate_string(m, p.x, p.z, 1.0);
  return m;
}

Eigen::MatrixXcd to_dense(const OperatorMap& a, int grade) {
  check_guard(a.n_sites());
  const int n = a.n_sites();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : a.terms()) {
    if (a.translation_reduced()) {
      for (int d = 0; d < n; ++d) {
        accumulate_string(m, t.x.rotated(d, n), t.z.rotated(d, n), t.coeff);
      }
    } else {
      accumulate_string(m, t.x, t.z, t.coeff);
    }
  }
  if (grade & 1) m *= std::complex<double>(0, 1);
  return m;
}

}  // namespace kchain
