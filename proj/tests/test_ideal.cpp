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

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "kchain/ideal.hpp"
#include "kchain/open_chain.hpp"

using namespace kchain;
using cdouble = std::complex<double>;

namespace {

// Independent high-precision evaluation of the defining sum in long double,
// used to pin spot values.
cdouble meixner_longdouble(int n, cdouble x) {
  const std::complex<long double> xl(x.real(), x.imag());
  const std::complex<long double> a =
      (std::complex<long double>(0, -1) * xl - 1.0L) / 2.0L;
  std::complex<long double> sum = 0;
  std::complex<long double> gen_binom = 1;
  long double nk = 1, pow2 = 1;
  for (int k = 0; k <= n; ++k) {
    sum += pow2 * nk * gen_binom;
    gen_binom *= (a - static_cast<long double>(k)) /
                 (static_cast<long double>(k) + 1.0L);
    nk *= static_cast<long double>(n - k) / (static_cast<long double>(k) + 1.0L);
    pow2 *= 2.0L;
  }
  std::complex<long double> ipow = 1;
  for (int k = 0; k < (n & 3); ++k) ipow *= std::complex<long double>(0, 1);
  long double fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  const auto v = ipow * fact * sum;
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

}  // namespace

TEST_CASE("meixner base cases") {
  CHECK(meixner(0, cdouble(0.3, -0.7)) == cdouble(1, 0));
  const cdouble x(1.2, 0.4);
  CHECK(std::abs(meixner(1, x) - x) < 1e-15);
  CHECK(std::abs(meixner_direct(1, x) - x) < 1e-14);
}

TEST_CASE("meixner spot value at -i from the high-precision sum") {
  // M_n(-i) = (-i)^n n!
  const cdouble v2 = meixner(2, cdouble(0, -1));
  CHECK(std::abs(v2 - cdouble(-2, 0)) < 1e-13);
  const cdouble hp = meixner_longdouble(2, cdouble(0, -3));
  CHECK(std::abs(meixner(2, cdouble(0, -3)) - hp) < 1e-12);
}

namespace {

// Magnitude scale of the defining sum: |i^n n!| * sum_k |2^k C(n,k) C(a,k)|.
// The alternating sum cancels by many orders at degree ~30, so agreement
// between the two evaluation routes is meaningful relative to this scale.
double meixner_term_scale(int n, cdouble x) {
  const cdouble a = (cdouble(0, -1) * x - 1.0) / 2.0;
  double sum = 0.0, nk = 1.0, pow2 = 1.0;
  cdouble gb(1, 0);
  for (int k = 0; k <= n; ++k) {
    sum += pow2 * nk * std::abs(gb);
    gb *= (a - double(k)) / (double(k) + 1.0);
    nk *= double(n - k) / (double(k) + 1.0);
    pow2 *= 2.0;
  }
  double fact = 1.0;
  for (int k = 2; k <= n; ++k) fact *= k;
  return fact * sum;
}

}  // namespace

TEST_CASE("recurrence agrees with the defining sum up to degree 30") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 6; ++trial) {
    const cdouble x(u(gen), u(gen));
    for (int n = 0; n <= 30; ++n) {
      const cdouble a = meixner(n, x);
      const cdouble b = meixner_direct(n, x);
      const double scale = std::max(std::abs(a), meixner_term_scale(n, x));
      REQUIRE(std::abs(a - b) / scale < 1e-9);
    }
  }
}

TEST_CASE("modified hermite base cases and one step") {
  const cdouble x(0.8, -1.1);
  CHECK(modified_hermite(0, x) == cdouble(1, 0));
  CHECK(std::abs(modified_hermite(1, x) - x) < 1e-15);
  CHECK(std::abs(modified_hermite(2, x) - (x * x - 1.0)) < 1e-14);
}

TEST_CASE("hermite vectors satisfy the sqrt-chain interior rows") {
  // phi_n = i^n H_n(omega)/sqrt(n!) must satisfy
  // i (b_n phi_{n-1} - b_{n+1} phi_{n+1}) = omega phi_n with b_n = sqrt(n).
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 5; ++trial) {
    const cdouble w(u(gen), u(gen));
    std::vector<cdouble> phi(42);
    cdouble ipow(1, 0);
    double scale = 1.0;
    for (int n = 0; n <= 41; ++n) {
      phi[n] = ipow * modified_hermite(n, w) / scale;
      ipow *= cdouble(0, 1);
      scale *= std::sqrt(static_cast<double>(n + 1));
    }
    const cdouble iu(0, 1);
    for (int n = 1; n <= 40; ++n) {
      const cdouble lhs = iu * (std::sqrt(double(n)) * phi[n - 1] -
                                std::sqrt(double(n + 1)) * phi[n + 1]);
      const double ref = std::max(1.0, std::abs(phi[n]));
      REQUIRE(std::abs(lhs - w * phi[n]) / ref < 1e-12);
    }
  }
}

TEST_CASE("boundary polynomial vanishes at the trivial roots") {
  for (int l : {2, 5, 20, 300}) {
    const auto p1 = boundary_polynomial(cdouble(0, -1), l);
    const auto p3 = boundary_polynomial(cdouble(0, -3), l);
    CHECK(std::abs(p1.value) / p1.scale < 1e-12);
    CHECK(std::abs(p3.value) / p3.scale < 1e-12);
  }
  // scaling kicks in for large cuts without overflowing
  const auto big = boundary_polynomial(cdouble(1.0, -2.0), 300);
  CHECK(std::isfinite(big.value.real()));
  CHECK(big.log10_scale > 100);
}

TEST_CASE("chain eigenvalues are boundary-polynomial roots") {
  for (int l : {12, 40, 64}) {
    auto modes = spectrum(
        build_liouvillian(linear_coefficients(l + 1), l, ChainKind::open));
    for (const auto& m : modes) {
      const auto p = boundary_polynomial(m.omega, l);
      CHECK(std::abs(p.value) / p.scale < 1e-6);
    }
  }
}

TEST_CASE("meixner chain vectors solve the eigenproblem rows") {
  const int l = 24;
  auto lv = build_liouvillian(linear_coefficients(l + 1), l, ChainKind::open);
  auto modes = spectrum(lv);
  for (const auto& m : modes) {
    const auto phi = meixner_chain_vector(m.omega, l);
    // interior rows: i(n phi_{n-1} - (n+1) phi_{n+1}) = omega phi_n
    const cdouble iu(0, 1);
    for (int n = 1; n < l; ++n) {
      const cdouble lhs =
          iu * (double(n) * phi[n - 1] - double(n + 1) * phi[n + 1]);
      REQUIRE(std::abs(lhs - m.omega * phi[n]) < 1e-8);
    }
  }
}

TEST_CASE("linear chain structure report") {
  auto report = verify_linear_chain_structure(20, 1.0, 1e-6);
  CHECK(report["pass"].get<bool>());

  // alpha rescaling moves the band to -2*alpha
  auto scaled = verify_linear_chain_structure(20, 2.0, 1e-6);
  CHECK(scaled["pass"].get<bool>());

  // the report carries named assertions with deviations and tolerances
  bool found_band = false;
  for (const auto& c : report["checks"]) {
    if (c["assertion"] == "bulk_band_im_-2alpha") {
      found_band = true;
      CHECK(c["deviation"].get<double>() < 1e-6);
    }
  }
  CHECK(found_band);
}

TEST_CASE("dissipative toy coefficients pair with the decaying diagonal") {
  auto b = dissipative_toy_coefficients(10, 0.6);
  CHECK(b[0] == doctest::Approx(std::sqrt(1 - 0.36)));
  CHECK(b[9] == doctest::Approx(10 * std::sqrt(1 - 0.36)));
  CHECK_THROWS_AS(dissipative_toy_coefficients(5, 1.0), std::invalid_argument);

  // strong damping converges the slow eigenvalues to -(2k+1)i at l=60
  const int l = 60;
  auto bl = dissipative_toy_coefficients(l, 0.7);
  auto modes =
      spectrum(build_liouvillian(bl, l, ChainKind::diagonal_dissipative, 0.7));
  for (int k = 0; k < 5; ++k) {
    double best = 1e9;
    for (const auto& m : modes) {
      best = std::min(best, std::abs(m.omega - cdouble(0, -(2.0 * k + 1))));
    }
    CHECK(best < 1e-6);
  }
}
