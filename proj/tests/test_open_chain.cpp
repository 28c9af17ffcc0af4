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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kchain/ideal.hpp"
#include "kchain/open_chain.hpp"

using namespace kchain;
using cdouble = std::complex<double>;

TEST_CASE("l=1 open matrix is the 2x2 boundary form") {
  const double b[] = {1.0, 2.0};
  auto lv = build_liouvillian(b, 1, ChainKind::open);
  Eigen::MatrixXcd m = lv.matrix();
  Eigen::MatrixXcd expect(2, 2);
  const cdouble i(0, 1);
  expect << 0.0, -i, 3.0 * i, -4.0 * i;
  CHECK((m - expect).norm() < 1e-15);
}

TEST_CASE("insufficient coefficients name the required count") {
  const double b[] = {1.0};
  CHECK_THROWS_WITH_AS(build_liouvillian(b, 1, ChainKind::open),
                       doctest::Contains("needs 2 coefficients"),
                       std::invalid_argument);
}

TEST_CASE("dirichlet spectrum of the constant chain is the cosine set") {
  const int l = 9;
  std::vector<double> b(l, 1.0);
  auto modes = spectrum(build_liouvillian(b, l, ChainKind::dirichlet));
  std::vector<double> got;
  for (const auto& m : modes) {
    CHECK(std::abs(m.omega.imag()) < 1e-10);
    got.push_back(m.omega.real());
  }
  std::sort(got.begin(), got.end());
  std::vector<double> expect;
  for (int j = 1; j <= l + 1; ++j) {
    expect.push_back(-2.0 * std::cos(j * std::numbers::pi / (l + 2)));
  }
  std::sort(expect.begin(), expect.end());
  for (int j = 0; j <= l; ++j) {
    CHECK(got[j] == doctest::Approx(expect[j]).epsilon(1e-10));
  }
}

TEST_CASE("trivial roots of the linear open chain") {
  const int l = 20;
  auto modes = spectrum(
      build_liouvillian(linear_coefficients(l + 1), l, ChainKind::open));
  double d1 = 1e9, d3 = 1e9;
  for (const auto& m : modes) {
    d1 = std::min(d1, std::abs(m.omega - cdouble(0, -1)));
    d3 = std::min(d3, std::abs(m.omega - cdouble(0, -3)));
  }
  CHECK(d1 < 1e-9);
  CHECK(d3 < 1e-9);
}

TEST_CASE("spectral symmetry omega -> -conj(omega) for open chains") {
  const int l = 24;
  auto modes = spectrum(
      build_liouvillian(sqrt_coefficients(l + 1), l, ChainKind::open));
  for (const auto& m : modes) {
    const cdouble mirror = -std::conj(m.omega);
    double best = 1e9;
    for (const auto& other : modes) {
      best = std::min(best, std::abs(other.omega - mirror));
    }
    CHECK(best < 1e-8);
  }
}

TEST_CASE("eigen residuals stay below the gate") {
  for (int l : {20, 128}) {
    auto lv = build_liouvillian(linear_coefficients(l + 1), l, ChainKind::open);
    auto modes = spectrum(lv);
    const double gate = 1e-8 * lv.norm_bound();
    for (const auto& m : modes) {
      CHECK(m.residual <= gate);
      CHECK(m.phi.norm() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("dense ceiling refusal") {
  std::vector<double> b(20, 1.0);
  SpectrumOptions opt;
  opt.dense_ceiling = 10;
  CHECK_THROWS_WITH_AS(
      spectrum(build_liouvillian(b, 19, ChainKind::dirichlet), opt),
      doctest::Contains("ceiling"), std::invalid_argument);
}

TEST_CASE("classification thresholds") {
  CHECK(classify(cdouble(12.0, -0.001), 0.01) == ModeClass::perpetual);
  CHECK(classify(cdouble(0, -1), 0.5) == ModeClass::transient);
  CHECK(classify(cdouble(0, 0), 1e-12) == ModeClass::perpetual);
  CHECK(classify(cdouble(1, 0.1), 0.01) == ModeClass::growing);
}

TEST_CASE("interior rows reproduce the hopping relation") {
  const int l = 12;
  auto lv = build_liouvillian(sqrt_coefficients(l + 1), l, ChainKind::open);
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXcd v(l + 1), out(l + 1);
  for (int n = 0; n <= l; ++n) v[n] = cdouble(u(gen), u(gen));
  lv.apply_generator(v.data(), out.data());
  const auto& b = lv.b;
  for (int n = 1; n < l; ++n) {
    const cdouble expect = b[n - 1] * v[n - 1] - b[n] * v[n + 1];
    CHECK(std::abs(out[n] - expect) < 1e-14);
  }
  // boundary row
  const cdouble last = (b[l - 1] + b[l]) * v[l - 1] - 2.0 * b[l] * v[l];
  CHECK(std::abs(out[l] - last) < 1e-14);
  // dense matrix agrees with the banded application
  Eigen::VectorXcd dense_out = lv.generator() * v;
  CHECK((dense_out - out).norm() < 1e-13);
}

TEST_CASE("evolution basics") {
  SUBCASE("t=0 returns the initial state") {
    auto lv = build_liouvillian(linear_coefficients(6), 5, ChainKind::open);
    auto states = evolve(lv, delta_state(6), std::vector<double>{0.0});
    REQUIRE(states.size() == 1);
    CHECK(std::abs(states[0].phi[0] - 1.0) < 1e-15);
  }
  SUBCASE("zero couplings freeze the state") {
    std::vector<double> b(4, 0.0);
    auto lv = build_liouvillian(b, 4, ChainKind::dirichlet);
    auto states = evolve(lv, delta_state(5), std::vector<double>{0.5, 2.0});
    for (const auto& st : states) {
      CHECK(std::abs(st.phi[0] - 1.0) < 1e-12);
      CHECK(st.phi.tail(4).norm() < 1e-12);
    }
  }
  SUBCASE("l=1 dirichlet closed form: phi_0(t) = cos(b t)") {
    const double bval = 1.7;
    const double b[] = {bval};
    auto lv = build_liouvillian(b, 1, ChainKind::dirichlet);
    std::vector<double> times{0.3, 0.9, 2.2};
    auto states = evolve(lv, delta_state(2), times);
    for (std::size_t k = 0; k < times.size(); ++k) {
      CHECK(states[k].phi[0].real() ==
            doctest::Approx(std::cos(bval * times[k])).epsilon(1e-9));
    }
  }
  SUBCASE("empty grid is a usage error") {
    auto lv = build_liouvillian(linear_coefficients(6), 5, ChainKind::open);
    CHECK_THROWS_AS(evolve(lv, delta_state(6), std::vector<double>{}),
                    std::invalid_argument);
  }
}

TEST_CASE("integrator matches the dense exponential") {
  const int l = 200;
  auto lv = build_liouvillian(sqrt_coefficients(l + 1), l,
                              ChainKind::dirichlet);
  std::vector<double> times{1.0, 3.0, 5.0};
  auto rk = evolve(lv, delta_state(l + 1), times);
  auto ex = evolve_expm(lv, delta_state(l + 1), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK((rk[k].phi - ex[k].phi).norm() < 1e-8);
  }
}

TEST_CASE("dirichlet evolution preserves the norm") {
  const int l = 64;
  auto lv = build_liouvillian(linear_coefficients(l), l, ChainKind::dirichlet);
  std::vector<double> times{0.5, 1.5, 3.0};
  auto states = evolve(lv, delta_state(l + 1), times);
  for (const auto& st : states) {
    CHECK(st.phi.norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("open cut matches a long reference chain at early times") {
  // before the wavefront reaches the cut, the open l=20 chain follows the
  // l=200 dirichlet reference
  auto open20 =
      build_liouvillian(linear_coefficients(21), 20, ChainKind::open);
  auto ref = build_liouvillian(linear_coefficients(200), 200,
                               ChainKind::dirichlet);
  std::vector<double> times;
  for (int k = 1; k <= 20; ++k) times.push_back(0.1 * k);
  auto a = evolve(open20, delta_state(21), times);
  auto b = evolve(ref, delta_state(201), times);
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    worst = std::max(worst, std::abs(a[k].phi[0] - b[k].phi[0]));
  }
  // the exponential tail of the wavefront already grazes the cut by t = 2,
  // leaving a few-1e-6 boundary imprint on phi_0
  CHECK(worst < 5e-6);
}

TEST_CASE("autocorrelation extracts one amplitude") {
  auto lv = build_liouvillian(linear_coefficients(6), 5, ChainKind::open);
  std::vector<double> times{0.0, 0.2};
  auto states = evolve(lv, delta_state(6), times);
  auto series = autocorrelation(states, 0);
  REQUIRE(series.size() == 2);
  CHECK(series[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(autocorrelation(states, 99), std::invalid_argument);
}

TEST_CASE("mean position and cumulative mass") {
  SpectralMode m;
  m.phi = Eigen::VectorXcd::Zero(4);
  m.phi[1] = std::sqrt(0.5);
  m.phi[3] = std::sqrt(0.5);
  auto mass = cumulative_mass(m.phi);
  CHECK(mass[0] == doctest::Approx(0.0));
  CHECK(mass[1] == doctest::Approx(0.5));
  CHECK(mass[3] == doctest::Approx(1.0));
}
