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

#include <sstream>

#include "doctest.h"
#include "kchain/dense.hpp"
#include "kchain/operator_map.hpp"
#include "kchain/pauli_string.hpp"
#include "oracles.hpp"

using namespace kchain;

TEST_CASE("single-site products") {
  const auto x = PauliString::from_str("X");
  const auto y = PauliString::from_str("Y");
  const auto z = PauliString::from_str("Z");

  auto xy = multiply(x, y);
  CHECK(xy.string == z);
  CHECK(xy.phase() == std::complex<double>(0, 1));  // XY = iZ

  auto yx = multiply(y, x);
  CHECK(yx.string == z);
  CHECK(yx.phase() == std::complex<double>(0, -1));

  auto xx = multiply(x, x);
  CHECK(xx.string.is_identity());
  CHECK(xx.phase() == std::complex<double>(1, 0));
}

TEST_CASE("identity is neutral") {
  const auto p = PauliString::from_str("XZYI");
  const auto id = PauliString::from_str("IIII");
  auto prod = multiply(p, id);
  CHECK(prod.string == p);
  CHECK(prod.phase_exponent == 0);
}

TEST_CASE("two-site product against dense matrices") {
  const auto a = PauliString::from_str("XZ");
  const auto b = PauliString::from_str("ZZ");
  auto prod = multiply(a, b);
  CHECK(prod.string == PauliString::from_str("YI"));
  CHECK(prod.phase() == std::complex<double>(0, -1));

  // oracle: 4x4 matrix product
  const oracles::Mat lhs =
      oracles::dense_string("XZ") * oracles::dense_string("ZZ");
  const oracles::Mat rhs =
      prod.phase() * oracles::dense_string(prod.string.str());
  CHECK((lhs - rhs).norm() == doctest::Approx(0).epsilon(1e-14));
}

TEST_CASE("size mismatch is a usage error") {
  CHECK_THROWS_AS(
      multiply(PauliString::from_str("X"), PauliString::from_str("XX")),
      std::invalid_argument);
}

TEST_CASE("random products match dense matrices") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 5);
    auto rand_string = [&] {
      std::string s;
      for (int i = 0; i < n; ++i) s.push_back("IXYZ"[gen() % 4]);
      return PauliString::from_str(s);
    };
    const auto a = rand_string();
    const auto b = rand_string();
    const auto prod = multiply(a, b);
    const oracles::Mat lhs =
        oracles::dense_string(a.str()) * oracles::dense_string(b.str());
    const oracles::Mat rhs =
        prod.phase() * oracles::dense_string(prod.string.str());
    REQUIRE((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("commutator of single strings tracks the factored i") {
  auto x = OperatorMap::from_terms(
      1, false, {{PauliString::from_str("X").x, PauliString::from_str("X").z, 1.0}});
  auto y = OperatorMap::from_terms(
      1, false, {{PauliString::from_str("Y").x, PauliString::from_str("Y").z, 1.0}});
  // [X, Y] = 2iZ, stored as coefficient 2 on Z with the i factored out
  auto c = commutator(x, y);
  REQUIRE(c.size() == 1);
  CHECK(c.coefficient(PauliString::from_str("Z")) == doctest::Approx(2.0));
}

TEST_CASE("commutator is antisymmetric and annihilates itself") {
  auto a = oracles::random_map(5, 12, 11);
  auto b = oracles::random_map(5, 12, 12);
  CHECK(commutator(a, a).empty());
  auto ab = commutator(a, b);
  auto ba = commutator(b, a);
  ba.scale(-1.0);
  CHECK(ab == ba);
}

TEST_CASE("commutator bilinearity") {
  auto a = oracles::random_map(5, 10, 21);
  auto b = oracles::random_map(5, 10, 22);
  auto c = oracles::random_map(5, 10, 23);
  // [a, b + 2c] = [a,b] + 2[a,c]
  OperatorMap bc = b;
  bc.axpy(2.0, c);
  auto lhs = commutator(a, bc);
  auto rhs = commutator(a, b);
  rhs.axpy(2.0, commutator(a, c));
  auto diff = lhs;
  diff.axpy(-1.0, rhs);
  CHECK(diff.norm() < 1e-12);
}

TEST_CASE("commutator and inner product match the dense oracle") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const int n = 6;
    auto a = oracles::random_map(n, 20, seed);
    auto b = oracles::random_map(n, 20, seed + 100);
    const auto ad = oracles::dense_operator(a);
    const auto bd = oracles::dense_operator(b);

    // inner product
    const double ip = a.inner_product(b);
    CHECK(ip == doctest::Approx(oracles::dense_inner(ad, bd).real())
                    .epsilon(1e-12));

    // commutator: stored map is -i[a, b]
    auto c = commutator(a, b);
    const auto cd = oracles::dense_operator(c);
    const oracles::Mat expect = std::complex<double>(0, -1) *
                                oracles::dense_commutator(ad, bd);
    REQUIRE((cd - expect).norm() < 1e-10);
  }
}

TEST_CASE("commutator output size is bounded by the pair count") {
  auto a = oracles::random_map(6, 15, 31);
  auto b = oracles::random_map(6, 25, 32);
  auto c = commutator(a, b);
  CHECK(c.size() <= a.size() * b.size());
}

TEST_CASE("norms are positive definite") {
  auto a = oracles::random_map(5, 10, 41);
  CHECK(a.inner_product(a) > 0);
  OperatorMap empty(5, false);
  CHECK(empty.inner_product(empty) == 0.0);
  CHECK(empty.empty());
}

TEST_CASE("exact pruning policy is lossless and idempotent") {
  auto a = oracles::random_map(6, 30, 51);
  auto pruned = a;
  pruned.prune(TruncationPolicy{});
  CHECK(pruned == a);
  pruned.prune(TruncationPolicy{});
  CHECK(pruned == a);
}

TEST_CASE("max_strings keeps the heaviest terms deterministically") {
  std::vector<OperatorMap::Term> terms;
  for (int i = 0; i < 8; ++i) {
    SiteMask x;
    x.set(i);
    terms.push_back({x, SiteMask{}, (i % 2 ? 1.0 : -1.0) * (1.0 + i)});
  }
  auto a = OperatorMap::from_terms(10, false, terms);
  TruncationPolicy pol;
  pol.max_strings = 3;
  a.prune(pol);
  REQUIRE(a.size() == 3);
  // survivors are the three largest magnitudes: 8, 7, 6 on sites 7, 6, 5
  for (int site : {5, 6, 7}) {
    SiteMask x;
    x.set(site);
    CHECK(a.coefficient(x, SiteMask{}) != 0.0);
  }
}

TEST_CASE("threshold pruning drops strictly-below terms") {
  std::vector<OperatorMap::Term> terms;
  SiteMask x0, x1;
  x0.set(0);
  x1.set(1);
  terms.push_back({x0, SiteMask{}, 0.5});
  terms.push_back({x1, SiteMask{}, 1e-13});
  auto a = OperatorMap::from_terms(4, false, terms);
  TruncationPolicy pol;
  pol.coeff_threshold = 1e-12;
  a.prune(pol);
  CHECK(a.size() == 1);
  CHECK(a.coefficient(x0, SiteMask{}) == doctest::Approx(0.5));
}

TEST_CASE("max_weight drops wide strings") {
  auto a = OperatorMap::from_terms(
      6, false,
      {{PauliString::from_str("XXXIII").x, PauliString::from_str("XXXIII").z, 1.0},
       {PauliString::from_str("XIIIII").x, PauliString::from_str("XIIIII").z, 1.0}});
  TruncationPolicy pol;
  pol.max_weight = 2;
  a.prune(pol);
  CHECK(a.size() == 1);
}

TEST_CASE("dense construction") {
  SUBCASE("identity map") {
    std::vector<OperatorMap::Term> t{{SiteMask{}, SiteMask{}, 1.0}};
    auto id = OperatorMap::from_terms(3, false, t);
    CHECK((to_dense(id) - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-15);
  }
  SUBCASE("single X") {
    auto x = to_dense(PauliString::from_str("X"));
    Eigen::MatrixXcd expect(2, 2);
    expect << 0, 1, 1, 0;
    CHECK((x - expect).norm() < 1e-15);
  }
  SUBCASE("matches the kronecker oracle on random strings") {
    std::mt19937 gen(3);
    for (int t = 0; t < 10; ++t) {
      std::string s;
      for (int i = 0; i < 4; ++i) s.push_back("IXYZ"[gen() % 4]);
      CHECK((to_dense(PauliString::from_str(s)) - oracles::dense_string(s))
                .norm() < 1e-13);
    }
  }
  SUBCASE("guard refuses large systems") {
    OperatorMap big(kDenseSiteGuard + 1, false);
    CHECK_THROWS_WITH_AS(to_dense(big),
                         doctest::Contains("exceeds the guard"),
                         std::invalid_argument);
  }
}

TEST_CASE("serialization round-trips exactly") {
  for (unsigned seed : {5u, 6u}) {
    auto a = oracles::random_map(7, 25, seed);
    std::stringstream ss;
    a.serialize(ss, 1);
    auto [back, grade] = OperatorMap::deserialize(ss);
    CHECK(grade == 1);
    CHECK(back == a);
  }
}

TEST_CASE("reduced commutator equals the expanded plain commutator") {
  // the shift-sum over representatives must reproduce the full commutator
  // of the translation-invariant operators, checked densely
  for (unsigned seed : {11u, 12u, 13u}) {
    const int n = 7;
    auto a_red = oracles::random_map(n, 6, seed, /*reduced=*/true);
    auto b_red = oracles::random_map(n, 6, seed + 40, /*reduced=*/true);
    auto c_red = commutator(a_red, b_red);

    auto expand = [&](const OperatorMap& red) {
      std::vector<OperatorMap::Term> terms;
      for (const auto& t : red.terms()) {
        for (int d = 0; d < n; ++d) {
          terms.push_back(
              {t.x.rotated(d, n), t.z.rotated(d, n), t.coeff});
        }
      }
      return OperatorMap::from_terms(n, false, std::move(terms));
    };
    auto c_plain = commutator(expand(a_red), expand(b_red));

    // reduced result times one orbit expansion == plain result of the full
    // translation-invariant operators
    const oracles::Mat lhs = oracles::dense_operator(c_red);
    const oracles::Mat rhs = oracles::dense_operator(c_plain);
    REQUIRE((lhs - rhs).norm() < 1e-10);

    // per-site inner products match the full trace divided by n
    const double per_site = a_red.inner_product(b_red);
    const double full = expand(a_red).inner_product(expand(b_red));
    CHECK(per_site == doctest::Approx(full / n).epsilon(1e-12));
  }
}

TEST_CASE("reduced serialization round-trips canonically") {
  auto a = oracles::random_map(10, 14, 61, /*reduced=*/true);
  std::stringstream ss;
  a.serialize(ss, 0);
  auto [back, grade] = OperatorMap::deserialize(ss);
  CHECK(grade == 0);
  CHECK(back == a);
}

TEST_CASE("translation-reduced maps canonicalize rotations") {
  const int n = 8;
  SiteMask x1, x2;
  x1.set(2);
  x2.set(5);
  auto a = OperatorMap::from_terms(n, true, {{x1, SiteMask{}, 1.0}});
  auto b = OperatorMap::from_terms(n, true, {{x2, SiteMask{}, 1.0}});
  CHECK(a == b);  // same orbit, same canonical form
  CHECK(a.inner_product(b) == doctest::Approx(1.0));
}

TEST_CASE("circular span accounts for wrap-around") {
  SiteMask m;
  m.set(0);
  m.set(7);
  CHECK(circular_span(m, 8) == 2);  // adjacent across the seam
  SiteMask w;
  w.set(0);
  w.set(3);
  CHECK(circular_span(w, 8) == 4);
  CHECK(circular_span(SiteMask{}, 8) == 0);
}

TEST_CASE("128-bit masks: rotation and popcount across the word boundary") {
  SiteMask m;
  m.set(63);
  m.set(64);
  CHECK(m.count() == 2);
  auto r = m.rotated(1, 128);
  CHECK(r.test(64));
  CHECK(r.test(65));
  auto back = r.rotated(-1, 128);
  CHECK(back == m);
  // wrap the top bit
  SiteMask top;
  top.set(127);
  CHECK(top.rotated(1, 128).test(0));
  // ring smaller than a word
  SiteMask edge;
  edge.set(9);
  CHECK(edge.rotated(1, 10).test(0));
}
