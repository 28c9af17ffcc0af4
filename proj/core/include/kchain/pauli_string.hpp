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

#include <bit>
#include <complex>
#include <cstdint>
#include <string>

namespace kchain {

/// Maximum number of spin-1/2 sites a string can address (two 64-bit words).
inline constexpr int kMaxSites = 128;

/// A set of sites on a ring of up to kMaxSites spins, stored as two 64-bit
/// words. Bit i corresponds to site i.
struct SiteMask {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend constexpr SiteMask operator^(SiteMask a, SiteMask b) {
    return {a.lo ^ b.lo, a.hi ^ b.hi};
  }
  friend constexpr SiteMask operator&(SiteMask a, SiteMask b) {
    return {a.lo & b.lo, a.hi & b.hi};
  }
  friend constexpr SiteMask operator|(SiteMask a, SiteMask b) {
    return {a.lo | b.lo, a.hi | b.hi};
  }
  friend constexpr bool operator==(SiteMask a, SiteMask b) {
    return a.lo == b.lo && a.hi == b.hi;
  }

  constexpr bool none() const { return lo == 0 && hi == 0; }
  constexpr int count() const {
    return std::popcount(lo) + std::popcount(hi);
  }
  /// Parity (mod 2) of the number of set bits.
  constexpr bool parity() const { return (count() & 1) != 0; }

  constexpr bool test(int i) const {
    return i < 64 ? (lo >> i) & 1u : (hi >> (i - 64)) & 1u;
  }
  constexpr void set(int i) {
    if (i < 64) {
      lo |= std::uint64_t{1} << i;
    } else {
      hi |= std::uint64_t{1} << (i - 64);
    }
  }

  /// Index of the lowest set bit; undefined for an empty mask.
  constexpr int lowest() const {
    return lo != 0 ? std::countr_zero(lo) : 64 + std::countr_zero(hi);
  }

  /// Shift left by k bits (0 <= k < 128), bits above 127 are lost.
  constexpr SiteMask shl(int k) const {
    if (k == 0) return *this;
    if (k >= 64) return {0, lo << (k - 64)};
    return {lo << k, (hi << k) | (lo >> (64 - k))};
  }
  /// Shift right by k bits (0 <= k < 128).
  constexpr SiteMask shr(int k) const {
    if (k == 0) return *this;
    if (k >= 64) return {hi >> (k - 64), 0};
    return {(lo >> k) | (hi << (64 - k)), hi >> k};
  }

  /// Mask with bits [0, n) set.
  static constexpr SiteMask full(int n) {
    if (n <= 0) return {};
    if (n >= 128) return {~std::uint64_t{0}, ~std::uint64_t{0}};
    if (n < 64) return {(std::uint64_t{1} << n) - 1, 0};
    if (n == 64) return {~std::uint64_t{0}, 0};
    return {~std::uint64_t{0}, (std::uint64_t{1} << (n - 64)) - 1};
  }

  /// Cyclic rotation by `shift` sites on a ring of `n_sites`.
  constexpr SiteMask rotated(int shift, int n_sites) const {
    shift %= n_sites;
    if (shift < 0) shift += n_sites;
    if (shift == 0) return *this;
    SiteMask m = shl(shift) | shr(n_sites - shift);
    return m & full(n_sites);
  }
};

/// Total order on (x, z) mask pairs used for canonical term ordering and
/// deterministic tie-breaking.
constexpr bool mask_pair_less(SiteMask ax, SiteMask az, SiteMask bx,
                              SiteMask bz) {
  if (ax.hi != bx.hi) return ax.hi < bx.hi;
  if (ax.lo != bx.lo) return ax.lo < bx.lo;
  if (az.hi != bz.hi) return az.hi < bz.hi;
  return az.lo < bz.lo;
}

/// One tensor product of single-site Pauli operators {I, X, Y, Z} over
/// n_sites spins, in the symplectic encoding: site i carries an X component
/// when x.test(i), a Z component when z.test(i), Y when both, I when neither.
/// Every such string is a Hermitian operator.
struct PauliString {
  int n_sites = 0;
  SiteMask x;
  SiteMask z;

  bool is_identity() const { return x.none() && z.none(); }
  /// Number of sites carrying a Y factor.
  int y_count() const { return (x & z).count(); }
  /// Number of non-identity sites.
  int weight() const { return (x | z).count(); }

  bool operator==(const PauliString&) const = default;

  /// "IXYZ..."-style rendering, site 0 leftmost.
  std::string str() const;

  /// Parses a string of I/X/Y/Z characters.
  static PauliString from_str(const std::string& s);

  /// Builds a single-site Pauli: p in {'X','Y','Z'} at the given site.
  static PauliString single(int n_sites, int site, char p);
};

/// Result of a Pauli string product: phase * string equals the matrix
/// product. `phase_exponent` k encodes the phase i^k, k in {0,1,2,3}.
struct PauliProduct {
  int phase_exponent = 0;
  PauliString string;

  std::complex<double> phase() const {
    switch (phase_exponent & 3) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return {-1, 0};
      default: return {0, -1};
    }
  }
};

/// Matrix product of two Pauli strings. Throws std::invalid_argument on
/// mismatched n_sites.
PauliProduct multiply(const PauliString& a, const PauliString& b);

/// True when the two strings anticommute (odd symplectic product).
inline bool anticommutes(SiteMask ax, SiteMask az, SiteMask bx, SiteMask bz) {
  return (ax & bz).parity() != (az & bx).parity();
}

/// Phase exponent k (mod 4) such that the product of strings a and b equals
/// i^k times the string with masks (ax^bx, az^bz).
inline int product_phase_exponent(SiteMask ax, SiteMask az, SiteMask bx,
                                  SiteMask bz) {
  const int ya = (ax & az).count();
  const int yb = (bx & bz).count();
  const int yc = ((ax ^ bx) & (az ^ bz)).count();
  int k = ya + yb - yc + 2 * static_cast<int>((az & bx).parity());
  k &= 3;
  return k;
}

/// Smallest contiguous window on the ring containing all non-identity sites
/// (0 for the identity string). Accounts for wrap-around.
int circular_span(SiteMask support, int n_sites);

/// Canonical translation representative: the rotation whose support starts
/// right after the largest circular gap; ties are broken by the smallest
/// (x, z) mask pair. Identity maps to itself.
void canonicalize_rotation(SiteMask& x, SiteMask& z, int n_sites);

}  // namespace kchain
