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

#include "kchain/pauli_string.hpp"

#include <stdexcept>
#include <vector>

namespace kchain {

std::string PauliString::str() const {
  std::string s(static_cast<std::size_t>(n_sites), 'I');
  for (int i = 0; i < n_sites; ++i) {
    const bool bx = x.test(i);
    const bool bz = z.test(i);
    if (bx && bz) {
      s[static_cast<std::size_t>(i)] = 'Y';
    } else if (bx) {
      s[static_cast<std::size_t>(i)] = 'X';
    } else if (bz) {
      s[static_cast<std::size_t>(i)] = 'Z';
    }
  }
  return s;
}

PauliString PauliString::from_str(const std::string& s) {
  if (s.size() > static_cast<std::size_t>(kMaxSites)) {
    throw std::invalid_argument("pauli string longer than " +
                                std::to_string(kMaxSites) + " sites");
  }
  PauliString p;
  p.n_sites = static_cast<int>(s.size());
  for (int i = 0; i < p.n_sites; ++i) {
    switch (s[static_cast<std::size_t>(i)]) {
      case 'I': break;
      case 'X': p.x.set(i); break;
      case 'Y': p.x.set(i); p.z.set(i); break;
      case 'Z': p.z.set(i); break;
      default:
        throw std::invalid_argument("invalid pauli character '" +
                                    std::string(1, s[i]) + "'");
    }
  }
  return p;
}

PauliString PauliString::single(int n_sites, int site, char p) {
  if (site < 0 || site >= n_sites) {
    throw std::invalid_argument("site index out of range");
  }
  PauliString out;
  out.n_sites = n_sites;
  switch (p) {
    case 'X': out.x.set(site); break;
    case 'Y': out.x.set(site); out.z.set(site); break;
    case 'Z': out.z.set(site); break;
    default: throw std::invalid_argument("expected one of X, Y, Z");
  }
  return out;
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  if (a.n_sites != b.n_sites) {
    throw std::invalid_argument("pauli string size mismatch: " +
                                std::to_string(a.n_sites) + " vs " +
                                std::to_string(b.n_sites));
  }
  PauliProduct out;
  out.phase_exponent = product_phase_exponent(a.x, a.z, b.x, b.z);
  out.string.n_sites = a.n_sites;
  out.string.x = a.x ^ b.x;
  out.string.z = a.z ^ b.z;
  return out;
}

int circular_span(SiteMask support, int n_sites) {
  if (support.none()) return 0;
  std::vector<int> sites;
  for (int i = 0; i < n_sites; ++i) {
    if (support.test(i)) sites.push_back(i);
  }
  // The span is n_sites minus the largest gap between consecutive sites.
  int largest_gap = sites.front() + n_sites - sites.back();
  for (std::size_t k = 1; k < sites.size(); ++k) {
    largest_gap = std::max(largest_gap, sites[k] - sites[k - 1]);
  }
  return n_sites - largest_gap + 1;
}

void canonicalize_rotation(SiteMask& x, SiteMask& z, int n_sites) {
  const SiteMask support = x | z;
  if (support.none()) return;

  std::vector<int> sites;
  for (int i = 0; i < n_sites; ++i) {
    if (support.test(i)) sites.push_back(i);
  }
  // Candidate window starts: the site following each maximal circular gap.
  int largest_gap = sites.front() + n_sites - sites.back();
  for (std::size_t k = 1; k < sites.size(); ++k) {
    largest_gap = std::max(largest_gap, sites[k] - sites[k - 1]);
  }
  std::vector<int> starts;
  if (sites.front() + n_sites - sites.back() == largest_gap) {
    starts.push_back(sites.front());
  }
  for (std::size_t k = 1; k < sites.size(); ++k) {
    if (sites[k] - sites[k - 1] == largest_gap) starts.push_back(sites[k]);
  }

  SiteMask best_x, best_z;
  bool have_best = false;
  for (int s : starts) {
    SiteMask cx = x.rotated(-s, n_sites);
    SiteMask cz = z.rotated(-s, n_sites);
    if (!have_best || mask_pair_less(cx, cz, best_x, best_z)) {
      best_x = cx;
      best_z = cz;
      have_best = true;
    }
  }
  x = best_x;
  z = best_z;
}

}  // namespace kchain
