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

#include "kchain/operator_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kchain {

namespace {

bool term_less(const OperatorMap::Term& a, const OperatorMap::Term& b) {
  return mask_pair_less(a.x, a.z, b.x, b.z);
}

bool same_key(const OperatorMap::Term& a, const OperatorMap::Term& b) {
  return a.x == b.x && a.z == b.z;
}

std::uint64_t mix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

std::uint64_t key_hash(SiteMask x, SiteMask z) {
  std::uint64_t h = mix64(x.lo);
  h = mix64(h ^ x.hi);
  h = mix64(h ^ z.lo);
  return mix64(h ^ z.hi);
}

void format_coeff(char* buf, std::size_t n, double c) {
  std::snprintf(buf, n, "%+.17g", c);
}

}  // namespace

std::string TruncationPolicy::describe() const {
  std::ostringstream oss;
  oss << "threshold=" << coeff_threshold;
  oss << ";max_strings=" << (max_strings ? std::to_string(*max_strings) : "none");
  oss << ";max_weight=" << (max_weight ? std::to_string(*max_weight) : "none");
  return oss.str();
}

OperatorMap::OperatorMap(int n_sites, bool translation_reduced)
    : n_sites_(n_sites), reduced_(translation_reduced) {
  if (n_sites <= 0 || n_sites > kMaxSites) {
    throw std::invalid_argument("n_sites must be in [1, " +
                                std::to_string(kMaxSites) + "]");
  }
}

OperatorMap OperatorMap::from_terms(int n_sites, bool translation_reduced,
                                    std::vector<Term> terms) {
  OperatorMap out(n_sites, translation_reduced);
  const SiteMask valid = SiteMask::full(n_sites);
  for (Term& t : terms) {
    if (!(((t.x | t.z) & valid) == (t.x | t.z))) {
      throw std::invalid_argument("term has support beyond n_sites");
    }
    if (translation_reduced) canonicalize_rotation(t.x, t.z, n_sites);
  }
  std::sort(terms.begin(), terms.end(), term_less);
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (!merged.empty() && same_key(merged.back(), t)) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  out.terms_ = std::move(merged);
  return out;
}

double OperatorMap::coefficient(SiteMask x, SiteMask z) const {
  if (reduced_) canonicalize_rotation(x, z, n_sites_);
  Term probe{x, z, 0.0};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, term_less);
  if (it != terms_.end() && it->x == x && it->z == z) return it->coeff;
  return 0.0;
}

double OperatorMap::coefficient(const PauliString& p) const {
  if (p.n_sites != n_sites_) {
    throw std::invalid_argument("pauli string size mismatch");
  }
  return coefficient(p.x, p.z);
}

void OperatorMap::scale(double factor) {
  for (Term& t : terms_) t.coeff *= factor;
  if (factor == 0.0) terms_.clear();
}

void OperatorMap::axpy(double factor, const OperatorMap& other) {
  if (other.n_sites_ != n_sites_ || other.reduced_ != reduced_) {
    throw std::invalid_argument("operator size or representation mismatch");
  }
  if (factor == 0.0 || other.empty()) return;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto ia = terms_.begin();
  auto ib = other.terms_.begin();
  while (ia != terms_.end() && ib != other.terms_.end()) {
    if (same_key(*ia, *ib)) {
      const double c = ia->coeff + factor * ib->coeff;
      if (c != 0.0) merged.push_back({ia->x, ia->z, c});
      ++ia;
      ++ib;
    } else if (term_less(*ia, *ib)) {
      merged.push_back(*ia++);
    } else {
      merged.push_back({ib->x, ib->z, factor * ib->coeff});
      ++ib;
    }
  }
  for (; ia != terms_.end(); ++ia) merged.push_back(*ia);
  for (; ib != other.terms_.end(); ++ib) {
    merged.push_back({ib->x, ib->z, factor * ib->coeff});
  }
  terms_ = std::move(merged);
}

double OperatorMap::inner_product(const OperatorMap& other) const {
  if (other.n_sites_ != n_sites_ || other.reduced_ != reduced_) {
    throw std::invalid_argument("operator size or representation mismatch");
  }
  double acc = 0.0;
  auto ia = terms_.begin();
  auto ib = other.terms_.begin();
  while (ia != terms_.end() && ib != other.terms_.end()) {
    if (same_key(*ia, *ib)) {
      acc += ia->coeff * ib->coeff;
      ++ia;
      ++ib;
    } else if (term_less(*ia, *ib)) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return acc;
}

double OperatorMap::norm() const {
  double acc = 0.0;
  for (const Term& t : terms_) acc += t.coeff * t.coeff;
  return std::sqrt(acc);
}

int OperatorMap::max_span() const {
  int best = 0;
  for (const Term& t : terms_) {
    best = std::max(best, circular_span(t.x | t.z, n_sites_));
  }
  return best;
}

void OperatorMap::prune(const TruncationPolicy& policy) {
  if (policy.max_weight) {
    std::erase_if(terms_, [&](const Term& t) {
      return (t.x | t.z).count() > *policy.max_weight;
    });
  }
  if (policy.coeff_threshold > 0.0) {
    std::erase_if(terms_, [&](const Term& t) {
      return std::abs(t.coeff) < policy.coeff_threshold;
    });
  }
  if (policy.max_strings && terms_.size() > *policy.max_strings) {
    auto heavier = [](const Term& a, const Term& b) {
      const double ma = std::abs(a.coeff), mb = std::abs(b.coeff);
      if (ma != mb) return ma > mb;
      return term_less(a, b);
    };
    std::nth_element(terms_.begin(),
                     terms_.begin() + static_cast<std::ptrdiff_t>(*policy.max_strings),
                     terms_.end(), heavier);
    terms_.resize(*policy.max_strings);
    std::sort(terms_.begin(), terms_.end(), term_less);
  }
}

bool OperatorMap::operator==(const OperatorMap& other) const {
  if (n_sites_ != other.n_sites_ || reduced_ != other.reduced_ ||
      terms_.size() != other.terms_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!same_key(terms_[i], other.terms_[i]) ||
        terms_[i].coeff != other.terms_[i].coeff) {
      return false;
    }
  }
  return true;
}

void OperatorMap::serialize(std::ostream& out, int grade) const {
  out << "kchain-operator v1\n";
  out << "n_sites " << n_sites_ << "\n";
  out << "grade " << (grade & 1) << "\n";
  out << "reduced " << (reduced_ ? 1 : 0) << "\n";
  out << "terms " << terms_.size() << "\n";
  char buf[64];
  for (const Term& t : terms_) {
    format_coeff(buf, sizeof buf, t.coeff);
    PauliString p{n_sites_, t.x, t.z};
    out << buf << " " << p.str() << "\n";
  }
}

std::pair<OperatorMap, int> OperatorMap::deserialize(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "kchain-operator v1") {
    throw std::runtime_error("bad operator header");
  }
  auto read_kv = [&](const std::string& key) -> long long {
    std::string k;
    long long v = 0;
    if (!(in >> k >> v) || k != key) {
      throw std::runtime_error("bad operator header field, expected " + key);
    }
    return v;
  };
  const int n_sites = static_cast<int>(read_kv("n_sites"));
  const int grade = static_cast<int>(read_kv("grade"));
  const bool reduced = read_kv("reduced") != 0;
  const auto n_terms = static_cast<std::size_t>(read_kv("terms"));
  std::vector<Term> terms;
  terms.reserve(n_terms);
  for (std::size_t i = 0; i < n_terms; ++i) {
    double c = 0.0;
    std::string s;
    if (!(in >> c >> s)) throw std::runtime_error("truncated operator file");
    PauliString p = PauliString::from_str(s);
    if (p.n_sites != n_sites) {
      throw std::runtime_error("term length disagrees with n_sites");
    }
    terms.push_back({p.x, p.z, c});
  }
  return {from_terms(n_sites, reduced, std::move(terms)), grade};
}

// ---------------------------------------------------------------------------
// Commutator accumulation: open-addressing table keyed by (x, z), drained
// into a sorted term vector. Accumulation order is the (deterministic)
// visit order of the pair loops, so results are bit-reproducible.
// ---------------------------------------------------------------------------

class TermAccumulator {
 public:
  explicit TermAccumulator(std::size_t expected) {
    std::size_t cap = 64;
    while (cap < expected * 2) cap <<= 1;
    slots_.resize(cap);
  }

  void add(SiteMask x, SiteMask z, double v) {
    if ((count_ + 1) * 10 > slots_.size() * 7) grow();
    std::size_t i = key_hash(x, z) & (slots_.size() - 1);
    for (;;) {
      Slot& s = slots_[i];
      if (!s.used) {
        s.used = true;
        s.x = x;
        s.z = z;
        s.v = v;
        ++count_;
        return;
      }
      if (s.x == x && s.z == z) {
        s.v += v;
        return;
      }
      i = (i + 1) & (slots_.size() - 1);
    }
  }

  std::vector<OperatorMap::Term> drain() {
    std::vector<OperatorMap::Term> out;
    out.reserve(count_);
    for (const Slot& s : slots_) {
      if (s.used && s.v != 0.0) out.push_back({s.x, s.z, s.v});
    }
    std::sort(out.begin(), out.end(), term_less);
    return out;
  }

 private:
  struct Slot {
    SiteMask x, z;
    double v = 0.0;
    bool used = false;
  };

  void grow() {
    std::vector<Slot> old = std::move(slots_);
    slots_.assign(old.size() * 2, Slot{});
    count_ = 0;
    for (const Slot& s : old) {
      if (s.used) {
        std::size_t i = key_hash(s.x, s.z) & (slots_.size() - 1);
        while (slots_[i].used) i = (i + 1) & (slots_.size() - 1);
        slots_[i] = s;
        ++count_;
      }
    }
  }

  std::vector<Slot> slots_;
  std::size_t count_ = 0;
};

namespace {

// [P, Q] = 2 i^k PQ for anticommuting strings; with C = -i[A, B] the pair
// contributes coefficient 2*ca*cb for phase exponent k = 1 and -2*ca*cb for
// k = 3.
inline double commutator_sign(int phase_exponent) {
  return phase_exponent == 1 ? 2.0 : -2.0;
}

}  // namespace

OperatorMap commutator(const OperatorMap& a, const OperatorMap& b,
                       const TruncationPolicy& policy) {
  if (a.n_sites() != b.n_sites() ||
      a.translation_reduced() != b.translation_reduced()) {
    throw std::invalid_argument("operator size or representation mismatch");
  }
  const int n = a.n_sites();

  TermAccumulator acc(std::max<std::size_t>(b.size() * 4, 64));

  if (!a.translation_reduced()) {
    for (const auto& ta : a.terms()) {
      for (const auto& tb : b.terms()) {
        if (((ta.x | ta.z) & (tb.x | tb.z)).none()) continue;
        if (!anticommutes(ta.x, ta.z, tb.x, tb.z)) continue;
        const int k = product_phase_exponent(ta.x, ta.z, tb.x, tb.z);
        acc.add(ta.x ^ tb.x, ta.z ^ tb.z,
                commutator_sign(k) * ta.coeff * tb.coeff);
      }
    }
    OperatorMap out = OperatorMap::from_terms(n, false, acc.drain());
    out.prune(policy);
    return out;
  }

  // Reduced representatives: the commutator of two translation-invariant
  // sums is the shift sum over one operand. All rotations of the (small)
  // A terms are precomputed; outputs are canonicalized before accumulation.
  struct Rot {
    SiteMask x, z, support;
    double coeff;
  };
  std::vector<Rot> rotations;
  rotations.reserve(a.size() * static_cast<std::size_t>(n));
  for (const auto& ta : a.terms()) {
    for (int d = 0; d < n; ++d) {
      SiteMask rx = ta.x.rotated(d, n);
      SiteMask rz = ta.z.rotated(d, n);
      rotations.push_back({rx, rz, rx | rz, ta.coeff});
    }
  }

  for (const auto& tb : b.terms()) {
    const SiteMask sb = tb.x | tb.z;
    for (const Rot& ra : rotations) {
      if ((ra.support & sb).none()) continue;
      if (!anticommutes(ra.x, ra.z, tb.x, tb.z)) continue;
      const int k = product_phase_exponent(ra.x, ra.z, tb.x, tb.z);
      SiteMask cx = ra.x ^ tb.x;
      SiteMask cz = ra.z ^ tb.z;
      canonicalize_rotation(cx, cz, n);
      acc.add(cx, cz, commutator_sign(k) * ra.coeff * tb.coeff);
    }
  }
  OperatorMap out = OperatorMap::from_terms(n, true, acc.drain());
  out.prune(policy);
  return out;
}

}  // namespace kchain
