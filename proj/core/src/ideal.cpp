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

#include "kchain/ideal.hpp"

#include <cmath>
#include <stdexcept>

#include "kchain/open_chain.hpp"

namespace kchain {

using cdouble = std::complex<double>;

std::complex<double> meixner(int n, cdouble x) {
  if (n < 0) throw std::invalid_argument("degree must be >= 0");
  cdouble prev(1, 0);  // M_0
  if (n == 0) return prev;
  cdouble cur = x;  // M_1
  for (int k = 1; k < n; ++k) {
    const cdouble next = x * cur - static_cast<double>(k) *
                                       static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::complex<double> meixner_direct(int n, cdouble x) {
  if (n < 0) throw std::invalid_argument("degree must be >= 0");
  // i^n n! sum_k 2^k C(n,k) C(a,k) with a = (-ix-1)/2 and the generalized
  // binomial C(a,k) = prod_{j<k} (a-j)/k!. The sum cancels heavily, so it is
  // carried in extended precision.
  using cldouble = std::complex<long double>;
  const cldouble xl(x.real(), x.imag());
  const cldouble a = (cldouble(0, -1) * xl - 1.0L) / 2.0L;
  cldouble sum(0, 0);
  cldouble gen_binom(1, 0);   // C(a, k)
  long double nk_binom = 1.0; // C(n, k)
  long double pow2 = 1.0;
  for (int k = 0; k <= n; ++k) {
    sum += pow2 * nk_binom * gen_binom;
    gen_binom *= (a - static_cast<long double>(k)) /
                 (static_cast<long double>(k) + 1.0L);
    nk_binom *= static_cast<long double>(n - k) /
                (static_cast<long double>(k) + 1.0L);
    pow2 *= 2.0L;
  }
  cldouble i_pow(1, 0);
  for (int k = 0; k < (n & 3); ++k) i_pow *= cldouble(0, 1);
  long double fact = 1.0;
  for (int k = 2; k <= n; ++k) fact *= k;
  const cldouble v = i_pow * fact * sum;
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

std::complex<double> modified_hermite(int n, cdouble x) {
  if (n < 0) throw std::invalid_argument("degree must be >= 0");
  cdouble prev(1, 0);
  if (n == 0) return prev;
  cdouble cur = x;
  for (int k = 1; k < n; ++k) {
    const cdouble next = x * cur - static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

// phi_{n+1} = (i omega phi_n + n phi_{n-1}) / (n+1), phi_0 = 1, with running
// renormalization. Returns the sequence and the log10 of the factored-out
// scale.
struct PhiSequence {
  std::vector<cdouble> phi;
  double log10_scale = 0.0;
  bool scaled = false;
};

PhiSequence meixner_phi(cdouble omega, int l) {
  PhiSequence out;
  out.phi.resize(static_cast<std::size_t>(l) + 1);
  out.phi[0] = 1.0;
  const cdouble iw = cdouble(0, 1) * omega;
  if (l >= 1) out.phi[1] = iw;
  for (int n = 1; n + 1 <= l; ++n) {
    out.phi[static_cast<std::size_t>(n) + 1] =
        (iw * out.phi[static_cast<std::size_t>(n)] +
         static_cast<double>(n) * out.phi[static_cast<std::size_t>(n) - 1]) /
        (static_cast<double>(n) + 1.0);
    const double mag = std::abs(out.phi[static_cast<std::size_t>(n) + 1]);
    if (mag > 1e100) {
      for (auto& v : out.phi) v /= mag;
      out.log10_scale += std::log10(mag);
      out.scaled = true;
    }
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> meixner_chain_vector(cdouble omega, int l) {
  PhiSequence seq = meixner_phi(omega, l);
  double peak = 0.0;
  for (const auto& v : seq.phi) peak = std::max(peak, std::abs(v));
  if (peak > 0) {
    for (auto& v : seq.phi) v /= peak;
  }
  return seq.phi;
}

BoundaryEval boundary_polynomial(cdouble omega, int l) {
  if (l < 1) throw std::invalid_argument("cut site must be >= 1");
  // The defining polynomial (omega + 2i(l+1)) M_l - (2l+1) l M_{l-1} equals
  // l! (-i)^{l-1} [ -i (omega + 2i(l+1)) phi_l - (2l+1) phi_{l-1} ] in terms
  // of the chain eigenvector entries phi_n = i^n M_n / n!.
  PhiSequence seq = meixner_phi(omega, l);
  const cdouble phi_l = seq.phi[static_cast<std::size_t>(l)];
  const cdouble phi_lm1 = seq.phi[static_cast<std::size_t>(l) - 1];
  const cdouble lead = cdouble(0, -1) * (omega + cdouble(0, 2.0 * (l + 1)));
  BoundaryEval out;
  out.value = lead * phi_l - (2.0 * l + 1.0) * phi_lm1;
  out.scale = std::abs(lead) * std::abs(phi_l) +
              (2.0 * l + 1.0) * std::abs(phi_lm1);
  if (out.scale == 0.0) out.scale = 1.0;
  out.scaled = seq.scaled;
  double log_fact = 0.0;
  for (int k = 2; k <= l; ++k) log_fact += std::log10(static_cast<double>(k));
  out.log10_scale = seq.log10_scale + log_fact;
  return out;
}

std::vector<double> linear_coefficients(int count, double alpha) {
  std::vector<double> b(static_cast<std::size_t>(count));
  for (int n = 1; n <= count; ++n) {
    b[static_cast<std::size_t>(n) - 1] = alpha * n;
  }
  return b;
}

std::vector<double> sqrt_coefficients(int count) {
  std::vector<double> b(static_cast<std::size_t>(count));
  for (int n = 1; n <= count; ++n) {
    b[static_cast<std::size_t>(n) - 1] = std::sqrt(static_cast<double>(n));
  }
  return b;
}

std::vector<double> dissipative_toy_coefficients(int count, double gamma) {
  if (gamma < 0.0 || gamma >= 1.0) {
    throw std::invalid_argument("dissipation rate must lie in [0, 1)");
  }
  const double scale = std::sqrt(1.0 - gamma * gamma);
  std::vector<double> b(static_cast<std::size_t>(count));
  for (int n = 1; n <= count; ++n) {
    b[static_cast<std::size_t>(n) - 1] = scale * n;
  }
  return b;
}

nlohmann::json verify_linear_chain_structure(int l, double alpha, double tol) {
  if (l < 2) throw std::invalid_argument("structure check needs l >= 2");
  const auto b = linear_coefficients(l + 1, alpha);
  const OpenLiouvillian lv = build_liouvillian(b, l, ChainKind::open);
  const auto modes = spectrum(lv);

  nlohmann::json report;
  report["l"] = l;
  report["alpha"] = alpha;
  nlohmann::json checks = nlohmann::json::array();
  auto add_check = [&](const std::string& name, double deviation,
                       double tolerance) {
    checks.push_back({{"assertion", name},
                      {"deviation", deviation},
                      {"tolerance", tolerance},
                      {"pass", deviation <= tolerance}});
  };

  // Locate the two trivial modes by eigenvalue distance.
  const cdouble w1(0, -alpha), w3(0, -3.0 * alpha);
  const SpectralMode* m1 = nullptr;
  const SpectralMode* m3 = nullptr;
  for (const auto& m : modes) {
    if (!m1 || std::abs(m.omega - w1) < std::abs(m1->omega - w1)) m1 = &m;
    if (!m3 || std::abs(m.omega - w3) < std::abs(m3->omega - w3)) m3 = &m;
  }
  add_check("trivial_root_-i_present", std::abs(m1->omega - w1), tol * alpha);
  add_check("trivial_root_-3i_present", std::abs(m3->omega - w3), tol * alpha);

  // Constant eigenvector at -i*alpha.
  {
    const Eigen::VectorXcd& phi = m1->phi;
    cdouble mean = phi.mean();
    double dev = 0.0;
    for (Eigen::Index n = 0; n < phi.size(); ++n) {
      dev = std::max(dev, std::abs(phi[n] - mean));
    }
    add_check("eigenvector_-i_constant", dev / std::abs(mean), tol);
  }
  // Eigenvector proportional to 2n+1 (n counted from 0) at -3i*alpha.
  {
    const Eigen::VectorXcd& phi = m3->phi;
    Eigen::VectorXcd ref(phi.size());
    for (Eigen::Index n = 0; n < phi.size(); ++n) {
      ref[n] = 2.0 * static_cast<double>(n) + 1.0;
    }
    ref /= ref.norm();
    const cdouble overlap = ref.dot(phi);  // conjugate-linear in ref
    const double dev = (phi - overlap * ref).norm();
    add_check("eigenvector_-3i_linear_2n+1", dev, tol);
  }
  // Every remaining eigenvalue on the Im = -2*alpha band.
  {
    double dev = 0.0;
    for (const auto& m : modes) {
      if (&m == m1 || &m == m3) continue;
      dev = std::max(dev, std::abs(m.omega.imag() + 2.0 * alpha));
    }
    add_check("bulk_band_im_-2alpha", dev / alpha, tol);
  }

  report["checks"] = checks;
  bool all = true;
  for (const auto& c : checks) {
    if (!c["pass"].get<bool>()) all = false;
  }
  report["pass"] = all;
  return report;
}

}  // namespace kchain
