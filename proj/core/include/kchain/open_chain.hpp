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
#include <span>
#include <vector>

namespace kchain {

enum class ChainKind {
  /// Hard cut phi_{l+1} = 0: Hermitian, real spectrum, unphysical revivals.
  dirichlet,
  /// Linear-extrapolation closure phi_{l+1} ~ 2 phi_l - phi_{l-1}: the last
  /// row becomes (b_l + b_{l+1}) phi_{l-1} - 2 b_{l+1} phi_l and the matrix
  /// is non-Hermitian.
  open,
  /// Dirichlet hopping with the decaying diagonal -gamma*(2n+1) added to the
  /// generator (solvable dissipative comparison chain).
  diagonal_dissipative,
};

enum class ModeClass { perpetual, transient, growing };

const char* to_string(ChainKind kind);
const char* to_string(ModeClass cls);

/// Truncated-chain Liouvillian. The complex matrix is i*M with M the real
/// tridiagonal generator of d(phi)/dt = M phi:
///   interior rows   d(phi_n)/dt = b_n phi_{n-1} - b_{n+1} phi_{n+1}
///   last row (open) d(phi_l)/dt = (b_l + b_{l+1}) phi_{l-1} - 2 b_{l+1} phi_l
struct OpenLiouvillian {
  ChainKind kind = ChainKind::dirichlet;
  int truncation_site = 0;  // l; matrix dimension is l+1
  double gamma = 0.0;
  std::vector<double> b;  // b[n-1] holds b_n

  // tridiagonal bands of M: sub[n] = M(n+1, n), diag[n] = M(n, n),
  // sup[n] = M(n, n+1)
  std::vector<double> sub, diag, sup;

  int size() const { return truncation_site + 1; }
  Eigen::MatrixXd generator() const;
  Eigen::MatrixXcd matrix() const;

  /// out = M * in (O(size), no dense materialization).
  void apply_generator(const std::complex<double>* in,
                       std::complex<double>* out) const;

  /// Max absolute row sum of the Liouvillian, used to scale residual gates.
  double norm_bound() const;
};

/// Builds the truncated chain of the requested kind from b_1..b_m. Open
/// chains need m >= l+1 coefficients, the other kinds m >= l. Throws
/// std::invalid_argument naming the required count when short.
OpenLiouvillian build_liouvillian(std::span<const double> b, int l,
                                  ChainKind kind, double gamma = 0.0);

/// One eigenpair of the truncated Liouvillian.
struct SpectralMode {
  std::complex<double> omega;
  Eigen::VectorXcd phi;   // unit Euclidean norm, deterministic phase
  ModeClass cls = ModeClass::transient;
  double mean_position = 0.0;  // sum_n n |phi_n|^2
  double residual = 0.0;       // ||L phi - omega phi||_2
};

/// Krylov-position mass profile m -> sum_{n<=m} |phi_n|^2.
std::vector<double> cumulative_mass(const Eigen::VectorXcd& phi);

struct SpectrumOptions {
  int dense_ceiling = 4096;
  /// Threshold on |Im omega| separating perpetual from decaying modes;
  /// 0 selects 1e-2 * median |Im omega| of the computed spectrum.
  double eps_perpetual = 0.0;
  bool balance = true;
  /// One pass of tridiagonal inverse iteration per mode, kept only when it
  /// lowers the residual.
  bool polish = true;
};

/// Full eigendecomposition. Dirichlet chains go through the symmetric
/// solver (exactly real spectrum); the other kinds balance the real
/// generator and use the general solver. Modes are sorted by Im descending,
/// then Re ascending. Throws std::invalid_argument above the dense ceiling
/// and std::runtime_error on solver failure.
std::vector<SpectralMode> spectrum(const OpenLiouvillian& liouvillian,
                                   const SpectrumOptions& options = {});

/// Classification by decay rate: |Im| <= eps is perpetual, Im < -eps
/// transient, Im > eps growing (a numerical artifact for these chains).
ModeClass classify(std::complex<double> omega, double eps_perpetual);

/// Median-based default threshold used when SpectrumOptions::eps_perpetual
/// is zero.
double default_eps_perpetual(const std::vector<SpectralMode>& modes);

struct ChainState {
  Eigen::VectorXcd phi;
  double time = 0.0;
};

struct EvolveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

/// Integrates d(phi)/dt = M phi through the requested times (ascending,
/// starting at or after phi0.time) with an adaptive embedded Runge-Kutta
/// pair. Throws std::runtime_error when the tolerance cannot be met.
std::vector<ChainState> evolve(const OpenLiouvillian& liouvillian,
                               const ChainState& phi0,
                               std::span<const double> times,
                               const EvolveOptions& options = {});

/// Dense matrix-exponential propagation (guarded to size <= 513): the
/// independent cross-check path for the integrator.
std::vector<ChainState> evolve_expm(const OpenLiouvillian& liouvillian,
                                    const ChainState& phi0,
                                    std::span<const double> times);

/// Amplitude phi_m(t) per state. The physical correlator carries an extra
/// i^m grading which is left to the caller's metadata.
std::vector<double> autocorrelation(const std::vector<ChainState>& states,
                                    int m);

/// delta_{n0} initial condition of length l+1.
ChainState delta_state(int size);

}  // namespace kchain
