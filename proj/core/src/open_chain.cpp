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

#include "kchain/open_chain.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kchain {

using cdouble = std::complex<double>;

const char* to_string(ChainKind kind) {
  switch (kind) {
    case ChainKind::dirichlet: return "dirichlet";
    case ChainKind::open: return "open";
    case ChainKind::diagonal_dissipative: return "diagonal_dissipative";
  }
  return "?";
}

const char* to_string(ModeClass cls) {
  switch (cls) {
    case ModeClass::perpetual: return "perpetual";
    case ModeClass::transient: return "transient";
    case ModeClass::growing: return "growing";
  }
  return "?";
}

Eigen::MatrixXd OpenLiouvillian::generator() const {
  const int s = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s, s);
  for (int n = 0; n < s; ++n) {
    m(n, n) = diag[static_cast<std::size_t>(n)];
    if (n + 1 < s) {
      m(n, n + 1) = sup[static_cast<std::size_t>(n)];
      m(n + 1, n) = sub[static_cast<std::size_t>(n)];
    }
  }
  return m;
}

Eigen::MatrixXcd OpenLiouvillian::matrix() const {
  return cdouble(0, 1) * generator();
}

void OpenLiouvillian::apply_generator(const cdouble* in, cdouble* out) const {
  const int s = size();
  for (int n = 0; n < s; ++n) {
    cdouble acc = diag[static_cast<std::size_t>(n)] * in[n];
    if (n > 0) acc += sub[static_cast<std::size_t>(n - 1)] * in[n - 1];
    if (n + 1 < s) acc += sup[static_cast<std::size_t>(n)] * in[n + 1];
    out[n] = acc;
  }
}

double OpenLiouvillian::norm_bound() const {
  const int s = size();
  double best = 0.0;
  for (int n = 0; n < s; ++n) {
    double row = std::abs(diag[static_cast<std::size_t>(n)]);
    if (n > 0) row += std::abs(sub[static_cast<std::size_t>(n - 1)]);
    if (n + 1 < s) row += std::abs(sup[static_cast<std::size_t>(n)]);
    best = std::max(best, row);
  }
  return best;
}

OpenLiouvillian build_liouvillian(std::span<const double> b, int l,
                                  ChainKind kind, double gamma) {
  if (l < 0) throw std::invalid_argument("truncation site must be >= 0");
  if (kind == ChainKind::open && l < 1) {
    throw std::invalid_argument("open boundary needs l >= 1");
  }
  const std::size_t needed =
      kind == ChainKind::open ? static_cast<std::size_t>(l) + 1
                              : static_cast<std::size_t>(l);
  if (b.size() < needed) {
    throw std::invalid_argument(
        "insufficient coefficients: kind " + std::string(to_string(kind)) +
        " at l = " + std::to_string(l) + " needs " + std::to_string(needed) +
        " coefficients, got " + std::to_string(b.size()));
  }
  if (kind == ChainKind::diagonal_dissipative &&
      (gamma < 0.0 || gamma >= 1.0)) {
    throw std::invalid_argument("dissipation rate must lie in [0, 1)");
  }

  OpenLiouvillian out;
  out.kind = kind;
  out.truncation_site = l;
  out.gamma = gamma;
  out.b.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(needed));

  const int s = l + 1;
  out.diag.assign(static_cast<std::size_t>(s), 0.0);
  out.sub.assign(static_cast<std::size_t>(std::max(s - 1, 0)), 0.0);
  out.sup.assign(static_cast<std::size_t>(std::max(s - 1, 0)), 0.0);
  for (int n = 0; n + 1 < s; ++n) {
    out.sub[static_cast<std::size_t>(n)] = b[static_cast<std::size_t>(n)];
    out.sup[static_cast<std::size_t>(n)] = -b[static_cast<std::size_t>(n)];
  }
  switch (kind) {
    case ChainKind::dirichlet:
      break;
    case ChainKind::open:
      out.sub[static_cast<std::size_t>(l - 1)] =
          b[static_cast<std::size_t>(l - 1)] + b[static_cast<std::size_t>(l)];
      out.diag[static_cast<std::size_t>(l)] =
          -2.0 * b[static_cast<std::size_t>(l)];
      break;
    case ChainKind::diagonal_dissipative:
      for (int n = 0; n < s; ++n) {
        out.diag[static_cast<std::size_t>(n)] = -gamma * (2.0 * n + 1.0);
      }
      break;
  }
  return out;
}

ModeClass classify(cdouble omega, double eps_perpetual) {
  if (std::abs(omega.imag()) <= eps_perpetual) return ModeClass::perpetual;
  return omega.imag() < 0 ? ModeClass::transient : ModeClass::growing;
}

double default_eps_perpetual(const std::vector<SpectralMode>& modes) {
  if (modes.empty()) return 0.0;
  std::vector<double> mags;
  mags.reserve(modes.size());
  for (const auto& m : modes) mags.push_back(std::abs(m.omega.imag()));
  std::sort(mags.begin(), mags.end());
  const std::size_t h = mags.size() / 2;
  const double median =
      mags.size() % 2 ? mags[h] : 0.5 * (mags[h - 1] + mags[h]);
  return 1e-2 * median;
}

std::vector<double> cumulative_mass(const Eigen::VectorXcd& phi) {
  std::vector<double> out(static_cast<std::size_t>(phi.size()));
  double acc = 0.0;
  for (Eigen::Index n = 0; n < phi.size(); ++n) {
    acc += std::norm(phi[n]);
    out[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

namespace {

// Parlett-Reinsch balancing with powers of two: returns d with
// A_in = D * A_out * D^{-1}, so eigenvectors map back as phi = D * v.
std::vector<double> balance_in_place(Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> d(static_cast<std::size_t>(n), 1.0);
  bool converged = false;
  while (!converged) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c >= r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if (c + r < 0.95 * s) {
        converged = false;
        d[static_cast<std::size_t>(i)] *= f;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return d;
}

// Solves (M - mu I) x = rhs for tridiagonal real M and complex mu via
// Gaussian elimination with partial pivoting (fill-in limited to a second
// superdiagonal). Used for one-step inverse-iteration polish.
bool tridiag_shifted_solve(const OpenLiouvillian& lv, cdouble mu,
                           Eigen::VectorXcd& x) {
  const int n = lv.size();
  Eigen::VectorXcd dl(std::max(n - 1, 0)), d(n), du(std::max(n - 1, 0)),
      du2(std::max(n - 2, 0));
  Eigen::VectorXcd rhs = x;
  for (int i = 0; i < n; ++i) {
    d[i] = lv.diag[static_cast<std::size_t>(i)] - mu;
    if (i + 1 < n) {
      dl[i] = lv.sub[static_cast<std::size_t>(i)];
      du[i] = lv.sup[static_cast<std::size_t>(i)];
    }
    if (i + 2 < n) du2[i] = 0.0;
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) return false;
      const cdouble fact = dl[i] / d[i];
      d[i + 1] -= fact * du[i];
      rhs[i + 1] -= fact * rhs[i];
    } else {
      const cdouble fact = d[i] / dl[i];
      d[i] = dl[i];
      const cdouble old_d1 = d[i + 1];
      d[i + 1] = du[i] - fact * old_d1;
      du[i] = old_d1;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= fact * rhs[i];
    }
  }
  if (d[n - 1] == 0.0) return false;
  for (int i = n - 1; i >= 0; --i) {
    cdouble acc = rhs[i];
    if (i + 1 < n) acc -= du[i] * x[i + 1];
    if (i + 2 < n) acc -= du2[i] * x[i + 2];
    x[i] = acc / d[i];
  }
  return x.allFinite();
}

void fix_phase_and_normalize(Eigen::VectorXcd& phi) {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const double a = std::norm(phi[i]);
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  const double mag = std::abs(phi[imax]);
  if (mag > 0) phi *= std::conj(phi[imax]) / mag;
  const double nrm = phi.norm();
  if (nrm > 0) phi /= nrm;
}

double mode_residual(const OpenLiouvillian& lv, cdouble omega,
                     const Eigen::VectorXcd& phi) {
  Eigen::VectorXcd mphi(phi.size());
  lv.apply_generator(phi.data(), mphi.data());
  // L phi = i * M phi
  return (cdouble(0, 1) * mphi - omega * phi).norm();
}

void finalize_mode(const OpenLiouvillian& lv, SpectralMode& mode,
                   bool polish) {
  fix_phase_and_normalize(mode.phi);
  mode.residual = mode_residual(lv, mode.omega, mode.phi);
  if (polish) {
    // one inverse-iteration sweep on the unbalanced matrix, kept only if it
    // helps; the generator eigenvalue is mu = -i*omega
    Eigen::VectorXcd refined = mode.phi;
    if (tridiag_shifted_solve(lv, cdouble(0, -1) * mode.omega, refined)) {
      const double nrm = refined.norm();
      if (nrm > 0 && refined.allFinite()) {
        refined /= nrm;
        fix_phase_and_normalize(refined);
        const double r = mode_residual(lv, mode.omega, refined);
        if (r < mode.residual) {
          mode.phi = std::move(refined);
          mode.residual = r;
        }
      }
    }
  }
  double mean = 0.0;
  for (Eigen::Index n = 0; n < mode.phi.size(); ++n) {
    mean += static_cast<double>(n) * std::norm(mode.phi[n]);
  }
  mode.mean_position = mean;
}

}  // namespace

std::vector<SpectralMode> spectrum(const OpenLiouvillian& lv,
                                   const SpectrumOptions& options) {
  const int s = lv.size();
  if (s > options.dense_ceiling) {
    throw std::invalid_argument(
        "refusing dense eigendecomposition: size " + std::to_string(s) +
        " exceeds the ceiling of " + std::to_string(options.dense_ceiling));
  }

  std::vector<SpectralMode> modes;
  modes.reserve(static_cast<std::size_t>(s));

  if (lv.kind == ChainKind::dirichlet) {
    // i * (real antisymmetric tridiagonal) is Hermitian; conjugation by
    // diag(i^n) maps it to minus the symmetric tridiagonal with the same
    // magnitudes, so the spectrum comes from the symmetric solver exactly.
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(s, s);
    for (int n = 0; n + 1 < s; ++n) {
      sym(n, n + 1) = lv.b[static_cast<std::size_t>(n)];
      sym(n + 1, n) = lv.b[static_cast<std::size_t>(n)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("symmetric eigensolver failed");
    }
    const cdouble minus_i(0, -1);
    for (int j = 0; j < s; ++j) {
      SpectralMode mode;
      mode.omega = -es.eigenvalues()[j];
      mode.phi = Eigen::VectorXcd(s);
      cdouble ph(1, 0);
      for (int n = 0; n < s; ++n) {
        mode.phi[n] = ph * es.eigenvectors()(n, j);
        ph *= minus_i;
      }
      finalize_mode(lv, mode, options.polish);
      modes.push_back(std::move(mode));
    }
  } else {
    Eigen::MatrixXd m = lv.generator();
    std::vector<double> d(static_cast<std::size_t>(s), 1.0);
    if (options.balance) d = balance_in_place(m);
    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) {
      const double cond_hint = lv.norm_bound();
      throw std::runtime_error(
          "general eigensolver failed to converge (||L|| ~ " +
          std::to_string(cond_hint) + ")");
    }
    for (int j = 0; j < s; ++j) {
      SpectralMode mode;
      const cdouble mu = es.eigenvalues()[j];
      mode.omega = cdouble(0, 1) * mu;
      mode.phi = es.eigenvectors().col(j);
      for (int n = 0; n < s; ++n) {
        mode.phi[n] *= d[static_cast<std::size_t>(n)];
      }
      finalize_mode(lv, mode, options.polish);
      modes.push_back(std::move(mode));
    }
  }

  const double eps = options.eps_perpetual > 0.0
                         ? options.eps_perpetual
                         : default_eps_perpetual(modes);
  for (auto& mode : modes) mode.cls = classify(mode.omega, eps);

  std::sort(modes.begin(), modes.end(),
            [](const SpectralMode& a, const SpectralMode& b) {
              if (a.omega.imag() != b.omega.imag()) {
                return a.omega.imag() > b.omega.imag();
              }
              return a.omega.real() < b.omega.real();
            });
  return modes;
}

ChainState delta_state(int size) {
  ChainState st;
  st.phi = Eigen::VectorXcd::Zero(size);
  st.phi[0] = 1.0;
  st.time = 0.0;
  return st;
}

namespace {

// Dormand-Prince 5(4) embedded pair.
struct Rk45Work {
  Eigen::VectorXcd k1, k2, k3, k4, k5, k6, ytmp, y5, y4;
  explicit Rk45Work(Eigen::Index n)
      : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), ytmp(n), y5(n), y4(n) {}
};

void rk45_step(const OpenLiouvillian& lv, const Eigen::VectorXcd& y, double h,
               Rk45Work& w) {
  auto f = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    lv.apply_generator(in.data(), out.data());
  };
  f(y, w.k1);
  w.ytmp = y + h * (1.0 / 5.0) * w.k1;
  f(w.ytmp, w.k2);
  w.ytmp = y + h * (3.0 / 40.0 * w.k1 + 9.0 / 40.0 * w.k2);
  f(w.ytmp, w.k3);
  w.ytmp = y + h * (44.0 / 45.0 * w.k1 - 56.0 / 15.0 * w.k2 + 32.0 / 9.0 * w.k3);
  f(w.ytmp, w.k4);
  w.ytmp = y + h * (19372.0 / 6561.0 * w.k1 - 25360.0 / 2187.0 * w.k2 +
                    64448.0 / 6561.0 * w.k3 - 212.0 / 729.0 * w.k4);
  f(w.ytmp, w.k5);
  w.ytmp = y + h * (9017.0 / 3168.0 * w.k1 - 355.0 / 33.0 * w.k2 +
                    46732.0 / 5247.0 * w.k3 + 49.0 / 176.0 * w.k4 -
                    5103.0 / 18656.0 * w.k5);
  f(w.ytmp, w.k6);
  w.y5 = y + h * (35.0 / 384.0 * w.k1 + 500.0 / 1113.0 * w.k3 +
                  125.0 / 192.0 * w.k4 - 2187.0 / 6784.0 * w.k5 +
                  11.0 / 84.0 * w.k6);
  // fourth-order solution for the error estimate (needs k7 = f(y5))
  f(w.y5, w.k2);  // reuse k2 as k7
  w.y4 = y + h * (5179.0 / 57600.0 * w.k1 + 7571.0 / 16695.0 * w.k3 +
                  393.0 / 640.0 * w.k4 - 92097.0 / 339200.0 * w.k5 +
                  187.0 / 2100.0 * w.k6 + 1.0 / 40.0 * w.k2);
}

}  // namespace

std::vector<ChainState> evolve(const OpenLiouvillian& lv,
                               const ChainState& phi0,
                               std::span<const double> times,
                               const EvolveOptions& options) {
  if (phi0.phi.size() != lv.size()) {
    throw std::invalid_argument("initial state length must equal l+1");
  }
  if (times.empty()) {
    throw std::invalid_argument("empty time grid");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < phi0.time || (i > 0 && times[i] < times[i - 1])) {
      throw std::invalid_argument("times must be ascending from the start time");
    }
  }

  std::vector<ChainState> out;
  out.reserve(times.size());

  Eigen::VectorXcd y = phi0.phi;
  double t = phi0.time;
  Rk45Work w(y.size());

  const double bmax = lv.norm_bound();
  double h = bmax > 0 ? 0.1 / bmax : 0.1;
  const double span =
      std::max(times.back() - phi0.time, 1e-300);
  const double h_min = span * 1e-15;

  for (double target : times) {
    while (t < target) {
      bool accepted = false;
      while (!accepted) {
        const bool clamped = h > target - t;
        const double step = clamped ? target - t : h;
        rk45_step(lv, y, step, w);
        // mixed error norm against rel_tol * |y| + abs_tol
        double err2 = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
          const double scale =
              options.abs_tol +
              options.rel_tol *
                  std::max(std::abs(y[i]), std::abs(w.y5[i]));
          const double e = std::abs(w.y5[i] - w.y4[i]) / scale;
          err2 += e * e;
        }
        const double err = std::sqrt(err2 / static_cast<double>(y.size()));
        if (err <= 1.0 || step <= h_min) {
          if (step <= h_min && err > 1.0) {
            throw std::runtime_error(
                "integrator cannot meet the requested tolerance");
          }
          y = w.y5;
          t += step;
          accepted = true;
        }
        const double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        const double proposed =
            std::max(std::min(step * std::clamp(grow, 0.2, 5.0), span), h_min);
        // a step clamped onto an output time must not shrink the working h
        h = (accepted && clamped) ? std::max(h, proposed) : proposed;
      }
    }
    out.push_back({y, target});
  }
  return out;
}

std::vector<ChainState> evolve_expm(const OpenLiouvillian& lv,
                                    const ChainState& phi0,
                                    std::span<const double> times) {
  if (lv.size() > 513) {
    throw std::invalid_argument(
        "dense exponential path is limited to l <= 512");
  }
  if (phi0.phi.size() != lv.size()) {
    throw std::invalid_argument("initial state length must equal l+1");
  }
  const Eigen::MatrixXd m = lv.generator();
  std::vector<ChainState> out;
  out.reserve(times.size());
  Eigen::VectorXcd y = phi0.phi;
  double t = phi0.time;
  Eigen::MatrixXd cached_e;
  double cached_dt = -1.0;
  for (double target : times) {
    const double dt = target - t;
    if (dt < 0) throw std::invalid_argument("times must be ascending");
    if (dt > 0) {
      if (dt != cached_dt) {
        cached_e = (m * dt).exp();
        cached_dt = dt;
      }
      y = cached_e * y;
      t = target;
    }
    out.push_back({y, target});
  }
  return out;
}

std::vector<double> autocorrelation(const std::vector<ChainState>& states,
                                    int m) {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& st : states) {
    if (m < 0 || m >= st.phi.size()) {
      throw std::invalid_argument("Krylov index out of range");
    }
    out.push_back(st.phi[m].real());
  }
  return out;
}

}  // namespace kchain
