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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kchain/ideal.hpp"
#include "kchain/lanczos.hpp"
#include "kchain/models.hpp"
#include "kchain/open_chain.hpp"
#include "kchain/quench.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kchain;
using cli::ConfigError;
using cli::ModelKind;
using cli::RunConfig;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPrecondition = 4;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_finite(double v, const std::string& where) {
  if (!std::isfinite(v)) {
    throw std::runtime_error("non-finite value in " + where);
  }
}

struct OutputWriter {
  fs::path dir;
  std::string config_hash;

  std::ofstream open(const std::string& name) const {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  }
};

// ---------------------------------------------------------------------------
// model/seed assembly
// ---------------------------------------------------------------------------

int resolved_sites(const RunConfig& cfg) {
  if (cfg.n_sites > 0) return cfg.n_sites;
  const int need = 2 * cfg.depth + seed_span(cfg.seed) + 2;
  if (need > kMaxSites) {
    throw ConfigError("field 'depth': auto-sized ring needs " +
                      std::to_string(need) + " sites, above the limit of " +
                      std::to_string(kMaxSites));
  }
  return need;
}

OperatorMap build_model(const RunConfig& cfg, int n_sites) {
  switch (cfg.model) {
    case ModelKind::xxz:
      return build_xxz(cfg.delta, cfg.field_h, n_sites,
                       cfg.translation_reduced);
    case ModelKind::chaotic:
      return build_chaotic(n_sites, cfg.translation_reduced);
    default:
      throw ConfigError(
          "field 'model': this command needs a string model (xxz or chaotic)");
  }
}

KrylovChain run_chain(const RunConfig& cfg, bool need_basis) {
  const int n = resolved_sites(cfg);
  const OperatorMap h = build_model(cfg, n);
  const OperatorMap seed = build_seed(cfg.seed, n, cfg.translation_reduced);
  LanczosOptions opt;
  opt.depth = cfg.depth;
  opt.policy = cfg.policy;
  opt.keep_basis = cfg.keep_basis || need_basis;
  opt.reorthogonalize = cfg.reorthogonalize;
  opt.seed_label = cfg.seed_label;
  return run_lanczos(h, seed, RingGeometry{n, cfg.translation_reduced}, opt);
}

// Ideal-case coefficient lists (depth+1 values so every boundary kind fits).
std::vector<double> ideal_coefficients(const RunConfig& cfg) {
  switch (cfg.model) {
    case ModelKind::ideal_linear:
      return linear_coefficients(cfg.depth + 1, cfg.alpha);
    case ModelKind::ideal_sqrt:
      return sqrt_coefficients(cfg.depth + 1);
    case ModelKind::dissipative_toy:
      return dissipative_toy_coefficients(cfg.depth + 1, cfg.gamma);
    default:
      throw ConfigError("field 'model': expected an ideal model");
  }
}

std::vector<double> time_grid(const RunConfig& cfg, double b_max) {
  double step = cfg.time_step_invJ;
  if (step == 0.0) step = b_max > 0 ? 0.05 / b_max : 0.05;
  std::vector<double> times;
  for (int k = 0;; ++k) {
    const double t = k * step;
    if (t > cfg.time_max_invJ * (1.0 + 1e-12)) break;
    times.push_back(t);
  }
  if (times.empty()) throw ConfigError("field 'time_max_invJ': empty grid");
  return times;
}

json meta_base(const RunConfig& cfg, const std::string& command) {
  json meta;
  meta["command"] = command;
  meta["config_hash"] = cfg.hash();
  meta["config"] = json::parse("{}");
  std::istringstream canon(cfg.canonical_text());
  std::string line;
  while (std::getline(canon, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      meta["config"][line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  if (cfg.seed == "Q5") {
    meta["note_q5"] =
        "Q5 is the five-site raising-string extension of Q3 (an "
        "interpretation; no closed form is pinned elsewhere)";
  }
  meta["amplitude_grading"] =
      "emitted amplitudes are the real chain coefficients; the physical "
      "correlator carries an extra i^m per Krylov index m";
  return meta;
}

void write_meta(const OutputWriter& out, const json& meta) {
  auto f = out.open("meta.json");
  f << meta.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_lanczos(const RunConfig& cfg, const OutputWriter& out) {
  if (cfg.is_ideal()) {
    throw ConfigError(
        "field 'model': lanczos needs a string model; ideal chains have "
        "closed-form coefficients");
  }
  KrylovChain chain = run_chain(cfg, /*need_basis=*/cfg.export_basis);
  for (double b : chain.b) require_finite(b, "lanczos coefficients");

  auto f = out.open("chain.csv");
  f << "# config=" << out.config_hash << "\n";
  write_chain_csv(f, chain, cli::to_string(cfg.model));

  if (cfg.export_basis && !chain.basis.empty()) {
    fs::create_directories(out.dir / "basis");
    for (std::size_t n = 0; n < chain.basis.size(); ++n) {
      std::ofstream bf(out.dir / "basis" / ("op_" + std::to_string(n) + ".txt"));
      chain.basis[n].serialize(bf, chain.grades[n]);
    }
  }

  json meta = meta_base(cfg, "lanczos");
  meta["n_sites"] = chain.geometry.n_sites;
  meta["closed"] = chain.closed;
  meta["closed_at"] = chain.closed_at;
  meta["coefficients"] = chain.b.size();
  write_meta(out, meta);
  return 0;
}

struct SpectrumArtifacts {
  std::vector<double> b;
  OpenLiouvillian lv;
  std::vector<SpectralMode> modes;
  KrylovChain chain;  // empty for ideal models
  bool from_chain = false;
};

SpectrumArtifacts make_spectrum(const RunConfig& cfg, bool need_basis) {
  SpectrumArtifacts art;
  if (cfg.is_ideal()) {
    art.b = ideal_coefficients(cfg);
  } else {
    art.chain = run_chain(cfg, need_basis);
    art.b = art.chain.b;
    art.from_chain = true;
    if (art.chain.closed) {
      art.b.push_back(0.0);  // closed chains end on an exact cut
    }
  }
  const int l = static_cast<int>(art.b.size()) - 1;
  const double gamma =
      cfg.model == ModelKind::dissipative_toy ? cfg.gamma : 0.0;
  const ChainKind kind = cfg.model == ModelKind::dissipative_toy
                             ? ChainKind::diagonal_dissipative
                             : cfg.boundary;
  art.lv = build_liouvillian(art.b, l, kind, gamma);
  SpectrumOptions sopt;
  sopt.dense_ceiling = cfg.dense_ceiling;
  sopt.eps_perpetual = cfg.eps_perpetual;
  art.modes = spectrum(art.lv, sopt);
  return art;
}

int cmd_spectrum(const RunConfig& cfg, const OutputWriter& out) {
  SpectrumArtifacts art = make_spectrum(cfg, false);

  auto f = out.open("modes.csv");
  f << "# config=" << out.config_hash << "\n";
  f << "re_omega,im_omega,class,mean_position,residual\n";
  for (const auto& m : art.modes) {
    require_finite(m.omega.real(), "spectrum");
    require_finite(m.omega.imag(), "spectrum");
    f << fmt(m.omega.real()) << "," << fmt(m.omega.imag()) << ","
      << to_string(m.cls) << "," << fmt(m.mean_position) << ","
      << fmt(m.residual) << "\n";
  }

  if (cfg.emit_eigenvectors) {
    auto ev = out.open("eigenvectors.csv");
    ev << "# config=" << out.config_hash << "\n";
    ev << "mode,n,re_phi,im_phi\n";
    for (std::size_t j = 0; j < art.modes.size(); ++j) {
      const auto& phi = art.modes[j].phi;
      for (Eigen::Index n = 0; n < phi.size(); ++n) {
        ev << j << "," << n << "," << fmt(phi[n].real()) << ","
           << fmt(phi[n].imag()) << "\n";
      }
    }
  }

  json meta = meta_base(cfg, "spectrum");
  meta["modes"] = art.modes.size();
  meta["boundary"] = to_string(art.lv.kind);
  if (art.from_chain) meta["chain_closed"] = art.chain.closed;
  write_meta(out, meta);
  return 0;
}

int cmd_evolve(const RunConfig& cfg, const OutputWriter& out) {
  SpectrumArtifacts art;
  if (cfg.is_ideal()) {
    art.b = ideal_coefficients(cfg);
  } else {
    art.chain = run_chain(cfg, false);
    art.b = art.chain.b;
    if (art.chain.closed) art.b.push_back(0.0);
  }
  const int l = static_cast<int>(art.b.size()) - 1;
  const double gamma =
      cfg.model == ModelKind::dissipative_toy ? cfg.gamma : 0.0;
  const ChainKind kind = cfg.model == ModelKind::dissipative_toy
                             ? ChainKind::diagonal_dissipative
                             : cfg.boundary;
  const OpenLiouvillian lv = build_liouvillian(art.b, l, kind, gamma);

  const double b_max = *std::max_element(art.b.begin(), art.b.end());
  const auto times = time_grid(cfg, b_max);
  const auto states = evolve(lv, delta_state(lv.size()), times);

  auto f = out.open("trajectory.csv");
  f << "# config=" << out.config_hash << "\n";
  f << "t,m,amplitude\n";
  for (const auto& st : states) {
    for (Eigen::Index m = 0; m < st.phi.size(); ++m) {
      const double a = st.phi[m].real();
      require_finite(a, "trajectory");
      f << fmt(st.time) << "," << m << "," << fmt(a) << "\n";
    }
  }

  json meta = meta_base(cfg, "evolve");
  meta["boundary"] = to_string(lv.kind);
  meta["time_points"] = times.size();
  meta["chain_length"] = lv.size();
  write_meta(out, meta);
  return 0;
}

int cmd_quench(const RunConfig& cfg, const OutputWriter& out) {
  if (cfg.is_ideal()) {
    throw ConfigError(
        "field 'model': quench needs a string model with a Krylov basis");
  }
  SpectrumArtifacts art;
  art.chain = run_chain(cfg, /*need_basis=*/true);
  art.b = art.chain.b;
  if (art.chain.closed) art.b.push_back(0.0);
  const int l = static_cast<int>(art.b.size()) - 1;
  const OpenLiouvillian lv = build_liouvillian(art.b, l, cfg.boundary);

  const double b_max = *std::max_element(art.b.begin(), art.b.end());
  const auto times = time_grid(cfg, b_max);
  const QuenchResult qr = quench_trajectory(art.chain, lv, times);

  auto f = out.open("quench.csv");
  f << "# config=" << out.config_hash << "\n";
  f << "t,expectation\n";
  for (std::size_t i = 0; i < qr.times.size(); ++i) {
    require_finite(qr.expectation[i], "quench expectation");
    f << fmt(qr.times[i]) << "," << fmt(qr.expectation[i]) << "\n";
  }

  if (cfg.compare_dirichlet) {
    const OpenLiouvillian lvd = build_liouvillian(art.b, l, ChainKind::dirichlet);
    const QuenchResult qd = quench_trajectory(art.chain, lvd, times);
    auto fd = out.open("quench_dirichlet.csv");
    fd << "# config=" << out.config_hash << "\n";
    fd << "t,expectation\n";
    for (std::size_t i = 0; i < qd.times.size(); ++i) {
      fd << fmt(qd.times[i]) << "," << fmt(qd.expectation[i]) << "\n";
    }
  }

  json meta = meta_base(cfg, "quench");
  meta["seed_weight_t0"] = qr.expectation.empty() ? 0.0 : qr.expectation[0];
  meta["per_site"] = cfg.translation_reduced;
  write_meta(out, meta);
  return 0;
}

int cmd_validate_ideal(const RunConfig& cfg, const OutputWriter& out) {
  json report;
  bool pass = true;
  switch (cfg.model) {
    case ModelKind::ideal_linear: {
      report = verify_linear_chain_structure(cfg.depth, cfg.alpha, cfg.tol);
      pass = report["pass"].get<bool>();
      break;
    }
    case ModelKind::ideal_sqrt: {
      // Eigen-equation residuals of the Hermite-recurrence eigenvectors on
      // the interior rows of the b_n = sqrt(n) open chain.
      const auto b = sqrt_coefficients(cfg.depth + 1);
      const auto lv = build_liouvillian(b, cfg.depth, ChainKind::open);
      const auto modes = spectrum(lv);
      double worst = 0.0;
      for (const auto& m : modes) {
        // phi_n = i^n H_n(omega)/sqrt(n!) with running normalization
        std::vector<std::complex<double>> phi(lv.size());
        std::complex<double> hm1(1, 0), h = m.omega, ipow(0, 1);
        phi[0] = 1.0;
        double scale = 1.0;
        for (int n = 1; n < lv.size(); ++n) {
          // h holds H_n, hm1 holds H_{n-1}
          phi[n] = ipow * h / scale;
          const std::complex<double> next =
              m.omega * h - static_cast<double>(n) * hm1;
          hm1 = h;
          h = next;
          ipow *= std::complex<double>(0, 1);
          scale *= std::sqrt(static_cast<double>(n + 1));
          const double mag = std::abs(phi[n]);
          if (mag > 1e120) {
            for (auto& v : phi) v /= mag;
            hm1 /= mag;
            h /= mag;
          }
        }
        double peak = 0.0;
        for (const auto& v : phi) peak = std::max(peak, std::abs(v));
        // interior rows 1..l-1 of L phi = omega phi
        const std::complex<double> iu(0, 1);
        for (int n = 1; n + 1 < lv.size(); ++n) {
          const std::complex<double> res =
              iu * (b[n - 1] * phi[n - 1] - b[n] * phi[n + 1]) -
              m.omega * phi[n];
          worst = std::max(worst, std::abs(res) / peak);
        }
      }
      report["l"] = cfg.depth;
      report["checks"] = json::array(
          {{{"assertion", "hermite_eigenvector_interior_rows"},
            {"deviation", worst},
            {"tolerance", cfg.tol},
            {"pass", worst <= cfg.tol}}});
      pass = worst <= cfg.tol;
      report["pass"] = pass;
      break;
    }
    case ModelKind::dissipative_toy: {
      const auto b = dissipative_toy_coefficients(cfg.depth, cfg.gamma);
      const auto lv = build_liouvillian(b, cfg.depth,
                                        ChainKind::diagonal_dissipative,
                                        cfg.gamma);
      const auto modes = spectrum(lv);
      json checks = json::array();
      for (int k = 0; k < 10 && k < lv.size(); ++k) {
        const std::complex<double> target(0, -(2.0 * k + 1.0));
        double best = 1e300;
        for (const auto& m : modes) {
          best = std::min(best, std::abs(m.omega - target));
        }
        checks.push_back({{"assertion",
                           "eigenvalue_-" + std::to_string(2 * k + 1) + "i"},
                          {"deviation", best},
                          {"tolerance", cfg.tol},
                          {"pass", best <= cfg.tol}});
        if (best > cfg.tol) pass = false;
      }
      report["l"] = cfg.depth;
      report["gamma"] = cfg.gamma;
      report["checks"] = checks;
      report["pass"] = pass;
      break;
    }
    default:
      throw ConfigError(
          "field 'model': validate-ideal needs ideal_linear, ideal_sqrt or "
          "dissipative_toy");
  }

  report["config_hash"] = out.config_hash;
  auto f = out.open("report.json");
  f << report.dump(2) << "\n";
  std::cout << report.dump(2) << "\n";
  return pass ? 0 : kExitNumerical;
}

int cmd_refine(const RunConfig& cfg, const OutputWriter& out) {
  if (cfg.is_ideal()) {
    throw ConfigError("field 'model': refine needs a string model");
  }
  // Each round widens the seed support by up to one chain depth; auto-sizing
  // covers the growth. A ring above the site limit fails as a precondition
  // when a later round actually violates the wrap bound.
  int sites = cfg.n_sites;
  if (sites == 0) {
    const int needed =
        2 * cfg.depth + seed_span(cfg.seed) + (cfg.rounds - 1) * cfg.depth + 2;
    sites = std::min(needed, kMaxSites);
  }
  const OperatorMap h = build_model(cfg, sites);
  const OperatorMap seed = build_seed(cfg.seed, sites, cfg.translation_reduced);

  RefineResult rr = iterative_refine(
      h, seed, cfg.rounds, cfg.depth, cfg.policy,
      RingGeometry{sites, cfg.translation_reduced}, cfg.eps_perpetual);

  auto f = out.open("omega_trace.csv");
  f << "# config=" << out.config_hash << "\n";
  f << "round,re_omega,im_omega,operator_residual\n";
  for (std::size_t r = 0; r < rr.omega_trace.size(); ++r) {
    require_finite(rr.omega_trace[r].real(), "omega trace");
    f << (r + 1) << "," << fmt(rr.omega_trace[r].real()) << ","
      << fmt(rr.omega_trace[r].imag()) << ","
      << fmt(rr.residual_trace[r]) << "\n";
  }
  {
    auto sf = out.open("refined_seed.txt");
    rr.seed.serialize(sf, 0);
  }

  json meta = meta_base(cfg, "refine");
  meta["rounds_completed"] = rr.omega_trace.size();
  meta["stopped_early"] = rr.stopped_early;
  if (rr.stopped_early) meta["stop_reason"] = rr.stop_reason;
  write_meta(out, meta);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "kchain: Krylov-chain operator dynamics with an open boundary "
      "condition"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  std::string seed_label;
  int threads = 1;
  app.add_option("--config", config_path, "run configuration file")
      ->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker thread cap");
  app.add_option("--seed-label", seed_label, "label for the seed in outputs");

  auto* sub_lanczos =
      app.add_subcommand("lanczos", "run the operator Lanczos recursion");
  auto* sub_spectrum =
      app.add_subcommand("spectrum", "eigenmodes of the truncated chain");
  auto* sub_evolve =
      app.add_subcommand("evolve", "chain-state evolution amplitudes");
  auto* sub_quench =
      app.add_subcommand("quench", "plus-state quench expectation series");
  auto* sub_validate =
      app.add_subcommand("validate-ideal", "closed-form chain validators");
  auto* sub_refine =
      app.add_subcommand("refine", "iterative dynamical-symmetry refinement");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    nlohmann::json err{{"error", e.what()}, {"exit_code", kExitConfig}};
    std::cerr << err.dump() << "\n";
    return kExitConfig;
  }

  try {
    RunConfig cfg = cli::load_config(config_path);
    cfg.out_dir = out_dir;
    cfg.threads = std::max(1, threads);
    cfg.seed_label = seed_label.empty() ? cfg.seed : seed_label;

    fs::create_directories(out_dir);
    OutputWriter out{fs::path(out_dir), cfg.hash()};

    if (sub_lanczos->parsed()) return cmd_lanczos(cfg, out);
    if (sub_spectrum->parsed()) return cmd_spectrum(cfg, out);
    if (sub_evolve->parsed()) return cmd_evolve(cfg, out);
    if (sub_quench->parsed()) return cmd_quench(cfg, out);
    if (sub_validate->parsed()) return cmd_validate_ideal(cfg, out);
    if (sub_refine->parsed()) return cmd_refine(cfg, out);
    return kExitConfig;
  } catch (const ConfigError& e) {
    nlohmann::json err{{"error", e.what()}, {"exit_code", kExitConfig}};
    std::cerr << err.dump() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    nlohmann::json err{{"error", e.what()}, {"exit_code", kExitPrecondition}};
    std::cerr << err.dump() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", e.what()}, {"exit_code", kExitNumerical}};
    std::cerr << err.dump() << "\n";
    return kExitNumerical;
  }
}
