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

#include <optional>
#include <stdexcept>
#include <string>

#include "kchain/open_chain.hpp"
#include "kchain/operator_map.hpp"

namespace kchain::cli {

/// Raised for malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind {
  xxz,
  chaotic,
  ideal_linear,
  ideal_sqrt,
  dissipative_toy,
};

/// Flat key-value run configuration. Times are in units of the inverse
/// coupling (the Hamiltonian terms carry O(1) coefficients).
struct RunConfig {
  ModelKind model = ModelKind::xxz;
  double delta = -0.5;    // xxz anisotropy
  double field_h = 2.0;   // xxz longitudinal field
  double alpha = 1.0;     // ideal_linear growth rate
  double gamma = 0.5;     // dissipative_toy rate
  int n_sites = 0;        // 0 = smallest ring satisfying the depth bound
  std::string seed = "Q3";
  int depth = 20;         // truncation site l

  TruncationPolicy policy;        // coeff_threshold / max_strings / max_weight
  bool translation_reduced = true;
  bool reorthogonalize = true;
  bool keep_basis = false;
  ChainKind boundary = ChainKind::open;

  double time_max_invJ = 10.0;
  double time_step_invJ = 0.0;  // 0 = auto: 0.05 / b_max
  double eps_perpetual = 0.0;   // 0 = auto
  int dense_ceiling = 4096;
  int rounds = 3;
  double tol = 1e-6;  // validate-ideal tolerance

  bool emit_eigenvectors = false;
  bool compare_dirichlet = false;
  bool export_basis = false;

  // resolved from the command line
  std::string out_dir = ".";
  std::string seed_label;  // defaults to the seed name
  int threads = 1;

  /// Canonical text used for hashing; key order is fixed.
  std::string canonical_text() const;
  /// FNV-1a hash of canonical_text(), in hex.
  std::string hash() const;

  bool is_ideal() const {
    return model == ModelKind::ideal_linear || model == ModelKind::ideal_sqrt ||
           model == ModelKind::dissipative_toy;
  }
};

/// Parses `key = value` lines ('#' comments allowed). Unknown keys and
/// malformed values raise ConfigError naming the offending field.
RunConfig load_config(const std::string& path);

const char* to_string(ModelKind m);

}  // namespace kchain::cli
