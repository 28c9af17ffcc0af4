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

#include "run_config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace kchain::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("field '" + key + "': expected a number, got '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("field '" + key + "': expected an integer, got '" + v +
                      "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("field '" + key + "': expected a boolean, got '" + v + "'");
}

}  // namespace

const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::xxz: return "xxz";
    case ModelKind::chaotic: return "chaotic";
    case ModelKind::ideal_linear: return "ideal_linear";
    case ModelKind::ideal_sqrt: return "ideal_sqrt";
    case ModelKind::dissipative_toy: return "dissipative_toy";
  }
  return "?";
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) throw ConfigError("field '" + key + "': empty value");

    if (key == "model") {
      if (val == "xxz") cfg.model = ModelKind::xxz;
      else if (val == "chaotic") cfg.model = ModelKind::chaotic;
      else if (val == "ideal_linear") cfg.model = ModelKind::ideal_linear;
      else if (val == "ideal_sqrt") cfg.model = ModelKind::ideal_sqrt;
      else if (val == "dissipative_toy") cfg.model = ModelKind::dissipative_toy;
      else throw ConfigError("field 'model': unknown model '" + val + "'");
    } else if (key == "delta") {
      cfg.delta = parse_double(key, val);
    } else if (key == "field_h") {
      cfg.field_h = parse_double(key, val);
    } else if (key == "alpha") {
      cfg.alpha = parse_double(key, val);
    } else if (key == "gamma") {
      cfg.gamma = parse_double(key, val);
    } else if (key == "n_sites") {
      cfg.n_sites = static_cast<int>(parse_int(key, val));
    } else if (key == "seed") {
      cfg.seed = val;
    } else if (key == "depth") {
      cfg.depth = static_cast<int>(parse_int(key, val));
    } else if (key == "coeff_threshold") {
      cfg.policy.coeff_threshold = parse_double(key, val);
    } else if (key == "max_strings") {
      const long long v = parse_int(key, val);
      if (v > 0) cfg.policy.max_strings = static_cast<std::size_t>(v);
    } else if (key == "max_weight") {
      const long long v = parse_int(key, val);
      if (v > 0) cfg.policy.max_weight = static_cast<int>(v);
    } else if (key == "translation_reduced") {
      cfg.translation_reduced = parse_bool(key, val);
    } else if (key == "reorthogonalize") {
      cfg.reorthogonalize = parse_bool(key, val);
    } else if (key == "keep_basis") {
      cfg.keep_basis = parse_bool(key, val);
    } else if (key == "boundary") {
      if (val == "open") cfg.boundary = ChainKind::open;
      else if (val == "dirichlet") cfg.boundary = ChainKind::dirichlet;
      else if (val == "diagonal_dissipative")
        cfg.boundary = ChainKind::diagonal_dissipative;
      else throw ConfigError("field 'boundary': unknown kind '" + val + "'");
    } else if (key == "time_max_invJ") {
      cfg.time_max_invJ = parse_double(key, val);
    } else if (key == "time_step_invJ") {
      cfg.time_step_invJ = parse_double(key, val);
    } else if (key == "eps_perpetual") {
      cfg.eps_perpetual = parse_double(key, val);
    } else if (key == "dense_ceiling") {
      cfg.dense_ceiling = static_cast<int>(parse_int(key, val));
    } else if (key == "rounds") {
      cfg.rounds = static_cast<int>(parse_int(key, val));
    } else if (key == "tol") {
      cfg.tol = parse_double(key, val);
    } else if (key == "emit_eigenvectors") {
      cfg.emit_eigenvectors = parse_bool(key, val);
    } else if (key == "compare_dirichlet") {
      cfg.compare_dirichlet = parse_bool(key, val);
    } else if (key == "export_basis") {
      cfg.export_basis = parse_bool(key, val);
    } else {
      throw ConfigError("unknown field '" + key + "'");
    }
  }

  // cross-field validation, naming the offending field
  if (cfg.depth < 1) throw ConfigError("field 'depth': must be >= 1");
  if (cfg.n_sites < 0 || cfg.n_sites > kMaxSites) {
    throw ConfigError("field 'n_sites': must be in [0, " +
                      std::to_string(kMaxSites) + "]");
  }
  if (cfg.policy.coeff_threshold < 0) {
    throw ConfigError("field 'coeff_threshold': must be >= 0");
  }
  if (cfg.time_max_invJ <= 0) {
    throw ConfigError("field 'time_max_invJ': must be > 0");
  }
  if (cfg.time_step_invJ < 0) {
    throw ConfigError("field 'time_step_invJ': must be >= 0");
  }
  if (cfg.model == ModelKind::dissipative_toy &&
      (cfg.gamma < 0 || cfg.gamma >= 1)) {
    throw ConfigError("field 'gamma': must lie in [0, 1)");
  }
  if (cfg.rounds < 1) throw ConfigError("field 'rounds': must be >= 1");
  if (cfg.dense_ceiling < 1) {
    throw ConfigError("field 'dense_ceiling': must be >= 1");
  }
  if (!cfg.is_ideal() && cfg.seed != "Q1" && cfg.seed != "Q3" &&
      cfg.seed != "Q5" && cfg.seed != "chaotic_O0") {
    throw ConfigError("field 'seed': unknown seed '" + cfg.seed + "'");
  }
  return cfg;
}

std::string RunConfig::canonical_text() const {
  std::ostringstream o;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  o << "model=" << to_string(model) << "\n";
  o << "delta=" << num(delta) << "\n";
  o << "field_h=" << num(field_h) << "\n";
  o << "alpha=" << num(alpha) << "\n";
  o << "gamma=" << num(gamma) << "\n";
  o << "n_sites=" << n_sites << "\n";
  o << "seed=" << seed << "\n";
  o << "depth=" << depth << "\n";
  o << "coeff_threshold=" << num(policy.coeff_threshold) << "\n";
  o << "max_strings=" << (policy.max_strings ? *policy.max_strings : 0) << "\n";
  o << "max_weight=" << (policy.max_weight ? *policy.max_weight : 0) << "\n";
  o << "translation_reduced=" << translation_reduced << "\n";
  o << "reorthogonalize=" << reorthogonalize << "\n";
  o << "keep_basis=" << keep_basis << "\n";
  o << "boundary=" << kchain::to_string(boundary) << "\n";
  o << "time_max_invJ=" << num(time_max_invJ) << "\n";
  o << "time_step_invJ=" << num(time_step_invJ) << "\n";
  o << "eps_perpetual=" << num(eps_perpetual) << "\n";
  o << "dense_ceiling=" << dense_ceiling << "\n";
  o << "rounds=" << rounds << "\n";
  o << "tol=" << num(tol) << "\n";
  o << "emit_eigenvectors=" << emit_eigenvectors << "\n";
  o << "compare_dirichlet=" << compare_dirichlet << "\n";
  o << "export_basis=" << export_basis << "\n";
  o << "seed_label=" << seed_label << "\n";
  return o.str();
}

std::string RunConfig::hash() const {
  const std::string text = canonical_text();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kchain::cli
