#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "disclose/families.hpp"
#include "disclose/model.hpp"

namespace disclose {

// Parsed form of the run-configuration grammar (see README): sections in
// brackets, `key = value...` lines, `#` comments. Values keep their token
// lists; typed accessors convert on demand.
struct ConfigFile {
  std::map<std::string, std::map<std::string, std::vector<std::string>>> sections;
  std::string raw;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile parse_config_path(const std::string& path);

struct RunConfig {
  // [model]
  std::string family;  // crra | quadratic_cs | separable | linear_case
  CrraParams crra;
  double cs_b = 0;
  double sep_delta = 0.5;
  CurveSpec sep_phi, sep_xi;
  std::vector<double> v_poly;

  // [domains]
  std::optional<Interval> state_domain;
  std::optional<Interval> action_domain;

  // [grid]
  int grid_states = 101;
  int grid_actions = 201;

  // [prior]
  std::vector<double> prior_states;
  std::vector<double> prior_probs;

  // [checks]
  std::vector<std::string> checks;

  // [oracle]
  int pi_grid = 19;
  int resolution2 = 201;
  int resolution3 = 60;

  // [output]
  std::string out_dir = "out";
  std::set<std::string> formats = {"csv", "json-lines", "svg"};

  std::uint64_t config_hash = 0;  // FNV-1a of the raw file bytes
};

// Parses, type-checks, and validates every field against the module
// preconditions (the model is built once to run family validation). Throws
// ConfigError on malformed input; family errors propagate.
RunConfig load_run_config(const std::string& path);

StateActionModel build_model(const RunConfig& cfg);
Posterior build_prior(const RunConfig& cfg);

}  // namespace disclose
