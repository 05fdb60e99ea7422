#include "disclose/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "disclose/report.hpp"

namespace disclose {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

double to_double(const std::string& section, const std::string& key, const std::string& tok) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": '" + tok + "' is not a number");
  }
  if (used != tok.size())
    throw ConfigError("[" + section + "] " + key + ": '" + tok + "' is not a number");
  return v;
}

int to_int(const std::string& section, const std::string& key, const std::string& tok) {
  const double v = to_double(section, key, tok);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("[" + section + "] " + key + ": '" + tok + "' is not an integer");
  return i;
}

// pulls one key's tokens out of the section map, enforcing arity
class SectionReader {
 public:
  SectionReader(const ConfigFile& f, std::string name) : name_(std::move(name)) {
    const auto it = f.sections.find(name_);
    if (it != f.sections.end()) kv_ = it->second;
  }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::vector<std::string> take(const std::string& key, std::size_t min_arity,
                                std::size_t max_arity) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("[" + name_ + "] missing key '" + key + "'");
    std::vector<std::string> v = it->second;
    kv_.erase(it);
    if (v.size() < min_arity || v.size() > max_arity)
      throw ConfigError("[" + name_ + "] " + key + ": wrong number of values");
    return v;
  }

  double take_double(const std::string& key) { return to_double(name_, key, take(key, 1, 1)[0]); }
  int take_int(const std::string& key) { return to_int(name_, key, take(key, 1, 1)[0]); }

  std::vector<double> take_doubles(const std::string& key) {
    std::vector<double> out;
    for (const std::string& t : take(key, 1, 10000)) out.push_back(to_double(name_, key, t));
    return out;
  }

  void done() const {
    if (!kv_.empty())
      throw ConfigError("[" + name_ + "] unknown key '" + kv_.begin()->first + "'");
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::map<std::string, std::vector<std::string>> kv_;
};

CurveSpec parse_curve(SectionReader& r, const std::string& key, bool allow_zero) {
  const std::vector<std::string> toks = r.take(key, 1, 3);
  const std::string& kind = toks[0];
  if (kind == "zero") {
    if (!allow_zero) throw ConfigError("[" + r.name() + "] " + key + " must not be zero");
    if (toks.size() != 1) throw ConfigError("[" + r.name() + "] " + key + ": zero takes no values");
    return CurveSpec::zero();
  }
  if (kind == "power") {
    if (toks.size() != 3)
      throw ConfigError("[" + r.name() + "] " + key + ": power needs scale and exponent");
    return CurveSpec::power(to_double(r.name(), key, toks[1]), to_double(r.name(), key, toks[2]));
  }
  if (kind == "log") {
    if (toks.size() != 2) throw ConfigError("[" + r.name() + "] " + key + ": log needs a scale");
    return CurveSpec::log_curve(to_double(r.name(), key, toks[1]));
  }
  throw ConfigError("[" + r.name() + "] " + key + ": unknown curve '" + kind + "'");
}

const std::set<std::string> kKnownSections = {"model",  "domains", "grid",
                                              "prior",  "checks",  "oracle",
                                              "output"};
const std::set<std::string> kKnownChecks = {"weak",        "derivable",      "derivative",
                                            "suboptimality", "linear_case",  "linear_receiver",
                                            "separable",   "multiplicative"};

}  // namespace

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile f;
  f.raw = text;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      f.sections[section];  // a section may legitimately stay empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::vector<std::string> vals = split_tokens(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (vals.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' has no value");
    if (!f.sections[section].emplace(key, vals).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return f;
}

ConfigFile parse_config_path(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig load_run_config(const std::string& path) {
  const ConfigFile f = parse_config_path(path);
  for (const auto& [name, kv] : f.sections)
    if (!kKnownSections.count(name)) throw ConfigError("unknown section [" + name + "]");

  RunConfig cfg;
  cfg.config_hash = fnv1a64(f.raw);

  SectionReader model(f, "model");
  cfg.family = model.take("family", 1, 1)[0];
  if (cfg.family == "crra") {
    if (model.has("gamma")) cfg.crra.gamma = model.take_double("gamma");
    if (model.has("rho")) cfg.crra.rho = model.take_double("rho");
    if (model.has("delta")) cfg.crra.delta = model.take_double("delta");
    if (model.has("kappa")) cfg.crra.kappa = model.take_double("kappa");
  } else if (cfg.family == "quadratic_cs") {
    if (model.has("b")) cfg.cs_b = model.take_double("b");
  } else if (cfg.family == "separable") {
    if (model.has("delta")) cfg.sep_delta = model.take_double("delta");
    cfg.sep_phi = parse_curve(model, "phi", false);
    if (model.has("xi")) cfg.sep_xi = parse_curve(model, "xi", true);
  } else if (cfg.family == "linear_case") {
    cfg.v_poly = model.take_doubles("v_poly");
  } else {
    throw ConfigError("unknown family '" + cfg.family + "'");
  }
  model.done();

  SectionReader domains(f, "domains");
  if (domains.has("states")) {
    const std::vector<double> v = domains.take_doubles("states");
    if (v.size() != 2 || !(v[0] < v[1]))
      throw ConfigError("[domains] states needs 'lo hi' with lo < hi");
    cfg.state_domain = Interval{v[0], v[1]};
  }
  if (domains.has("actions")) {
    const std::vector<double> v = domains.take_doubles("actions");
    if (v.size() != 2 || !(v[0] < v[1]))
      throw ConfigError("[domains] actions needs 'lo hi' with lo < hi");
    cfg.action_domain = Interval{v[0], v[1]};
  }
  domains.done();

  SectionReader grid(f, "grid");
  if (grid.has("states")) cfg.grid_states = grid.take_int("states");
  if (grid.has("actions")) cfg.grid_actions = grid.take_int("actions");
  grid.done();
  if (cfg.grid_states < 2 || cfg.grid_actions < 2)
    throw ConfigError("[grid] needs at least 2 points per axis");

  SectionReader prior(f, "prior");
  if (prior.has("states")) cfg.prior_states = prior.take_doubles("states");
  if (prior.has("probs")) cfg.prior_probs = prior.take_doubles("probs");
  prior.done();
  if (cfg.prior_states.size() != cfg.prior_probs.size())
    throw ConfigError("[prior] states and probs must have matching lengths");

  SectionReader checks(f, "checks");
  if (checks.has("run")) {
    cfg.checks = checks.take("run", 1, 100);
    for (std::string& c : cfg.checks) {
      if (c == "subopt") c = "suboptimality";  // accepted shorthand
      if (!kKnownChecks.count(c)) throw ConfigError("[checks] unknown check '" + c + "'");
    }
  } else {
    cfg.checks = {"weak", "derivable", "derivative"};
    if (cfg.family == "crra") cfg.checks.push_back("suboptimality");
    if (cfg.family == "quadratic_cs") cfg.checks.push_back("linear_receiver");
    if (cfg.family == "separable") cfg.checks.push_back("separable");
    if (cfg.family == "linear_case") cfg.checks = {"linear_case", "weak", "derivable"};
  }
  checks.done();
  for (const std::string& c : cfg.checks) {
    if (c == "linear_case" && cfg.family != "linear_case")
      throw ConfigError("check 'linear_case' needs the linear_case family");
    if ((c == "separable" || c == "multiplicative") && cfg.family != "separable")
      throw ConfigError("check '" + c + "' needs the separable family");
    if (c == "suboptimality" && cfg.prior_states.empty())
      throw ConfigError("check 'suboptimality' needs a [prior]");
  }

  SectionReader oracle(f, "oracle");
  if (oracle.has("pi_grid")) cfg.pi_grid = oracle.take_int("pi_grid");
  if (oracle.has("resolution2")) cfg.resolution2 = oracle.take_int("resolution2");
  if (oracle.has("resolution3")) cfg.resolution3 = oracle.take_int("resolution3");
  oracle.done();
  if (cfg.pi_grid < 1) throw ConfigError("[oracle] pi_grid must be positive");
  if (cfg.resolution2 < 17) throw ConfigError("[oracle] resolution2 must be at least 17");
  if (cfg.resolution3 < 4) throw ConfigError("[oracle] resolution3 must be at least 4");

  SectionReader output(f, "output");
  if (output.has("dir")) cfg.out_dir = output.take("dir", 1, 1)[0];
  if (output.has("formats")) {
    cfg.formats.clear();
    for (const std::string& t : output.take("formats", 1, 3)) {
      if (t != "csv" && t != "json-lines" && t != "svg")
        throw ConfigError("[output] unknown format '" + t + "'");
      cfg.formats.insert(t);
    }
  }
  output.done();

  build_model(cfg);  // run family validation before reporting success
  if (!cfg.prior_states.empty()) build_prior(cfg);
  return cfg;
}

StateActionModel build_model(const RunConfig& cfg) {
  if (cfg.family == "crra")
    return crra_model(cfg.crra, cfg.state_domain.value_or(Interval{1, 2}), cfg.action_domain);
  if (cfg.family == "quadratic_cs")
    return quadratic_cs_model(cfg.cs_b, cfg.state_domain.value_or(Interval{0, 1}),
                              cfg.action_domain.value_or(Interval{0, 1}));
  if (cfg.family == "separable") {
    SeparableParams p;
    p.beta = [](double w) { return w; };
    p.beta_prime = [](double) { return 1.0; };
    p.phi = cfg.sep_phi;
    p.xi = cfg.sep_xi;
    p.delta = cfg.sep_delta;
    return separable_model(p, cfg.state_domain.value_or(Interval{1, 2}), cfg.action_domain);
  }
  if (cfg.family == "linear_case") {
    const CurveSpec c = polynomial_curve(cfg.v_poly);
    return linear_case_model([c](double a) { return c.eval(a, 0); },
                             [c](double a) { return c.eval(a, 1); },
                             cfg.state_domain.value_or(Interval{0, 1}),
                             cfg.action_domain.value_or(Interval{0, 1}));
  }
  throw ConfigError("unknown family '" + cfg.family + "'");
}

Posterior build_prior(const RunConfig& cfg) {
  if (cfg.prior_states.empty()) throw ConfigError("no [prior] section in the config");
  const auto n = static_cast<Eigen::Index>(cfg.prior_states.size());
  VectorXd s(n), p(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s[i] = cfg.prior_states[static_cast<std::size_t>(i)];
    p[i] = cfg.prior_probs[static_cast<std::size_t>(i)];
  }
  try {
    return Posterior(s, p);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[prior] ") + e.what());
  }
}

}  // namespace disclose
