#pragma once
// shared bits for the test binaries: subprocess capture, temp dirs, file io,
// and random instance draws used by several suites
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "disclose/families.hpp"
#include "disclose/model.hpp"

namespace testutil {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr interleaved
};

inline RunResult run_command(const std::string& cmd) {
  RunResult r;
  FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed: " + cmd);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = (status >= 256) ? status / 256 : status;  // WEXITSTATUS without <sys/wait.h>
  return r;
}

inline std::string make_temp_dir() {
  char tmpl[] = "/tmp/disclose_test_XXXXXX";
  if (!::mkdtemp(tmpl)) throw std::runtime_error("mkdtemp failed");
  return tmpl;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

inline bool file_exists(const std::string& path) {
  std::ifstream in(path);
  return in.good();
}

// crra parameters with gamma/rho kept clear of the excluded value 1
inline disclose::CrraParams random_crra(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0, 1);
  disclose::CrraParams p;
  p.gamma = 2.4 * u01(rng);
  if (std::fabs(1 - p.gamma) < 0.05) p.gamma += 0.1;
  p.rho = 2.4 * u01(rng);
  if (std::fabs(1 - p.rho) < 0.05) p.rho += 0.1;
  p.delta = 0.2 + 0.6 * u01(rng);
  p.kappa = 0.2 + 0.6 * u01(rng);
  return p;
}

}  // namespace testutil
