#pragma once
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "disclose/conditions.hpp"
#include "disclose/oracle.hpp"
#include "disclose/regime_map.hpp"

namespace disclose {

inline constexpr const char* kToolVersion = "1.0.0";

// Shortest text that round-trips the double (17 significant digits).
std::string format_double(double x);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Comma-separated table with a versioned comment header carrying the tool
// version and the config hash. All numeric cells go through format_double, so
// identical runs produce identical bytes.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& columns,
            std::uint64_t config_hash);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
  std::size_t n_cols_;
};

using Json = nlohmann::ordered_json;

Json to_json(const ConditionVerdict& v, const std::string& check);
Json to_json(const EnvelopeResult& r, int support_size, int resolution);

// Self-contained SVG plot of a two-state concavification: sampled sender
// values, the full-disclosure chord, and the upper envelope.
std::string envelope_plot_svg(const EnvelopeResult& r, double prior_p);

// Heat map of the analytic regimes with validated cells outlined.
std::string regime_heatmap_svg(const RegimeMapReport& r);

}  // namespace disclose
