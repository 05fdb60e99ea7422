#include "disclose/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace disclose {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& columns,
                     std::uint64_t config_hash)
    : os_(os), n_cols_(columns.size()) {
  os_ << "# tool_version=" << kToolVersion << " config=" << hex64(config_hash) << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    os_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_) throw DomainError("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    os_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

Json to_json(const ConditionVerdict& v, const std::string& check) {
  Json j;
  j["check"] = check;
  j["status"] = to_string(v.status);
  j["min_margin"] = v.min_margin;
  j["margin_tol"] = v.margin_tol;
  j["pairs_tested"] = v.pairs_tested;
  j["grid_states"] = v.grid_states;
  j["grid_actions"] = v.grid_actions;
  if (v.necessary_and_sufficient) j["necessary_and_sufficient"] = true;
  if (v.witness_states)
    j["witness_states"] = {v.witness_states->first, v.witness_states->second};
  if (v.vacuous_pairs > 0) j["vacuous_pairs"] = v.vacuous_pairs;
  Json ws = Json::array();
  for (const Witness& w : v.witnesses) {
    Json e;
    e["state1"] = w.state1;
    e["action1"] = w.action1;
    e["state2"] = w.state2;
    e["action2"] = w.action2;
    e["value1"] = w.value1;
    e["value2"] = w.value2;
    e["margin"] = w.margin;
    ws.push_back(std::move(e));
  }
  j["witnesses"] = std::move(ws);
  return j;
}

Json to_json(const EnvelopeResult& r, int support_size, int resolution) {
  Json j;
  j["check"] = "concavification";
  j["support_size"] = support_size;
  j["resolution"] = resolution;
  j["verdict"] = to_string(r.verdict);
  j["margin"] = r.margin;
  j["margin_argmax"] = static_cast<long>(r.margin_argmax);
  j["envelope_value_at_prior"] = r.envelope_value_at_prior;
  j["full_disclosure_value"] = r.full_disclosure_value;
  Json split = Json::array();
  for (const auto& [post, weight] : r.optimal_split) {
    Json e;
    e["weight"] = weight;
    Json st = Json::array(), pr = Json::array();
    for (Eigen::Index i = 0; i < post.size(); ++i) {
      st.push_back(post.states()[i]);
      pr.push_back(post.probs()[i]);
    }
    e["states"] = std::move(st);
    e["probs"] = std::move(pr);
    split.push_back(std::move(e));
  }
  j["optimal_split"] = std::move(split);
  return j;
}

namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// probability of the higher state carried by a 1- or 2-point posterior
double posterior_x(const Posterior& p, double hi) {
  if (p.size() == 1) return p.states()[0] == hi ? 1.0 : 0.0;
  return p.probs()[p.size() - 1];
}

}  // namespace

std::string envelope_plot_svg(const EnvelopeResult& r, double prior_p) {
  const double W = 640, H = 420, L = 60, R = 20, T = 20, B = 40;
  const Eigen::Index n = r.sample_values.size();
  double ymin = r.sample_values.minCoeff(), ymax = r.sample_values.maxCoeff();
  ymin = std::min(ymin, r.full_disclosure_value);
  ymax = std::max({ymax, r.full_disclosure_value, r.envelope_value_at_prior});
  if (ymax - ymin < 1e-12) {
    ymax += 0.5;
    ymin -= 0.5;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const double hi_state = r.sample_posteriors.back().states()[
      r.sample_posteriors.back().size() - 1];

  const auto X = [&](double p) { return L + p * (W - L - R); };
  const auto Y = [&](double v) { return T + (ymax - v) / (ymax - ymin) * (H - T - B); };

  std::string s;
  s += "<svg xmlns='http://www.w3.org/2000/svg' viewBox='0 0 " + px(W) + " " + px(H) + "'>\n";
  s += "<rect width='100%' height='100%' fill='white'/>\n";
  s += "<line x1='" + px(L) + "' y1='" + px(H - B) + "' x2='" + px(W - R) + "' y2='" +
       px(H - B) + "' stroke='black'/>\n";
  s += "<line x1='" + px(L) + "' y1='" + px(T) + "' x2='" + px(L) + "' y2='" + px(H - B) +
       "' stroke='black'/>\n";
  s += "<text x='" + px(W / 2) + "' y='" + px(H - 8) +
       "' font-size='13' text-anchor='middle'>posterior probability of the high state</text>\n";

  // sampled sender values
  s += "<polyline fill='none' stroke='#1f77b4' stroke-width='1.5' points='";
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = posterior_x(r.sample_posteriors[static_cast<std::size_t>(i)], hi_state);
    s += px(X(p)) + "," + px(Y(r.sample_values[i])) + " ";
  }
  s += "'/>\n";

  // full-disclosure chord
  const double v0 = r.sample_values[0], v1 = r.sample_values[n - 1];
  s += "<line x1='" + px(X(0)) + "' y1='" + px(Y(v0)) + "' x2='" + px(X(1)) + "' y2='" +
       px(Y(v1)) + "' stroke='#2ca02c' stroke-width='1.5' stroke-dasharray='6 3'/>\n";

  // prior marker and the envelope value there
  s += "<line x1='" + px(X(prior_p)) + "' y1='" + px(T) + "' x2='" + px(X(prior_p)) +
       "' y2='" + px(H - B) + "' stroke='#999' stroke-dasharray='2 3'/>\n";
  s += "<circle cx='" + px(X(prior_p)) + "' cy='" + px(Y(r.envelope_value_at_prior)) +
       "' r='4' fill='#d62728'/>\n";
  s += "<circle cx='" + px(X(prior_p)) + "' cy='" + px(Y(r.full_disclosure_value)) +
       "' r='4' fill='none' stroke='#2ca02c' stroke-width='1.5'/>\n";

  s += "<text x='" + px(W - R) + "' y='" + px(T + 14) +
       "' font-size='13' text-anchor='end'>" + to_string(r.verdict) + "</text>\n";
  s += "</svg>\n";
  return s;
}

std::string regime_heatmap_svg(const RegimeMapReport& r) {
  const std::size_t ng = r.gammas.size(), nr = r.rhos.size();
  const double cell = 18, L = 70, T = 30, B = 50, R = 160;
  const double W = L + cell * static_cast<double>(ng) + R;
  const double H = T + cell * static_cast<double>(nr) + B;

  const auto color = [](Regime g) {
    switch (g) {
      case Regime::Optimal: return "#4daf4a";
      case Regime::Suboptimal: return "#e41a1c";
      case Regime::Inconclusive: return "#cccccc";
    }
    return "#000000";
  };

  std::string s;
  s += "<svg xmlns='http://www.w3.org/2000/svg' viewBox='0 0 " + px(W) + " " + px(H) + "'>\n";
  s += "<rect width='100%' height='100%' fill='white'/>\n";
  for (std::size_t gi = 0; gi < ng; ++gi)
    for (std::size_t ri = 0; ri < nr; ++ri) {
      const RegimeCell& c = r.cells[gi * nr + ri];
      const double x = L + cell * static_cast<double>(gi);
      const double y = T + cell * static_cast<double>(nr - 1 - ri);
      s += "<rect x='" + px(x) + "' y='" + px(y) + "' width='" + px(cell) + "' height='" +
           px(cell) + "' fill='" + color(c.regime) + "'";
      if (c.validated)
        s += std::string(" stroke='") + (c.agree ? "black" : "#ff7f00") + "' stroke-width='" +
             (c.agree ? "1" : "3") + "'";
      s += "/>\n";
    }
  s += "<text x='" + px(L + cell * static_cast<double>(ng) / 2) + "' y='" + px(H - 12) +
       "' font-size='13' text-anchor='middle'>acting-party curvature</text>\n";
  s += "<text x='16' y='" + px(T + cell * static_cast<double>(nr) / 2) +
       "' font-size='13' text-anchor='middle' transform='rotate(-90 16 " +
       px(T + cell * static_cast<double>(nr) / 2) + ")'>designer curvature</text>\n";

  const double lx = L + cell * static_cast<double>(ng) + 16;
  const char* names[3] = {"optimal", "suboptimal", "inconclusive"};
  const Regime regs[3] = {Regime::Optimal, Regime::Suboptimal, Regime::Inconclusive};
  for (int i = 0; i < 3; ++i) {
    const double y = T + 20 * i;
    s += "<rect x='" + px(lx) + "' y='" + px(y) + "' width='14' height='14' fill='" +
         color(regs[i]) + "'/>\n";
    s += "<text x='" + px(lx + 20) + "' y='" + px(y + 11) + "' font-size='12'>full disclosure " +
         names[i] + "</text>\n";
  }
  s += "<text x='" + px(lx) + "' y='" + px(T + 80) + "' font-size='12'>outlined = cross-checked" +
       std::string("</text>\n");
  s += "</svg>\n";
  return s;
}

}  // namespace disclose
