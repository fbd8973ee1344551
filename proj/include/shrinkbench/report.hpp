#pragma once

// Serialization of experiment results: the table CSV, the run manifest and an
// SVG relative-efficiency chart.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shrinkbench/error.hpp"
#include "shrinkbench/risk.hpp"
#include "shrinkbench/sim.hpp"

namespace shrinkbench {

class MalformedCsv : public ConfigError {
public:
  using ConfigError::ConfigError;
};

/// Number text used in every CSV: 10 significant digits, "Inf" for +inf and
/// "NA" for NaN.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// Inverse of format_number. Throws MalformedCsv on anything else.
inline double parse_number(const std::string& s) {
  if (s == "NA") return std::numeric_limits<double>::quiet_NaN();
  if (s == "Inf") return std::numeric_limits<double>::infinity();
  if (s == "-Inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw MalformedCsv("not a number: '" + s + "'");
  return v;
}

inline constexpr const char* kTableHeader = "delta2,estimator,tuning,mse,rel_eff";

inline void write_table_csv(const EfficiencyTable& table, std::ostream& os) {
  os << kTableHeader << '\n';
  for (const EfficiencyRow& row : table.rows) {
    os << format_number(row.delta2) << ',' << to_string(row.estimator.id) << ',' << row.tuning << ','
       << format_number(row.mse) << ',' << format_number(row.rel_eff) << '\n';
  }
}

inline std::string table_csv(const EfficiencyTable& table) {
  std::ostringstream os;
  write_table_csv(table, os);
  return os.str();
}

/// A CSV file as strings: header plus rows of equal width. Fields are
/// unquoted; none of the files written here contain commas inside a field.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw MalformedCsv("missing column '" + name + "'");
  }
};

inline CsvTable parse_csv(std::istream& is) {
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
  };
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
      throw MalformedCsv("line " + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                         " fields, got " + std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw MalformedCsv("empty CSV");
  return t;
}

/// Legend label for an (estimator, tuning) pair: PT(0.05), EN25, ...
inline std::string series_label(const std::string& estimator, const std::string& tuning) {
  auto field = [&](const std::string& key) -> std::string {
    const std::string pat = key + "=";
    std::size_t pos = 0;
    while ((pos = tuning.find(pat, pos)) != std::string::npos) {
      if (pos == 0 || tuning[pos - 1] == ';') {
        const std::size_t start = pos + pat.size();
        return tuning.substr(start, tuning.find(';', start) - start);
      }
      ++pos;
    }
    return "";
  };
  if (estimator == "PTE" && !field("alpha").empty()) return "PT(" + field("alpha") + ")";
  if (estimator == "IPT" && !field("alpha").empty()) return "IPT(" + field("alpha") + ")";
  if (estimator == "EN" && !field("mix").empty()) {
    const double mix = std::strtod(field("mix").c_str(), nullptr);
    char buf[32];
    std::snprintf(buf, sizeof buf, "EN%02d", static_cast<int>(std::lround(mix * 100)));
    return buf;
  }
  return estimator;
}

struct PlotOptions {
  std::string title;
  std::optional<double> y_cap;  ///< values above this (and Inf) are drawn as markers at the cap
  bool include_lse = false;
  int width = 900;
  int height = 560;
};

struct PlotResult {
  std::string svg;
  std::vector<std::string> warnings;
  std::size_t series_count = 0;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fmt_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
                                           "#393b79", "#ad494a", "#637939", "#843c39"};

inline double nice_step(double range) {
  const double raw = range / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace detail

/// Relative efficiency against the first column (x), one line per
/// (estimator, tuning) series, with a dashed reference line at 1. Point
/// tooltips carry the CSV text verbatim.
inline PlotResult render_svg(const CsvTable& csv, const PlotOptions& opt = {}) {
  const std::size_t ie = csv.column("estimator");
  const std::size_t it = csv.column("tuning");
  const std::size_t iy = csv.column("rel_eff");
  const std::string x_name = csv.header.front();

  struct Point {
    double x;
    double y;  // NaN for NA
    std::string x_text;
    std::string y_text;
  };
  struct Series {
    std::string label;
    std::vector<Point> points;
  };
  std::vector<Series> series;
  std::map<std::string, std::size_t> index;
  for (const auto& row : csv.rows) {
    if (row[ie] == "LSE" && !opt.include_lse) continue;
    const std::string key = row[ie] + "|" + row[it];
    auto [pos, inserted] = index.try_emplace(key, series.size());
    if (inserted) series.push_back({series_label(row[ie], row[it]), {}});
    series[pos->second].points.push_back({parse_number(row[0]), parse_number(row[iy]), row[0], row[iy]});
  }

  PlotResult res;
  std::vector<Series> kept;
  for (auto& s : series) {
    const bool any = std::any_of(s.points.begin(), s.points.end(), [](const Point& p) { return !std::isnan(p.y); });
    if (any)
      kept.push_back(std::move(s));
    else
      res.warnings.push_back("series " + s.label + " has no plottable values; skipped");
  }
  for (auto& s : kept) std::sort(s.points.begin(), s.points.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  res.series_count = kept.size();

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_hi = 1.0;
  bool has_inf = false;
  for (const auto& s : kept)
    for (const auto& p : s.points) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      if (std::isinf(p.y))
        has_inf = true;
      else if (!std::isnan(p.y))
        y_hi = std::max(y_hi, p.y);
    }
  if (kept.empty()) {
    x_lo = 0.0;
    x_hi = 1.0;
    res.warnings.push_back("no plottable series");
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  double cap = opt.y_cap ? *opt.y_cap : y_hi * 1.05;
  if (!(cap > 1.0)) cap = 1.1;

  const double ml = 70, mr = 170, mt = 50, mb = 60;
  const double pw = opt.width - ml - mr;
  const double ph = opt.height - mt - mb;
  auto sx = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double y) { return mt + ph - std::min(y, cap) / cap * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    os << "<text x=\"" << opt.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << detail::xml_escape(opt.title) << "</text>\n";

  // axes and ticks
  os << "<g stroke=\"#333\" fill=\"none\"><rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
     << "\" height=\"" << ph << "\"/></g>\n";
  const double xs = detail::nice_step(x_hi - x_lo);
  for (double v = std::ceil(x_lo / xs) * xs; v <= x_hi + 1e-9 * xs; v += xs) {
    os << "<line x1=\"" << detail::fmt_coord(sx(v)) << "\" y1=\"" << mt + ph << "\" x2=\"" << detail::fmt_coord(sx(v))
       << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#333\"/>";
    os << "<text x=\"" << detail::fmt_coord(sx(v)) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">"
       << format_g(v) << "</text>\n";
  }
  const double ys = detail::nice_step(cap);
  for (double v = 0.0; v <= cap + 1e-9 * ys; v += ys) {
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::fmt_coord(sy(v)) << "\" x2=\"" << ml << "\" y2=\""
       << detail::fmt_coord(sy(v)) << "\" stroke=\"#333\"/>";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << detail::fmt_coord(sy(v) + 4) << "\" text-anchor=\"end\">"
       << format_g(v) << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opt.height - 15 << "\" text-anchor=\"middle\">"
     << detail::xml_escape(x_name) << "</text>\n";
  os << "<text transform=\"translate(18," << mt + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << "relative efficiency" << (has_inf || opt.y_cap ? " (capped at " + format_g(cap) + ")" : "") << "</text>\n";

  // reference line at 1
  os << "<line class=\"reference\" x1=\"" << ml << "\" y1=\"" << detail::fmt_coord(sy(1.0)) << "\" x2=\"" << ml + pw
     << "\" y2=\"" << detail::fmt_coord(sy(1.0)) << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";

  for (std::size_t si = 0; si < kept.size(); ++si) {
    const Series& s = kept[si];
    const char* color = detail::kPalette[si % std::size(detail::kPalette)];
    os << "<g class=\"series\" data-label=\"" << detail::xml_escape(s.label) << "\">\n";
    std::string path;
    for (const Point& p : s.points) {
      if (std::isnan(p.y)) {
        path += "|";  // break the line at NA
        continue;
      }
      path += (path.empty() || path.back() == '|' ? "M" : " L") + detail::fmt_coord(sx(p.x)) + "," +
              detail::fmt_coord(sy(p.y));
    }
    std::string d;
    for (char c : path)
      if (c != '|') d += c;
      else d += ' ';
    os << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"/>\n";
    for (const Point& p : s.points) {
      if (std::isnan(p.y)) continue;
      const std::string tip = detail::xml_escape(s.label + " " + x_name + "=" + p.x_text + " rel_eff=" + p.y_text);
      const double cx = sx(p.x);
      const double cy = sy(p.y);
      if (std::isinf(p.y) || p.y > cap) {
        os << "<path class=\"offscale\" d=\"M" << detail::fmt_coord(cx - 5) << "," << detail::fmt_coord(cy + 6)
           << " L" << detail::fmt_coord(cx + 5) << "," << detail::fmt_coord(cy + 6) << " L" << detail::fmt_coord(cx)
           << "," << detail::fmt_coord(cy - 3) << " Z\" fill=\"" << color << "\"><title>" << tip
           << "</title></path>\n";
      } else {
        os << "<circle cx=\"" << detail::fmt_coord(cx) << "\" cy=\"" << detail::fmt_coord(cy) << "\" r=\"2.5\" fill=\""
           << color << "\"><title>" << tip << "</title></circle>\n";
      }
    }
    os << "</g>\n";
  }

  // legend
  for (std::size_t si = 0; si < kept.size(); ++si) {
    const double y = mt + 10 + 18.0 * si;
    const char* color = detail::kPalette[si % std::size(detail::kPalette)];
    os << "<line x1=\"" << ml + pw + 15 << "\" y1=\"" << y << "\" x2=\"" << ml + pw + 40 << "\" y2=\"" << y
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
    os << "<text class=\"legend\" x=\"" << ml + pw + 46 << "\" y=\"" << y + 4 << "\">"
       << detail::xml_escape(kept[si].label) << "</text>\n";
  }
  os << "</svg>\n";
  res.svg = os.str();
  return res;
}

// ---- manifest -------------------------------------------------------------

inline nlohmann::json estimator_to_json(const EstimatorSpec& e) {
  nlohmann::json j{{"id", std::string(to_string(e.id))}};
  if (e.id == EstimatorId::PTE || e.id == EstimatorId::IPT) j["alpha"] = e.alpha;
  if (e.id == EstimatorId::EN) j["mix"] = e.mix;
  return j;
}

inline EstimatorSpec estimator_from_json(const nlohmann::json& j) {
  EstimatorSpec e;
  e.id = estimator_from_string(j.at("id").get<std::string>());
  if (j.contains("alpha")) e.alpha = j.at("alpha").get<double>();
  if (j.contains("mix")) e.mix = j.at("mix").get<double>();
  return e;
}

inline nlohmann::json config_to_json(const SimConfig& cfg) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["p"] = cfg.p;
  j["k"] = cfg.signal_count();
  j["k_defaulted_to_p"] = !cfg.k.has_value();
  j["r"] = cfg.r;
  j["delta2_grid"] = cfg.delta2_grid;
  j["reps"] = cfg.reps;
  j["sigma"] = cfg.sigma;
  j["seed"] = cfg.seed;
  j["estimators"] = nlohmann::json::array();
  for (const auto& e : cfg.estimators) j["estimators"].push_back(estimator_to_json(e));
  j["fixed_design"] = cfg.fixed_design;
  j["delta2_mapping"] = std::string(to_string(cfg.mapping));
  j["kappa"] = cfg.kappa.label();
  j["folds"] = cfg.folds;
  j["n_lambda"] = cfg.n_lambda;
  if (cfg.unit_signal) j["unit_signal"] = *cfg.unit_signal;
  return j;
}

inline KappaRule parse_kappa_rule(const std::string& s) {
  if (s == "plugin") return {};
  if (s.rfind("fixed:", 0) == 0) {
    KappaRule k;
    k.plugin = false;
    char* end = nullptr;
    const std::string v = s.substr(6);
    k.fixed = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !(k.fixed >= 0.0) || !std::isfinite(k.fixed))
      throw ConfigError("--kappa fixed:<v> needs a finite value >= 0, got '" + s + "'");
    return k;
  }
  throw ConfigError("--kappa must be 'plugin' or 'fixed:<v>', got '" + s + "'");
}

inline Delta2Mapping parse_mapping(const std::string& s) {
  if (s == "noncentrality") return Delta2Mapping::Noncentrality;
  if (s == "euclidean") return Delta2Mapping::Euclidean;
  throw ConfigError("--delta2-mapping must be 'noncentrality' or 'euclidean', got '" + s + "'");
}

inline SimConfig config_from_json(const nlohmann::json& j) {
  try {
    SimConfig cfg;
    cfg.n = j.at("n").get<int>();
    cfg.p = j.at("p").get<int>();
    if (!j.value("k_defaulted_to_p", false)) cfg.k = j.at("k").get<int>();
    cfg.r = j.at("r").get<double>();
    cfg.delta2_grid = j.at("delta2_grid").get<std::vector<double>>();
    cfg.reps = j.at("reps").get<int>();
    cfg.sigma = j.at("sigma").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.estimators.clear();
    for (const auto& e : j.at("estimators")) cfg.estimators.push_back(estimator_from_json(e));
    cfg.fixed_design = j.at("fixed_design").get<bool>();
    cfg.mapping = parse_mapping(j.at("delta2_mapping").get<std::string>());
    cfg.kappa = parse_kappa_rule(j.at("kappa").get<std::string>());
    cfg.folds = j.at("folds").get<int>();
    cfg.n_lambda = j.at("n_lambda").get<int>();
    if (j.contains("unit_signal")) cfg.unit_signal = j.at("unit_signal").get<double>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest config: ") + e.what());
  }
}

/// Plain-language statement of every tuning and data-generation rule in effect.
inline nlohmann::json decision_log(const SimConfig& cfg) {
  nlohmann::json d;
  d["lambda_rule"] = std::to_string(cfg.folds) + "-fold cross-validation over " + std::to_string(cfg.n_lambda) +
                     " log-spaced lambdas from lambda_max to 1e-3 lambda_max; minimum CV error, ties to the larger "
                     "lambda; folds seeded per replication";
  d["kappa_rule"] = cfg.kappa.plugin
                        ? "kappa = p / max(L_n - p, 1e-6) on the X'X/n scale (ridge adds n*kappa to X'X)"
                        : "fixed kappa = " + format_g(cfg.kappa.fixed) + " on the X'X/n scale";
  d["delta2_mapping"] = cfg.mapping == Delta2Mapping::Noncentrality ? "Delta^2 = n beta' Sigma beta / sigma^2"
                                                                    : "Delta^2 = beta' beta / sigma^2";
  d["beta_rule"] = cfg.unit_signal ? "beta = " + format_g(*cfg.unit_signal) + " * (1_k, 0); Delta^2 reported as implied"
                                   : "beta = c (1_k, 0) with c >= 0 solving the Delta^2 mapping";
  d["k_rule"] = cfg.k ? "k = " + std::to_string(*cfg.k) + " (given)" : "k defaults to p = " + std::to_string(cfg.p);
  d["design"] = cfg.fixed_design ? "X drawn once per cell from stream 0" : "X redrawn every replication";
  d["rng"] = "mt19937_64 seeded by seed_seq(seed, replication); replication t = 1..reps uses stream t, a fixed design uses stream 0";
  return d;
}

}  // namespace shrinkbench
