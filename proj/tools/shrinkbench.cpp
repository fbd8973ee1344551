// shrinkbench: run relative-efficiency simulations, evaluate analytic risk
// curves and plot result tables.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shrinkbench/presets.hpp"
#include "shrinkbench/report.hpp"
#include "shrinkbench/risk.hpp"
#include "shrinkbench/sim.hpp"

namespace fs = std::filesystem;
using namespace shrinkbench;

namespace {

constexpr const char* kVersion = "1.0.0";

std::vector<double> parse_grid(const std::string& text) {
  if (text == "standard") return standard_delta2_grid();
  auto num = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
      throw ConfigError("--grid: cannot parse '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3) throw ConfigError("--grid: range form is lo:hi[:step]");
    const double lo = num(parts[0]);
    const double hi = num(parts[1]);
    const double step = parts.size() == 3 ? num(parts[2]) : 1.0;
    if (!(step > 0.0) || hi < lo) throw ConfigError("--grid: need lo <= hi and step > 0");
    const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    if (count > 100000) throw ConfigError("--grid: too many points");
    for (long i = 0; i <= count; ++i) out.push_back(lo + step * i);
    return out;
  }
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(num(part));
  if (out.empty()) throw ConfigError("--grid is empty");
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + path.string() + "' for writing");
  os << content;
  if (!os) throw Error("failed writing '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct SimulateFlags {
  std::optional<int> n, p, k, reps, folds;
  std::optional<double> r, sigma;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> grid, estimators, preset, mapping, kappa, from_manifest;
  bool fixed_design = false;
  std::string out = "shrinkbench-out";
};

void apply_flags(const SimulateFlags& f, SimConfig& cfg) {
  if (f.n) cfg.n = *f.n;
  if (f.p) cfg.p = *f.p;
  if (f.k) cfg.k = *f.k;
  if (f.r) cfg.r = *f.r;
  if (f.reps) cfg.reps = *f.reps;
  if (f.sigma) cfg.sigma = *f.sigma;
  if (f.seed) cfg.seed = *f.seed;
  if (f.folds) cfg.folds = *f.folds;
  if (f.grid) cfg.delta2_grid = parse_grid(*f.grid);
  if (f.estimators) cfg.estimators = parse_estimator_list(*f.estimators);
  if (f.mapping) cfg.mapping = parse_mapping(*f.mapping);
  if (f.kappa) cfg.kappa = parse_kappa_rule(*f.kappa);
  if (f.fixed_design) cfg.fixed_design = true;
}

CsvTable to_csv_table(const std::string& text) {
  std::istringstream is(text);
  return parse_csv(is);
}

int cmd_simulate(const SimulateFlags& f, const std::vector<std::string>& argv) {
  Preset preset;
  if (f.from_manifest) {
    if (f.preset) throw ConfigError("--from-manifest and --preset are mutually exclusive");
    const auto j = nlohmann::json::parse(read_file(*f.from_manifest), nullptr, false);
    if (j.is_discarded() || !j.contains("config")) throw ConfigError("'" + *f.from_manifest + "' is not a manifest");
    preset = {"manifest", "replay of " + *f.from_manifest, {{"", config_from_json(j.at("config"))}}, false, false};
  } else if (f.preset) {
    preset = make_preset(*f.preset);
  } else {
    preset = {"custom", "command-line configuration", {{"", SimConfig{}}}, false, false};
  }
  for (auto& panel : preset.panels) {
    apply_flags(f, panel.cfg);
    if (f.k && panel.cfg.unit_signal) throw ConfigError("--k cannot override a preset that varies k");
    panel.cfg.validate();
  }

  const fs::path out(f.out);
  const int threads = default_thread_count();
  std::map<std::string, std::vector<std::string>> by_p_rows;  // k-dir -> rows

  for (const auto& panel : preset.panels) {
    const auto t0 = std::chrono::steady_clock::now();
    const EfficiencyTable table = run_experiment(panel.cfg, threads);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path dir = panel.subdir.empty() ? out : out / panel.subdir;
    const std::string csv = table_csv(table);
    write_file(dir / "table.csv", csv);

    nlohmann::json manifest;
    manifest["software"] = {{"name", "shrinkbench"}, {"version", kVersion}};
    manifest["preset"] = preset.name;
    if (!panel.subdir.empty()) manifest["panel"] = panel.subdir;
    manifest["command"] = argv;
    manifest["config"] = config_to_json(panel.cfg);
    manifest["seed"] = panel.cfg.seed;
    manifest["threads"] = threads;
    manifest["wall_time_seconds"] = wall;
    manifest["decisions"] = decision_log(panel.cfg);
    manifest["rows"] = table.rows.size();
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    if (preset.plot && !preset.by_p) {
      PlotOptions po;
      po.title = preset.description;
      const PlotResult pr = render_svg(to_csv_table(csv), po);
      for (const auto& w : pr.warnings) std::cerr << "warning: " << w << "\n";
      write_file(dir / "plot.svg", pr.svg);
    }
    if (preset.by_p) {
      const std::string kdir = panel.subdir.substr(0, panel.subdir.find('/'));
      for (const auto& row : table.rows)
        by_p_rows[kdir].push_back(std::to_string(panel.cfg.p) + "," + std::string(to_string(row.estimator.id)) + "," +
                                  row.tuning + "," + format_number(row.mse) + "," + format_number(row.rel_eff));
    }
    std::cerr << "wrote " << (dir / "table.csv").string() << " (" << table.rows.size() << " rows, "
              << format_g(wall) << " s)\n";
  }

  for (const auto& [kdir, rows] : by_p_rows) {
    std::string csv = "p,estimator,tuning,mse,rel_eff\n";
    for (const auto& r : rows) csv += r + "\n";
    write_file(out / kdir / "by_p.csv", csv);
    if (preset.plot) {
      PlotOptions po;
      po.title = preset.description + " (" + kdir + ")";
      const PlotResult pr = render_svg(to_csv_table(csv), po);
      for (const auto& w : pr.warnings) std::cerr << "warning: " << w << "\n";
      write_file(out / kdir / "plot.svg", pr.svg);
    }
  }
  return 0;
}

struct RiskFlags {
  int p = 10;
  double sigma2 = 1.0;
  std::optional<double> trcinv;
  double alpha = 0.05;
  std::string grid = "0:50";
  std::string kappa = "optimal";
  std::string out = "shrinkbench-out";
  bool dominance = false;
};

int cmd_risk(const RiskFlags& f) {
  RiskContext base;
  base.p = f.p;
  base.sigma2 = f.sigma2;
  base.tr_c_inv = f.trcinv.value_or(static_cast<double>(f.p));
  base.alpha = f.alpha;
  try {
    base.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  std::optional<double> fixed_kappa;
  if (f.kappa != "optimal") {
    const KappaRule k = parse_kappa_rule(f.kappa);
    if (k.plugin) throw ConfigError("risk --kappa must be 'optimal' or 'fixed:<v>'");
    fixed_kappa = k.fixed;
  }
  const std::vector<double> grid = parse_grid(f.grid);
  for (double d : grid)
    if (!(d >= 0.0)) throw ConfigError("--grid values must be >= 0");

  std::vector<EstimatorId> ids = {EstimatorId::LSE, EstimatorId::RE, EstimatorId::PTE, EstimatorId::IPT,
                                  EstimatorId::S,   EstimatorId::SPLUS, EstimatorId::RR};
  if (base.p < 3) ids = {EstimatorId::LSE, EstimatorId::RE, EstimatorId::PTE, EstimatorId::RR};

  std::string csv = "delta2,estimator,tuning,adb_factor,adqr\n";
  for (double d2 : grid) {
    const RiskContext ctx = base.at(d2);
    for (EstimatorId id : ids) {
      std::string tuning;
      double kappa = 0.0;
      if (id == EstimatorId::PTE || id == EstimatorId::IPT) tuning = "alpha=" + format_g(base.alpha);
      if (id == EstimatorId::RR) {
        kappa = fixed_kappa ? *fixed_kappa : optimal_kappa(base.p, d2);
        tuning = "kappa=" + format_number(kappa);
      }
      const RiskReport r = risk_of(id, ctx, kappa);
      csv += format_number(d2) + "," + std::string(to_string(id)) + "," + tuning + "," + format_number(r.adb_factor) +
             "," + format_number(r.adqr) + "\n";
    }
  }
  const fs::path out(f.out);
  write_file(out / "risk.csv", csv);
  std::cerr << "wrote " << (out / "risk.csv").string() << "\n";

  if (f.dominance) {
    const DominanceReport rep = dominance_report(base, grid);
    nlohmann::json j;
    j["p"] = base.p;
    j["tr_c_inv"] = base.tr_c_inv;
    j["sigma2"] = base.sigma2;
    j["alpha"] = base.alpha;
    j["re_beats_lse_below"] = rep.re_lse_boundary;
    if (rep.pte_lse_boundary) j["pte_beats_lse_below"] = *rep.pte_lse_boundary;
    j["pairs"] = nlohmann::json::array();
    for (const auto& pc : rep.pairs) {
      j["pairs"].push_back({{"first", std::string(to_string(pc.first))},
                            {"second", std::string(to_string(pc.second))},
                            {"first_better_at", pc.first_better},
                            {"second_better_at", pc.second_better},
                            {"tied_at", pc.tied}});
      std::cout << to_string(pc.first) << " vs " << to_string(pc.second) << ": first better at "
                << pc.first_better.size() << ", second better at " << pc.second_better.size() << ", tied at "
                << pc.tied.size() << " of " << rep.delta2.size() << " grid points\n";
    }
    write_file(out / "dominance.json", j.dump(2) + "\n");
  }
  return 0;
}

struct PlotFlags {
  std::string in;
  std::optional<std::string> out;
  std::string title;
  std::optional<double> cap;
  bool include_lse = false;
};

int cmd_plot(const PlotFlags& f) {
  const CsvTable csv = to_csv_table(read_file(f.in));
  csv.column("estimator");
  csv.column("tuning");
  const std::size_t iy = csv.column("rel_eff");
  for (const auto& row : csv.rows) {
    parse_number(row[0]);
    parse_number(row[iy]);
  }
  PlotOptions po;
  po.title = f.title;
  po.y_cap = f.cap;
  po.include_lse = f.include_lse;
  const PlotResult pr = render_svg(csv, po);
  for (const auto& w : pr.warnings) std::cerr << "warning: " << w << "\n";
  const fs::path out = f.out ? fs::path(*f.out) : fs::path(f.in).parent_path() / "plot.svg";
  write_file(out, pr.svg);
  std::cerr << "wrote " << out.string() << " (" << pr.series_count << " series)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shrinkbench: shrinkage and penalty estimators, analytic risk and Monte Carlo efficiency"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SimulateFlags sf;
  auto* sim = app.add_subcommand("simulate", "run a Monte Carlo relative-efficiency experiment");
  sim->add_option("--n", sf.n, "sample size (default 100)");
  sim->add_option("--p", sf.p, "number of predictors (default 10)");
  sim->add_option("--k", sf.k, "nonzero coefficients (default p)");
  sim->add_option("--r", sf.r, "predictor equicorrelation in [0, 1) (default 0)");
  sim->add_option("--reps", sf.reps, "replications per cell (default 2000)");
  sim->add_option("--sigma", sf.sigma, "error standard deviation (default 5)");
  sim->add_option("--seed", sf.seed, "master seed");
  sim->add_option("--grid", sf.grid, "Delta^2 values: 'standard', a,b,c or lo:hi[:step]");
  sim->add_option("--estimators", sf.estimators,
                  "comma list: lse,re,pte:<a>,ipt:<a>,s,s+,rr,lasso,alasso,scad,en:<mix>,en25,en50,en75");
  sim->add_option("--preset", sf.preset, "table1..table10, fig1..fig4");
  sim->add_option("--out", sf.out, "output directory")->capture_default_str();
  sim->add_flag("--fixed-design", sf.fixed_design, "draw X once per cell");
  sim->add_option("--delta2-mapping", sf.mapping, "noncentrality (default) or euclidean");
  sim->add_option("--kappa", sf.kappa, "ridge tuning: plugin (default) or fixed:<v>");
  sim->add_option("--folds", sf.folds, "cross-validation folds (default 10)");
  sim->add_option("--from-manifest", sf.from_manifest, "rerun the configuration recorded in a manifest.json");

  RiskFlags rf;
  auto* risk = app.add_subcommand("risk", "tabulate analytic ADB factors and ADQR over Delta^2");
  risk->add_option("--p", rf.p, "number of predictors")->capture_default_str();
  risk->add_option("--sigma2", rf.sigma2, "error variance")->capture_default_str();
  risk->add_option("--trcinv", rf.trcinv, "tr C^-1 (default p)");
  risk->add_option("--alpha", rf.alpha, "preliminary test level")->capture_default_str();
  risk->add_option("--grid", rf.grid, "Delta^2 values: 'standard', a,b,c or lo:hi[:step]")->capture_default_str();
  risk->add_option("--kappa", rf.kappa, "ridge kappa: optimal or fixed:<v>")->capture_default_str();
  risk->add_option("--out", rf.out, "output directory")->capture_default_str();
  risk->add_flag("--dominance", rf.dominance, "also write dominance.json and print a summary");

  PlotFlags pf;
  auto* plot = app.add_subcommand("plot", "render an SVG relative-efficiency chart from a table CSV");
  plot->add_option("--in", pf.in, "table.csv")->required();
  plot->add_option("--out", pf.out, "SVG path (default plot.svg next to the input)");
  plot->add_option("--title", pf.title, "chart title");
  plot->add_option("--cap", pf.cap, "y-axis cap; Inf and larger values are drawn at the cap");
  plot->add_flag("--include-lse", pf.include_lse, "draw the LSE series too");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sim) return cmd_simulate(sf, std::vector<std::string>(argv, argv + argc));
    if (*risk) return cmd_risk(rf);
    if (*plot) return cmd_plot(pf);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
