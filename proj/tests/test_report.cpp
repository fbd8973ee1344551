#include <doctest.h>

#include <cmath>
#include <sstream>

#include "shrinkbench/presets.hpp"
#include "shrinkbench/report.hpp"

using namespace shrinkbench;

namespace {

EfficiencyTable sample_table() {
  SimConfig cfg;
  cfg.reps = 4;
  cfg.delta2_grid = {0.0, 1.0, 10.0};
  cfg.estimators = parse_estimator_list("re,pte:0.15,s,s+,rr,en25");
  return run_experiment(cfg, 1);
}

CsvTable parse_text(const std::string& s) {
  std::istringstream is(s);
  return parse_csv(is);
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(INFINITY) == "Inf");
  CHECK(format_number(NAN) == "NA");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333");
  CHECK(std::isinf(parse_number("Inf")));
  CHECK(std::isnan(parse_number("NA")));
  CHECK(parse_number("2.25") == 2.25);
  CHECK_THROWS_AS(parse_number("abc"), MalformedCsv);
  CHECK_THROWS_AS(parse_number(""), MalformedCsv);
}

TEST_CASE("table CSV layout") {
  const EfficiencyTable t = sample_table();
  const std::string csv = table_csv(t);
  const CsvTable parsed = parse_text(csv);
  CHECK(parsed.header == std::vector<std::string>{"delta2", "estimator", "tuning", "mse", "rel_eff"});
  CHECK(parsed.rows.size() == 3 * 7);
  CHECK(parsed.rows[0][0] == "0");
  CHECK(parsed.rows[0][1] == "LSE");
  CHECK(parsed.rows[0][4] == "1");
  CHECK(parsed.rows[1][1] == "RE");
  CHECK(parsed.rows[1][3] == "0");
  CHECK(parsed.rows[1][4] == "Inf");
  CHECK(csv.find("PTE,alpha=0.15,") != std::string::npos);
  CHECK(csv.find("EN,mix=0.25;lambda=cv10,") != std::string::npos);
  // numeric fields survive the round trip to the printed precision
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double mse = parse_number(parsed.rows[i][3]);
    CHECK(mse == doctest::Approx(t.rows[i].mse).epsilon(1e-9));
    CHECK(format_number(mse) == parsed.rows[i][3]);
  }
}

TEST_CASE("malformed CSV is rejected") {
  CHECK_THROWS_AS(parse_text(""), MalformedCsv);
  CHECK_THROWS_AS(parse_text("a,b\n1,2,3\n"), MalformedCsv);
  CHECK_THROWS_AS(parse_text("a,b\n1,2\n").column("c"), MalformedCsv);
  const CsvTable ok = parse_text("a,b\r\n1,\r\n\r\n");
  CHECK(ok.rows.size() == 1);
  CHECK(ok.rows[0][1].empty());
}

TEST_CASE("series labels") {
  CHECK(series_label("PTE", "alpha=0.15") == "PT(0.15)");
  CHECK(series_label("IPT", "alpha=0.1") == "IPT(0.1)");
  CHECK(series_label("EN", "mix=0.75;lambda=cv10") == "EN75");
  CHECK(series_label("S+", "") == "S+");
  CHECK(series_label("aLASSO", "gamma=1;lambda=cv10") == "aLASSO");
}

TEST_CASE("SVG plot of a table") {
  const CsvTable csv = parse_text(table_csv(sample_table()));
  PlotOptions opt;
  opt.title = "p=10 & r=0";
  const PlotResult r = render_svg(csv, opt);
  CHECK(r.series_count == 6);
  CHECK(r.warnings.empty());
  CHECK(r.svg.rfind("<svg", 0) == 0);
  CHECK(count(r.svg, "class=\"reference\"") == 1);
  CHECK(count(r.svg, "class=\"series\"") == 6);
  CHECK(count(r.svg, "class=\"legend\"") == 6);
  CHECK(r.svg.find("p=10 &amp; r=0") != std::string::npos);
  CHECK(r.svg.find("data-label=\"LSE\"") == std::string::npos);
  // RE is Inf at the origin: drawn as an off-scale marker
  CHECK(count(r.svg, "class=\"offscale\"") >= 1);
  // every plotted value appears verbatim in a tooltip
  for (const auto& row : csv.rows) {
    if (row[1] == "LSE" || row[4] == "NA") continue;
    const std::string tip = series_label(row[1], row[2]) + " delta2=" + row[0] + " rel_eff=" + row[4];
    CHECK(r.svg.find(tip) != std::string::npos);
  }
  PlotOptions with_lse;
  with_lse.include_lse = true;
  CHECK(render_svg(csv, with_lse).series_count == 7);
}

TEST_CASE("empty series and caps") {
  const std::string text =
      "delta2,estimator,tuning,mse,rel_eff\n"
      "0,LSE,,1,1\n0,RR,kappa=plugin,0,NA\n0,S,,0.2,5\n0,RE,,0,Inf\n"
      "1,LSE,,1,1\n1,RR,kappa=plugin,0.5,NA\n1,S,,0.3,3.3\n1,RE,,0.1,10\n";
  PlotOptions opt;
  opt.y_cap = 4.0;
  const PlotResult r = render_svg(parse_text(text), opt);
  CHECK(r.series_count == 2);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("RR") != std::string::npos);
  // S at 5 and RE at Inf and 10 exceed the cap of 4
  CHECK(count(r.svg, "class=\"offscale\"") == 3);
  CHECK(r.svg.find("capped at 4") != std::string::npos);
  CHECK(r.svg.find("rel_eff=Inf") != std::string::npos);

  const PlotResult none = render_svg(parse_text("delta2,estimator,tuning,mse,rel_eff\n0,LSE,,1,1\n"));
  CHECK(none.series_count == 0);
  CHECK(!none.warnings.empty());
  CHECK_THROWS_AS(render_svg(parse_text("a,b\n1,2\n")), MalformedCsv);
}

TEST_CASE("manifest configuration round trip") {
  SimConfig cfg;
  cfg.n = 80;
  cfg.p = 12;
  cfg.k = 4;
  cfg.r = 0.9;
  cfg.delta2_grid = {0.0, 0.5, 20.0};
  cfg.reps = 17;
  cfg.sigma = 2.5;
  cfg.seed = 0xFFFFFFFFFFFFull;
  cfg.estimators = parse_estimator_list("re,pte:0.2,ipt:0.1,s+,rr,lasso,alasso,scad,en75");
  cfg.fixed_design = true;
  cfg.mapping = Delta2Mapping::Euclidean;
  cfg.kappa = {false, 0.25};
  cfg.folds = 5;
  cfg.n_lambda = 30;
  cfg.unit_signal = 1.0;
  const nlohmann::json j = config_to_json(cfg);
  const SimConfig back = config_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.n == 80);
  CHECK(back.p == 12);
  CHECK(back.k == 4);
  CHECK(back.r == 0.9);
  CHECK(back.delta2_grid == cfg.delta2_grid);
  CHECK(back.reps == 17);
  CHECK(back.sigma == 2.5);
  CHECK(back.seed == cfg.seed);
  CHECK(back.estimators == cfg.estimators);
  CHECK(back.fixed_design);
  CHECK(back.mapping == Delta2Mapping::Euclidean);
  CHECK(!back.kappa.plugin);
  CHECK(back.kappa.fixed == 0.25);
  CHECK(back.folds == 5);
  CHECK(back.n_lambda == 30);
  CHECK(back.unit_signal == 1.0);

  SimConfig dflt;
  const SimConfig d2 = config_from_json(config_to_json(dflt));
  CHECK(!d2.k.has_value());
  CHECK(config_to_json(d2) == config_to_json(dflt));
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"n", 5}}), ConfigError);

  const nlohmann::json log = decision_log(dflt);
  for (const char* key : {"lambda_rule", "kappa_rule", "delta2_mapping", "beta_rule", "k_rule", "design", "rng"})
    CHECK(log.contains(key));
}

TEST_CASE("rule parsing") {
  CHECK(parse_kappa_rule("plugin").plugin);
  CHECK(parse_kappa_rule("fixed:1.5").fixed == 1.5);
  CHECK_THROWS_AS(parse_kappa_rule("fixed:"), ConfigError);
  CHECK_THROWS_AS(parse_kappa_rule("fixed:-1"), ConfigError);
  CHECK_THROWS_AS(parse_kappa_rule("auto"), ConfigError);
  CHECK(parse_mapping("euclidean") == Delta2Mapping::Euclidean);
  CHECK_THROWS_AS(parse_mapping("other"), ConfigError);
}

TEST_CASE("presets") {
  for (const auto& name : preset_names()) {
    const Preset p = make_preset(name);
    CHECK(p.name == name);
    CHECK(!p.panels.empty());
    for (const auto& panel : p.panels) CHECK_NOTHROW(panel.cfg.validate());
  }
  const Preset t1 = make_preset("table1");
  REQUIRE(t1.panels.size() == 1);
  const SimConfig& c1 = t1.panels[0].cfg;
  CHECK(c1.n == 100);
  CHECK(c1.p == 10);
  CHECK(c1.r == 0.0);
  CHECK(c1.reps == 2000);
  CHECK(c1.sigma == 5.0);
  CHECK(c1.delta2_grid.size() == 23);
  std::vector<std::string> names;
  for (const auto& e : c1.estimators) names.push_back(e.display_name());
  CHECK(names == std::vector<std::string>{"LSE", "RE", "PT(0.05)", "PT(0.15)", "PT(0.2)", "PT(0.25)", "IPT(0.1)", "S",
                                          "S+", "RR", "EN25", "EN50", "EN75"});
  CHECK(make_preset("table3").panels[0].cfg.r == 0.9);
  CHECK(make_preset("fig2").plot);
  const Preset t5 = make_preset("table5");
  CHECK(t5.panels.size() == 5);
  CHECK(t5.panels[2].subdir == "k3");
  CHECK(t5.panels[2].cfg.k == 3);
  CHECK(t5.panels[2].cfg.r == 0.9);
  const Preset t10 = make_preset("table10");
  CHECK(t10.by_p);
  CHECK(t10.panels.back().cfg.p == 95);
  CHECK_THROWS_AS(make_preset("table11"), ConfigError);
}
