#pragma once

// Named experiment configurations, one per table or figure of the benchmark.

#include <string>
#include <vector>

#include "shrinkbench/error.hpp"
#include "shrinkbench/sim.hpp"

namespace shrinkbench {

struct PresetPanel {
  std::string subdir;  ///< empty for single-panel presets
  SimConfig cfg;
};

struct Preset {
  std::string name;
  std::string description;
  std::vector<PresetPanel> panels;
  bool plot = false;       ///< also render plot.svg per panel
  bool by_p = false;       ///< panels vary p; a per-k summary over p is written too
};

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"table1", "table2", "table3", "table4", "table5",
                                                 "table6", "table7", "table8", "table9", "table10",
                                                 "fig1",   "fig2",   "fig3",   "fig4"};
  return names;
}

namespace detail {

inline SimConfig classical_config(double r) {
  SimConfig cfg;
  cfg.r = r;
  cfg.estimators = parse_estimator_list("re,pte:0.05,pte:0.15,pte:0.20,pte:0.25,ipt:0.10,s,s+,rr,en25,en50,en75");
  return cfg;
}

inline Preset penalty_preset(const std::string& name, int p, double r) {
  Preset pre{name, "LASSO, aLASSO and SCAD, p=" + std::to_string(p) + ", r=" + format_g(r) + ", k=1..5", {}, false,
             false};
  for (int k = 1; k <= 5; ++k) {
    SimConfig cfg;
    cfg.p = p;
    cfg.r = r;
    cfg.k = k;
    cfg.estimators = parse_estimator_list("lasso,alasso,scad");
    pre.panels.push_back({"k" + std::to_string(k), cfg});
  }
  return pre;
}

inline Preset p_varying_preset(const std::string& name, bool plot) {
  Preset pre{name, "S, S+, LASSO, aLASSO and EN as p varies, r=0.2, k in {0,1,3,5}, unit coefficients", {}, plot,
             true};
  for (int k : {0, 1, 3, 5})
    for (int p : {10, 15, 20, 25, 30, 40, 50, 60, 70, 80, 90, 95}) {
      SimConfig cfg;
      cfg.p = p;
      cfg.r = 0.2;
      cfg.k = k;
      cfg.unit_signal = 1.0;
      cfg.delta2_grid = {0.0};
      cfg.estimators = parse_estimator_list("s,s+,lasso,alasso,en25,en50,en75");
      pre.panels.push_back({"k" + std::to_string(k) + "/p" + std::to_string(p), cfg});
    }
  return pre;
}

}  // namespace detail

inline Preset make_preset(const std::string& name) {
  if (name == "table1" || name == "table2" || name == "table3") {
    const double r = name == "table1" ? 0.0 : name == "table2" ? 0.2 : 0.9;
    return {name, "classical, ridge and elastic-net estimators, p=10, r=" + format_g(r),
            {{"", detail::classical_config(r)}}, false, false};
  }
  if (name == "fig1" || name == "fig2" || name == "fig3") {
    const double r = name == "fig1" ? 0.0 : name == "fig2" ? 0.2 : 0.9;
    SimConfig cfg = detail::classical_config(r);
    cfg.estimators = parse_estimator_list("re,pte:0.15,s,s+,rr,en25,en50,en75");
    return {name, "relative-efficiency curves, p=10, r=" + format_g(r), {{"", cfg}}, true, false};
  }
  if (name == "table4") return detail::penalty_preset(name, 10, 0.2);
  if (name == "table5") return detail::penalty_preset(name, 10, 0.9);
  if (name == "table6") return detail::penalty_preset(name, 20, 0.2);
  if (name == "table7") return detail::penalty_preset(name, 20, 0.9);
  if (name == "table8") return detail::penalty_preset(name, 30, 0.2);
  if (name == "table9") return detail::penalty_preset(name, 30, 0.9);
  if (name == "table10") return detail::p_varying_preset(name, false);
  if (name == "fig4") return detail::p_varying_preset(name, true);
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace shrinkbench
