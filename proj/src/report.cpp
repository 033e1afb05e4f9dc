#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "bundlefair/audit.hpp"
#include "json.hpp"

namespace bundlefair {

namespace {

using ordered_json = nlohmann::ordered_json;

// Doubles are value-rounded to 12 significant digits before serialization so
// the emitted text never exposes platform noise below that precision.
ordered_json json_float(double value) {
  if (std::isnan(value)) return nullptr;
  if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
  return std::strtod(format_float(value).c_str(), nullptr);
}

ordered_json json_optional(const std::optional<double>& value) {
  if (!value) return nullptr;
  return json_float(*value);
}

ordered_json fairness_json(const FairnessReport& f) {
  ordered_json j;
  j["log_eur"] = json_float(f.log_eur);
  j["log_rur"] = json_float(f.log_rur);
  j["eel"] = json_float(f.eel);
  j["eer"] = json_float(f.eer);
  j["eed"] = json_float(f.eed);
  j["log_dp"] = json_float(f.log_dp);
  j["target_eed"] = json_float(f.target_eed);
  return j;
}

ordered_json scope_json(const ScopeMetrics& s) {
  ordered_json j;
  j["n_users"] = s.n_users;
  j["recall_at_k"] = json_optional(s.recall);
  j["ndcg_at_k"] = json_optional(s.ndcg);
  j["bundle"] = s.bundle ? fairness_json(*s.bundle) : ordered_json(nullptr);
  j["item"] = s.item ? fairness_json(*s.item) : ordered_json(nullptr);
  return j;
}

}  // namespace

std::string format_float(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string report_to_json(const AuditReport& report) {
  ordered_json meta;
  meta["dataset"] = report.dataset;
  meta["predictions"] = report.predictions;
  meta["n_users"] = report.stats.n_users;
  meta["n_bundles"] = report.stats.n_bundles;
  meta["n_items"] = report.stats.n_items;
  meta["n_user_bundle"] = report.stats.n_ub;
  meta["n_user_item"] = report.stats.n_ui;
  meta["avg_items_per_bundle"] = json_float(report.stats.avg_items_per_bundle);
  meta["user_bundle_density"] = json_float(report.stats.ub_density);
  meta["k"] = report.options.k;
  meta["gamma"] = json_float(report.options.gamma);
  meta["pop_share"] = json_float(report.options.pop_share);
  meta["tendency_lo"] = json_float(report.options.tendency_lo);
  meta["tendency_hi"] = json_float(report.options.tendency_hi);
  auto levels = ordered_json::array();
  if (report.options.bundle_level) levels.push_back("bundle");
  if (report.options.item_level) levels.push_back("item");
  meta["levels"] = levels;
  meta["smoothing"] = report.options.smoothing;
  meta["smoothing_floor"] = json_float(kSmoothingFloor);
  meta["log_base"] = "natural";
  meta["split_seed"] = report.split_seed
                           ? ordered_json(*report.split_seed)
                           : ordered_json(nullptr);
  meta["n_included_users"] = report.n_included;
  meta["n_excluded_users"] = report.n_excluded;
  meta["n_popular_bundles"] = report.n_popular_bundles;
  meta["n_popular_items"] = report.n_popular_items;

  ordered_json groups;
  for (const auto& s : report.tendency_groups) {
    groups[s.scope] = scope_json(s);
  }

  ordered_json gini;
  gini["bundle_interactions"] = json_optional(report.gini_bundle_interactions);
  gini["bundle_run"] = json_optional(report.gini_bundle_run);
  gini["item_interactions"] = json_optional(report.gini_item_interactions);
  gini["item_run"] = json_optional(report.gini_item_run);

  ordered_json j;
  j["metadata"] = meta;
  j["overall"] = scope_json(report.overall);
  j["tendency_groups"] = groups;
  j["gini"] = gini;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const AuditReport& report) {
  std::ostringstream out;
  out << "scope,level,metric,value\n";

  const auto row = [&out](const std::string& scope, const std::string& level,
                          const std::string& metric, const std::string& value) {
    out << scope << ',' << level << ',' << metric << ',' << value << '\n';
  };
  const auto fairness_rows = [&](const std::string& scope,
                                 const std::string& level,
                                 const FairnessReport& f) {
    row(scope, level, "log_eur", format_float(f.log_eur));
    row(scope, level, "log_rur", format_float(f.log_rur));
    row(scope, level, "eel", format_float(f.eel));
    row(scope, level, "eer", format_float(f.eer));
    row(scope, level, "eed", format_float(f.eed));
    row(scope, level, "log_dp", format_float(f.log_dp));
    row(scope, level, "target_eed", format_float(f.target_eed));
  };
  const auto scope_rows = [&](const ScopeMetrics& s) {
    row(s.scope, "", "n_users", std::to_string(s.n_users));
    if (s.recall) row(s.scope, "", "recall_at_k", format_float(*s.recall));
    if (s.ndcg) row(s.scope, "", "ndcg_at_k", format_float(*s.ndcg));
    if (s.bundle) fairness_rows(s.scope, "bundle", *s.bundle);
    if (s.item) fairness_rows(s.scope, "item", *s.item);
  };

  scope_rows(report.overall);
  for (const auto& s : report.tendency_groups) scope_rows(s);

  if (report.gini_bundle_interactions) {
    row("overall", "bundle", "gini_interactions",
        format_float(*report.gini_bundle_interactions));
  }
  if (report.gini_bundle_run) {
    row("overall", "bundle", "gini_run",
        format_float(*report.gini_bundle_run));
  }
  if (report.gini_item_interactions) {
    row("overall", "item", "gini_interactions",
        format_float(*report.gini_item_interactions));
  }
  if (report.gini_item_run) {
    row("overall", "item", "gini_run", format_float(*report.gini_item_run));
  }
  return out.str();
}

}  // namespace bundlefair
