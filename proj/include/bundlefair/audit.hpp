#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bundlefair/dataset.hpp"
#include "bundlefair/grouping.hpp"
#include "bundlefair/metrics.hpp"

namespace bundlefair {

struct EvaluateOptions {
  int k = 20;
  double gamma = 0.5;
  double pop_share = 0.2;
  double tendency_lo = 0.9;
  double tendency_hi = 1.1;
  bool bundle_level = true;
  bool item_level = true;
  bool smoothing = true;

  void validate() const;
};

// Metrics for one user population (overall or one tendency group). Fairness
// blocks are absent when the scope has no users or no exposure mass.
struct ScopeMetrics {
  std::string scope;
  int n_users = 0;
  std::optional<double> recall;
  std::optional<double> ndcg;
  std::optional<FairnessReport> bundle;
  std::optional<FairnessReport> item;
};

struct AuditReport {
  std::string dataset;
  std::string predictions;
  DatasetStats stats;
  EvaluateOptions options;
  std::optional<std::uint64_t> split_seed;
  int n_included = 0;
  int n_excluded = 0;
  int n_popular_bundles = 0;
  int n_popular_items = 0;
  ScopeMetrics overall;
  std::vector<ScopeMetrics> tendency_groups;  // g1, g2, g3
  std::optional<double> gini_bundle_interactions;
  std::optional<double> gini_bundle_run;
  std::optional<double> gini_item_interactions;
  std::optional<double> gini_item_run;
};

// Full audit: utility and fairness metrics overall and per tendency group
// (each group re-aggregates exposure, target, utility and click mass over its
// own users while keeping the global popularity partition), plus uniformity
// indices over interaction counts and recommended exposure.
AuditReport evaluate(const RecommendationRun& run,
                     const InteractionDataset& dataset,
                     const SplitDataset& splits,
                     const GroupAssignment& bundle_groups,
                     const GroupAssignment& item_groups,
                     const std::vector<Tendency>& tendency,
                     const EvaluateOptions& options,
                     const std::string& predictions_name = "");

std::string report_to_json(const AuditReport& report);
std::string report_to_csv(const AuditReport& report);

// Rounds to 12 significant digits; the report writers use it so reruns are
// byte-identical.
std::string format_float(double value);

}  // namespace bundlefair
