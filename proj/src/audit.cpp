#include "bundlefair/audit.hpp"

#include <string>
#include <vector>

#include "bundlefair/errors.hpp"
#include "bundlefair/exposure.hpp"

namespace bundlefair {

void EvaluateOptions::validate() const {
  if (k < 1) throw AuditError(errc::config, "k must be at least 1");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw AuditError(errc::config, "patience parameter must be in (0, 1)");
  }
  if (!(pop_share > 0.0 && pop_share < 1.0)) {
    throw AuditError(errc::config, "popularity share must be in (0, 1)");
  }
  if (tendency_lo > tendency_hi) {
    throw AuditError(errc::config, "tendency thresholds must satisfy lo <= hi");
  }
  if (!bundle_level && !item_level) {
    throw AuditError(errc::config, "at least one level must be enabled");
  }
}

namespace {

struct LevelMasses {
  PerUserGroupMass exposure;
  PerUserGroupMass target;
  PerUserGroupMass utility;
  PerUserGroupMass ctr;
};

LevelMasses level_masses(const RecommendationRun& run,
                         const SparseBinaryMatrix& test,
                         const SparseBinaryMatrix& bundle_item,
                         const GroupAssignment& groups, Level level,
                         const EvaluateOptions& options) {
  const BrowsingModel model{options.gamma};
  RelevanceModel rel;
  rel.level = level;
  rel.test = &test;
  rel.bundle_item = &bundle_item;

  LevelMasses m;
  m.exposure = per_user_exposure_mass(run, groups, model, level, bundle_item);
  m.target =
      per_user_target_mass(test, groups, model, options.k, level, bundle_item);
  m.utility = per_user_utility_mass(rel, groups);
  m.ctr = per_user_ctr_mass(run, rel, groups, model);
  return m;
}

std::optional<FairnessReport> scope_fairness(const LevelMasses& m,
                                             const std::vector<int>& users,
                                             bool smoothing) {
  const auto n = static_cast<double>(users.size());
  GroupExposure eps;
  GroupExposure target;
  GroupUtility util;
  GroupCTR ctr;
  for (int u : users) {
    const auto i = static_cast<std::size_t>(u);
    eps.popular += m.exposure.popular[i];
    eps.unpopular += m.exposure.unpopular[i];
    target.popular += m.target.popular[i];
    target.unpopular += m.target.unpopular[i];
    util.popular += m.utility.popular[i];
    util.unpopular += m.utility.unpopular[i];
    ctr.popular += m.ctr.popular[i];
    ctr.unpopular += m.ctr.unpopular[i];
  }
  eps.popular /= n;
  eps.unpopular /= n;
  target.popular /= n;
  target.unpopular /= n;
  ctr.popular /= n;
  ctr.unpopular /= n;
  try {
    eps.normalize();
    target.normalize();
  } catch (const AuditError&) {
    // A scope whose users saw no recommendations has no exposure profile.
    return std::nullopt;
  }
  return fairness_metrics(eps, target, util, ctr, smoothing);
}

std::optional<double> safe_gini(const std::vector<double>& values) {
  try {
    return gini_index(values);
  } catch (const AuditError&) {
    return std::nullopt;
  }
}

}  // namespace

AuditReport evaluate(const RecommendationRun& run,
                     const InteractionDataset& dataset,
                     const SplitDataset& splits,
                     const GroupAssignment& bundle_groups,
                     const GroupAssignment& item_groups,
                     const std::vector<Tendency>& tendency,
                     const EvaluateOptions& options,
                     const std::string& predictions_name) {
  options.validate();
  dataset.validate();
  const int n_users = dataset.n_users();
  if (static_cast<int>(run.lists.size()) != n_users ||
      splits.test.rows() != n_users ||
      tendency.size() != static_cast<std::size_t>(n_users)) {
    throw AuditError(errc::dimension_mismatch,
                     "run, splits and tendency groups must cover every user");
  }
  if (splits.test.cols() != dataset.n_bundles()) {
    throw AuditError(errc::dimension_mismatch,
                     "test split bundle universe differs from the dataset");
  }

  const auto included = included_users(splits.test);
  if (included.empty()) {
    throw AuditError(errc::no_users, "no users with test interactions");
  }

  AuditReport report;
  report.dataset = dataset.name;
  report.predictions = predictions_name;
  report.stats = dataset_stats(dataset);
  report.options = options;
  report.split_seed = splits.seed;
  report.n_included = static_cast<int>(included.size());
  report.n_excluded = n_users - report.n_included;
  report.n_popular_bundles = bundle_groups.n_popular();
  report.n_popular_items = item_groups.n_popular();

  const auto recall = per_user_recall(run, splits.test, options.k);
  const auto ndcg = per_user_ndcg(run, splits.test, options.k);

  std::optional<LevelMasses> bundle_masses;
  std::optional<LevelMasses> item_masses;
  if (options.bundle_level) {
    bundle_masses = level_masses(run, splits.test, dataset.bundle_item,
                                 bundle_groups, Level::Bundle, options);
  }
  if (options.item_level) {
    item_masses = level_masses(run, splits.test, dataset.bundle_item,
                               item_groups, Level::Item, options);
  }

  const auto scope_metrics = [&](const std::string& name,
                                 const std::vector<int>& users) {
    ScopeMetrics s;
    s.scope = name;
    s.n_users = static_cast<int>(users.size());
    if (users.empty()) return s;
    double r = 0.0;
    double n = 0.0;
    for (int u : users) {
      r += recall[static_cast<std::size_t>(u)];
      n += ndcg[static_cast<std::size_t>(u)];
    }
    s.recall = r / static_cast<double>(users.size());
    s.ndcg = n / static_cast<double>(users.size());
    if (bundle_masses) {
      s.bundle = scope_fairness(*bundle_masses, users, options.smoothing);
    }
    if (item_masses) {
      s.item = scope_fairness(*item_masses, users, options.smoothing);
    }
    return s;
  };

  report.overall = scope_metrics("overall", included);
  for (Tendency t : {Tendency::BundleOriented, Tendency::Neutral,
                     Tendency::ItemOriented}) {
    std::vector<int> users;
    for (int u : included) {
      if (tendency[static_cast<std::size_t>(u)] == t) users.push_back(u);
    }
    report.tendency_groups.push_back(scope_metrics(tendency_name(t), users));
  }

  const BrowsingModel model{options.gamma};
  if (options.bundle_level) {
    report.gini_bundle_interactions = safe_gini(bundle_frequency(splits.train));
    report.gini_bundle_run = safe_gini(
        accumulated_exposure(run, model, Level::Bundle, dataset.n_bundles(),
                             dataset.bundle_item, included));
  }
  if (options.item_level) {
    report.gini_item_interactions = safe_gini(item_frequency(
        splits.train, dataset.bundle_item, dataset.user_item));
    report.gini_item_run = safe_gini(
        accumulated_exposure(run, model, Level::Item, dataset.n_bundles(),
                             dataset.bundle_item, included));
  }
  return report;
}

}  // namespace bundlefair
