#include "bundlefair/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bundlefair/errors.hpp"

namespace bundlefair {

namespace {

void check_groups(const GroupAssignment& groups, Level level, int n_bundles,
                  int n_items) {
  if (groups.entity_kind != level) {
    throw AuditError(errc::config,
                     "group assignment is for the wrong entity level");
  }
  const auto expected =
      static_cast<std::size_t>(level == Level::Bundle ? n_bundles : n_items);
  if (groups.popular.size() != expected) {
    throw AuditError(errc::dimension_mismatch,
                     "group assignment covers " +
                         std::to_string(groups.popular.size()) +
                         " entities, expected " + std::to_string(expected));
  }
}

void check_lists(const RecommendationRun& run,
                 const SparseBinaryMatrix& bundle_item, Level level) {
  const int n_bundles = bundle_item.rows();
  for (const auto& list : run.lists) {
    for (int b : list) {
      if (b < 0 || b >= n_bundles) {
        throw AuditError(errc::out_of_range,
                         "recommended bundle " + std::to_string(b) +
                             " outside [0, " + std::to_string(n_bundles) +
                             ")");
      }
      if (level == Level::Item && bundle_item.row(b).empty()) {
        throw AuditError(errc::empty_bundle,
                         "recommended bundle " + std::to_string(b) +
                             " has no items");
      }
    }
  }
}

}  // namespace

void BrowsingModel::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw AuditError(errc::config, "patience parameter must be in (0, 1)");
  }
}

double BrowsingModel::weight(int rank) const {
  validate();
  if (rank < 1) {
    throw AuditError(errc::out_of_range, "rank must be at least 1");
  }
  return gamma * std::pow(1.0 - gamma, rank - 1);
}

double BrowsingModel::prefix_mass(int depth) const {
  validate();
  if (depth < 0) {
    throw AuditError(errc::out_of_range, "depth must be non-negative");
  }
  return 1.0 - std::pow(1.0 - gamma, depth);
}

GroupExposure& GroupExposure::normalize() {
  const double t = total();
  if (!(t > 0.0)) {
    throw AuditError(errc::degenerate_input,
                     "cannot normalize zero group exposure");
  }
  popular /= t;
  unpopular /= t;
  normalized = true;
  return *this;
}

ExposureVector bundle_exposure(const std::vector<int>& list, int n_bundles,
                               const BrowsingModel& model) {
  model.validate();
  ExposureVector a;
  a.level = Level::Bundle;
  a.values.assign(static_cast<std::size_t>(n_bundles), 0.0);
  double w = model.gamma;
  for (int b : list) {
    if (b < 0 || b >= n_bundles) {
      throw AuditError(errc::out_of_range,
                       "bundle " + std::to_string(b) + " outside [0, " +
                           std::to_string(n_bundles) + ")");
    }
    a.values[static_cast<std::size_t>(b)] += w;
    w *= 1.0 - model.gamma;
  }
  return a;
}

ExposureVector item_exposure(const std::vector<int>& list,
                             const SparseBinaryMatrix& bundle_item,
                             const BrowsingModel& model) {
  model.validate();
  ExposureVector a;
  a.level = Level::Item;
  a.values.assign(static_cast<std::size_t>(bundle_item.cols()), 0.0);
  double w = model.gamma;
  for (int b : list) {
    if (b < 0 || b >= bundle_item.rows()) {
      throw AuditError(errc::out_of_range,
                       "bundle " + std::to_string(b) + " outside [0, " +
                           std::to_string(bundle_item.rows()) + ")");
    }
    const auto items = bundle_item.row(b);
    if (items.empty()) {
      throw AuditError(errc::empty_bundle,
                       "bundle " + std::to_string(b) + " has no items");
    }
    const double share = w / static_cast<double>(items.size());
    for (int i : items) a.values[static_cast<std::size_t>(i)] += share;
    w *= 1.0 - model.gamma;
  }
  return a;
}

GroupExposure group_exposure(const ExposureVector& a,
                             const GroupAssignment& groups) {
  if (a.level != groups.entity_kind) {
    throw AuditError(errc::config,
                     "exposure vector and group assignment levels differ");
  }
  if (a.values.size() != groups.popular.size()) {
    throw AuditError(errc::dimension_mismatch,
                     "exposure vector and group assignment sizes differ");
  }
  GroupExposure eps;
  for (std::size_t e = 0; e < a.values.size(); ++e) {
    if (groups.popular[e]) {
      eps.popular += a.values[e];
    } else {
      eps.unpopular += a.values[e];
    }
  }
  return eps;
}

BundleItemFractions bundle_item_fractions(const SparseBinaryMatrix& bundle_item,
                                          const GroupAssignment& item_groups) {
  check_groups(item_groups, Level::Item, bundle_item.rows(),
               bundle_item.cols());
  BundleItemFractions f;
  const auto n = static_cast<std::size_t>(bundle_item.rows());
  f.popular.assign(n, 0.0);
  f.unpopular.assign(n, 0.0);
  for (int b = 0; b < bundle_item.rows(); ++b) {
    const auto items = bundle_item.row(b);
    if (items.empty()) continue;
    int n_pop = 0;
    for (int i : items) n_pop += item_groups.popular[static_cast<std::size_t>(i)];
    const auto size = static_cast<double>(items.size());
    f.popular[static_cast<std::size_t>(b)] = n_pop / size;
    f.unpopular[static_cast<std::size_t>(b)] =
        (static_cast<double>(items.size()) - n_pop) / size;
  }
  return f;
}

PerUserGroupMass per_user_exposure_mass(const RecommendationRun& run,
                                        const GroupAssignment& groups,
                                        const BrowsingModel& model,
                                        Level level,
                                        const SparseBinaryMatrix& bundle_item) {
  model.validate();
  check_groups(groups, level, bundle_item.rows(), bundle_item.cols());
  check_lists(run, bundle_item, level);

  const auto n_users = static_cast<int>(run.lists.size());
  PerUserGroupMass mass;
  mass.popular.assign(static_cast<std::size_t>(n_users), 0.0);
  mass.unpopular.assign(static_cast<std::size_t>(n_users), 0.0);

  BundleItemFractions frac;
  if (level == Level::Item) frac = bundle_item_fractions(bundle_item, groups);

#pragma omp parallel for schedule(static)
  for (int u = 0; u < n_users; ++u) {
    const auto& list = run.lists[static_cast<std::size_t>(u)];
    double plus = 0.0;
    double minus = 0.0;
    double w = model.gamma;
    for (int b : list) {
      if (level == Level::Bundle) {
        if (groups.popular[static_cast<std::size_t>(b)]) {
          plus += w;
        } else {
          minus += w;
        }
      } else {
        plus += w * frac.popular[static_cast<std::size_t>(b)];
        minus += w * frac.unpopular[static_cast<std::size_t>(b)];
      }
      w *= 1.0 - model.gamma;
    }
    mass.popular[static_cast<std::size_t>(u)] = plus;
    mass.unpopular[static_cast<std::size_t>(u)] = minus;
  }
  return mass;
}

IdealShares ideal_target_shares(int m, int n, int k,
                                const BrowsingModel& model) {
  model.validate();
  if (m < 0 || n < m || k < 1) {
    throw AuditError(errc::out_of_range,
                     "need 0 <= relevant <= total and k >= 1");
  }
  IdealShares s;
  if (m > 0) {
    s.relevant_each = model.prefix_mass(std::min(m, k)) / m;
  }
  if (m < k && n > m) {
    s.nonrelevant_each =
        (model.prefix_mass(k) - model.prefix_mass(m)) / (n - m);
  }
  return s;
}

PerUserGroupMass per_user_target_mass(const SparseBinaryMatrix& test,
                                      const GroupAssignment& groups,
                                      const BrowsingModel& model, int k,
                                      Level level,
                                      const SparseBinaryMatrix& bundle_item) {
  model.validate();
  if (k < 1) throw AuditError(errc::config, "k must be at least 1");
  check_groups(groups, level, bundle_item.rows(), bundle_item.cols());
  if (test.cols() != bundle_item.rows()) {
    throw AuditError(errc::dimension_mismatch,
                     "test matrix and bundle catalog sizes differ");
  }

  const int n_users = test.rows();
  const int n_bundles = test.cols();
  PerUserGroupMass mass;
  mass.popular.assign(static_cast<std::size_t>(n_users), 0.0);
  mass.unpopular.assign(static_cast<std::size_t>(n_users), 0.0);

  BundleItemFractions frac;
  double all_plus = 0.0;
  double all_minus = 0.0;
  if (level == Level::Item) {
    frac = bundle_item_fractions(bundle_item, groups);
    for (int b = 0; b < n_bundles; ++b) {
      all_plus += frac.popular[static_cast<std::size_t>(b)];
      all_minus += frac.unpopular[static_cast<std::size_t>(b)];
    }
  } else {
    for (int b = 0; b < n_bundles; ++b) {
      if (groups.popular[static_cast<std::size_t>(b)]) {
        all_plus += 1.0;
      } else {
        all_minus += 1.0;
      }
    }
  }

#pragma omp parallel for schedule(static)
  for (int u = 0; u < n_users; ++u) {
    const auto row = test.row(u);
    const int m = static_cast<int>(row.size());
    if (m == 0) continue;
    const auto shares = ideal_target_shares(m, n_bundles, k, model);
    // Relevant mass per group, then residual spread over the complement.
    double rel_plus = 0.0;
    double rel_minus = 0.0;
    for (int b : row) {
      if (level == Level::Bundle) {
        if (groups.popular[static_cast<std::size_t>(b)]) {
          rel_plus += 1.0;
        } else {
          rel_minus += 1.0;
        }
      } else {
        rel_plus += frac.popular[static_cast<std::size_t>(b)];
        rel_minus += frac.unpopular[static_cast<std::size_t>(b)];
      }
    }
    mass.popular[static_cast<std::size_t>(u)] =
        shares.relevant_each * rel_plus +
        shares.nonrelevant_each * (all_plus - rel_plus);
    mass.unpopular[static_cast<std::size_t>(u)] =
        shares.relevant_each * rel_minus +
        shares.nonrelevant_each * (all_minus - rel_minus);
  }
  return mass;
}

namespace {

GroupExposure mean_over_users(const PerUserGroupMass& mass,
                              const std::vector<int>& included) {
  if (included.empty()) {
    throw AuditError(errc::no_users, "no users with test interactions");
  }
  GroupExposure eps;
  for (int u : included) {
    eps.popular += mass.popular[static_cast<std::size_t>(u)];
    eps.unpopular += mass.unpopular[static_cast<std::size_t>(u)];
  }
  eps.popular /= static_cast<double>(included.size());
  eps.unpopular /= static_cast<double>(included.size());
  return eps;
}

}  // namespace

GroupExposure expected_group_exposure(const RecommendationRun& run,
                                      const GroupAssignment& groups,
                                      const BrowsingModel& model, Level level,
                                      const SparseBinaryMatrix& bundle_item,
                                      const std::vector<int>& included) {
  const auto mass = per_user_exposure_mass(run, groups, model, level,
                                           bundle_item);
  return mean_over_users(mass, included).normalize();
}

GroupExposure target_group_exposure(const SparseBinaryMatrix& test,
                                    const GroupAssignment& groups,
                                    const BrowsingModel& model, int k,
                                    Level level,
                                    const SparseBinaryMatrix& bundle_item,
                                    const std::vector<int>& included) {
  const auto mass =
      per_user_target_mass(test, groups, model, k, level, bundle_item);
  return mean_over_users(mass, included).normalize();
}

std::vector<double> accumulated_exposure(const RecommendationRun& run,
                                         const BrowsingModel& model,
                                         Level level, int n_bundles,
                                         const SparseBinaryMatrix& bundle_item,
                                         const std::vector<int>& users) {
  model.validate();
  const auto n_entities =
      static_cast<std::size_t>(level == Level::Bundle ? n_bundles
                                                      : bundle_item.cols());
  std::vector<double> total(n_entities, 0.0);
  for (int u : users) {
    const auto& list = run.lists[static_cast<std::size_t>(u)];
    double w = model.gamma;
    for (int b : list) {
      if (b < 0 || b >= bundle_item.rows()) {
        throw AuditError(errc::out_of_range,
                         "recommended bundle " + std::to_string(b) +
                             " outside the catalog");
      }
      if (level == Level::Bundle) {
        total[static_cast<std::size_t>(b)] += w;
      } else {
        const auto items = bundle_item.row(b);
        if (items.empty()) {
          throw AuditError(errc::empty_bundle,
                           "recommended bundle " + std::to_string(b) +
                               " has no items");
        }
        const double share = w / static_cast<double>(items.size());
        for (int i : items) total[static_cast<std::size_t>(i)] += share;
      }
      w *= 1.0 - model.gamma;
    }
  }
  return total;
}

}  // namespace bundlefair
