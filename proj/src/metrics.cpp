#include "bundlefair/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bundlefair/errors.hpp"

namespace bundlefair {

namespace {

void check_relevance(const RelevanceModel& rel, const GroupAssignment& groups) {
  if (rel.test == nullptr || rel.bundle_item == nullptr) {
    throw AuditError(errc::config, "relevance model is missing its matrices");
  }
  if (rel.test->cols() != rel.bundle_item->rows()) {
    throw AuditError(errc::dimension_mismatch,
                     "test matrix and bundle catalog sizes differ");
  }
  if (rel.level != groups.entity_kind) {
    throw AuditError(errc::config,
                     "relevance model and group assignment levels differ");
  }
  const auto expected = static_cast<std::size_t>(
      rel.level == Level::Bundle ? rel.bundle_item->rows()
                                 : rel.bundle_item->cols());
  if (groups.popular.size() != expected) {
    throw AuditError(errc::dimension_mismatch,
                     "group assignment covers " +
                         std::to_string(groups.popular.size()) +
                         " entities, expected " + std::to_string(expected));
  }
}

void check_run_against(const RecommendationRun& run,
                       const SparseBinaryMatrix& test) {
  if (static_cast<int>(run.lists.size()) != test.rows()) {
    throw AuditError(errc::dimension_mismatch,
                     "run covers " + std::to_string(run.lists.size()) +
                         " users, test split has " +
                         std::to_string(test.rows()));
  }
}

double mean_over(const std::vector<double>& values,
                 const std::vector<int>& included) {
  if (included.empty()) {
    throw AuditError(errc::no_users, "no users with test interactions");
  }
  double sum = 0.0;
  for (int u : included) sum += values[static_cast<std::size_t>(u)];
  return sum / static_cast<double>(included.size());
}

}  // namespace

std::vector<double> per_user_recall(const RecommendationRun& run,
                                    const SparseBinaryMatrix& test, int k) {
  if (k < 1) throw AuditError(errc::config, "k must be at least 1");
  check_run_against(run, test);
  std::vector<double> recall(static_cast<std::size_t>(test.rows()), 0.0);
#pragma omp parallel for schedule(static)
  for (int u = 0; u < test.rows(); ++u) {
    const auto row = test.row(u);
    if (row.empty()) continue;
    const auto& list = run.lists[static_cast<std::size_t>(u)];
    const auto depth = std::min<std::size_t>(list.size(),
                                             static_cast<std::size_t>(k));
    int hits = 0;
    for (std::size_t p = 0; p < depth; ++p) {
      hits += std::binary_search(row.begin(), row.end(), list[p]);
    }
    recall[static_cast<std::size_t>(u)] =
        static_cast<double>(hits) / static_cast<double>(row.size());
  }
  return recall;
}

std::vector<double> per_user_ndcg(const RecommendationRun& run,
                                  const SparseBinaryMatrix& test, int k) {
  if (k < 1) throw AuditError(errc::config, "k must be at least 1");
  check_run_against(run, test);
  std::vector<double> ndcg(static_cast<std::size_t>(test.rows()), 0.0);
#pragma omp parallel for schedule(static)
  for (int u = 0; u < test.rows(); ++u) {
    const auto row = test.row(u);
    if (row.empty()) continue;
    const auto& list = run.lists[static_cast<std::size_t>(u)];
    const auto depth = std::min<std::size_t>(list.size(),
                                             static_cast<std::size_t>(k));
    double dcg = 0.0;
    for (std::size_t p = 0; p < depth; ++p) {
      if (std::binary_search(row.begin(), row.end(), list[p])) {
        dcg += 1.0 / std::log2(static_cast<double>(p) + 2.0);
      }
    }
    const auto ideal = std::min<std::size_t>(row.size(),
                                             static_cast<std::size_t>(k));
    double idcg = 0.0;
    for (std::size_t p = 0; p < ideal; ++p) {
      idcg += 1.0 / std::log2(static_cast<double>(p) + 2.0);
    }
    ndcg[static_cast<std::size_t>(u)] = dcg / idcg;
  }
  return ndcg;
}

double recall_at_k(const RecommendationRun& run, const SparseBinaryMatrix& test,
                   int k, const std::vector<int>& included) {
  return mean_over(per_user_recall(run, test, k), included);
}

double ndcg_at_k(const RecommendationRun& run, const SparseBinaryMatrix& test,
                 int k, const std::vector<int>& included) {
  return mean_over(per_user_ndcg(run, test, k), included);
}

PerUserGroupMass per_user_utility_mass(const RelevanceModel& rel,
                                       const GroupAssignment& groups) {
  check_relevance(rel, groups);
  const auto& test = *rel.test;
  const auto& bundle_item = *rel.bundle_item;
  PerUserGroupMass mass;
  mass.popular.assign(static_cast<std::size_t>(test.rows()), 0.0);
  mass.unpopular.assign(static_cast<std::size_t>(test.rows()), 0.0);

  BundleItemFractions frac;
  if (rel.level == Level::Item) {
    frac = bundle_item_fractions(bundle_item, groups);
  }

#pragma omp parallel for schedule(static)
  for (int u = 0; u < test.rows(); ++u) {
    double plus = 0.0;
    double minus = 0.0;
    for (int b : test.row(u)) {
      if (rel.level == Level::Bundle) {
        if (groups.popular[static_cast<std::size_t>(b)]) {
          plus += 1.0;
        } else {
          minus += 1.0;
        }
      } else {
        plus += frac.popular[static_cast<std::size_t>(b)];
        minus += frac.unpopular[static_cast<std::size_t>(b)];
      }
    }
    mass.popular[static_cast<std::size_t>(u)] = plus;
    mass.unpopular[static_cast<std::size_t>(u)] = minus;
  }
  return mass;
}

PerUserGroupMass per_user_ctr_mass(const RecommendationRun& run,
                                   const RelevanceModel& rel,
                                   const GroupAssignment& groups,
                                   const BrowsingModel& model) {
  model.validate();
  check_relevance(rel, groups);
  const auto& test = *rel.test;
  const auto& bundle_item = *rel.bundle_item;
  check_run_against(run, test);

  const int n_users = test.rows();
  PerUserGroupMass mass;
  mass.popular.assign(static_cast<std::size_t>(n_users), 0.0);
  mass.unpopular.assign(static_cast<std::size_t>(n_users), 0.0);

  if (rel.level == Level::Bundle) {
#pragma omp parallel for schedule(static)
    for (int u = 0; u < n_users; ++u) {
      const auto row = test.row(u);
      if (row.empty()) continue;
      double plus = 0.0;
      double minus = 0.0;
      double w = model.gamma;
      for (int b : run.lists[static_cast<std::size_t>(u)]) {
        if (std::binary_search(row.begin(), row.end(), b)) {
          if (groups.popular[static_cast<std::size_t>(b)]) {
            plus += w;
          } else {
            minus += w;
          }
        }
        w *= 1.0 - model.gamma;
      }
      mass.popular[static_cast<std::size_t>(u)] = plus;
      mass.unpopular[static_cast<std::size_t>(u)] = minus;
    }
    return mass;
  }

  // Item level: per-thread dense relevance scratch, rebuilt per user from the
  // user's relevant bundles, then read back while walking the list.
#pragma omp parallel
  {
    std::vector<double> relevance(static_cast<std::size_t>(bundle_item.cols()),
                                  0.0);
    std::vector<int> touched;
#pragma omp for schedule(static)
    for (int u = 0; u < n_users; ++u) {
      const auto row = test.row(u);
      if (row.empty()) continue;
      for (int b : row) {
        const auto items = bundle_item.row(b);
        if (items.empty()) continue;
        const double share = 1.0 / static_cast<double>(items.size());
        for (int i : items) {
          if (relevance[static_cast<std::size_t>(i)] == 0.0) {
            touched.push_back(i);
          }
          relevance[static_cast<std::size_t>(i)] += share;
        }
      }
      double plus = 0.0;
      double minus = 0.0;
      double w = model.gamma;
      for (int b : run.lists[static_cast<std::size_t>(u)]) {
        const auto items = bundle_item.row(b);
        if (!items.empty()) {
          const double share = w / static_cast<double>(items.size());
          for (int i : items) {
            const double r = relevance[static_cast<std::size_t>(i)];
            if (r == 0.0) continue;
            if (groups.popular[static_cast<std::size_t>(i)]) {
              plus += share * r;
            } else {
              minus += share * r;
            }
          }
        }
        w *= 1.0 - model.gamma;
      }
      mass.popular[static_cast<std::size_t>(u)] = plus;
      mass.unpopular[static_cast<std::size_t>(u)] = minus;
      for (int i : touched) relevance[static_cast<std::size_t>(i)] = 0.0;
      touched.clear();
    }
  }
  return mass;
}

GroupUtility group_utility(const RelevanceModel& rel,
                           const GroupAssignment& groups,
                           const std::vector<int>& included) {
  if (included.empty()) {
    throw AuditError(errc::no_users, "no users with test interactions");
  }
  const auto mass = per_user_utility_mass(rel, groups);
  GroupUtility util;
  for (int u : included) {
    util.popular += mass.popular[static_cast<std::size_t>(u)];
    util.unpopular += mass.unpopular[static_cast<std::size_t>(u)];
  }
  return util;
}

GroupCTR group_ctr(const RecommendationRun& run, const RelevanceModel& rel,
                   const GroupAssignment& groups, const BrowsingModel& model,
                   const std::vector<int>& included) {
  if (included.empty()) {
    throw AuditError(errc::no_users, "no users with test interactions");
  }
  const auto mass = per_user_ctr_mass(run, rel, groups, model);
  GroupCTR ctr;
  for (int u : included) {
    ctr.popular += mass.popular[static_cast<std::size_t>(u)];
    ctr.unpopular += mass.unpopular[static_cast<std::size_t>(u)];
  }
  ctr.popular /= static_cast<double>(included.size());
  ctr.unpopular /= static_cast<double>(included.size());
  return ctr;
}

FairnessReport fairness_metrics(const GroupExposure& eps,
                                const GroupExposure& target,
                                const GroupUtility& util, const GroupCTR& ctr,
                                bool smoothing) {
  if (!eps.normalized || !target.normalized) {
    throw AuditError(errc::config,
                     "fairness metrics need normalized exposure vectors");
  }
  const auto floor_op = [smoothing](double x) {
    return smoothing ? std::max(x, kSmoothingFloor) : x;
  };

  FairnessReport r;
  r.log_eur = std::log((floor_op(eps.popular) / floor_op(util.popular)) /
                       (floor_op(eps.unpopular) / floor_op(util.unpopular)));
  r.log_rur = std::log((floor_op(ctr.popular) / floor_op(util.popular)) /
                       (floor_op(ctr.unpopular) / floor_op(util.unpopular)));
  r.log_dp = std::log(floor_op(eps.popular) / floor_op(eps.unpopular));

  const double dp = eps.popular - target.popular;
  const double dm = eps.unpopular - target.unpopular;
  r.eel = dp * dp + dm * dm;
  r.eer = 2.0 * (eps.popular * target.popular +
                 eps.unpopular * target.unpopular);
  r.eed = eps.popular * eps.popular + eps.unpopular * eps.unpopular;
  r.target_eed = target.popular * target.popular +
                 target.unpopular * target.unpopular;
  return r;
}

double gini_index(const std::vector<double>& values) {
  const auto n = values.size();
  if (n < 2) {
    throw AuditError(errc::degenerate_input,
                     "uniformity needs at least 2 values");
  }
  double total = 0.0;
  for (double v : values) {
    if (v < 0.0) {
      throw AuditError(errc::degenerate_input,
                       "uniformity needs non-negative values");
    }
    total += v;
  }
  if (!(total > 0.0)) {
    throw AuditError(errc::degenerate_input,
                     "uniformity needs at least one positive value");
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double gini = 0.0;
  const auto dn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double coeff = (2.0 * (static_cast<double>(k) + 1.0) - dn - 1.0) /
                         (dn - 1.0);
    gini += coeff * (sorted[k] / total);
  }
  return gini;
}

}  // namespace bundlefair
