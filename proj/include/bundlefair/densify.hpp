#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "bundlefair/audit.hpp"
#include "bundlefair/dataset.hpp"
#include "bundlefair/grouping.hpp"
#include "bundlefair/reference.hpp"
#include "bundlefair/sparse_matrix.hpp"

namespace bundlefair {

// Expands a sparse audit problem into the dense form the brute-force
// implementation consumes.
inline reference::Instance densify(const InteractionDataset& ds,
                                   const SplitDataset& splits,
                                   const RecommendationRun& run,
                                   const GroupAssignment& bundle_groups,
                                   const GroupAssignment& item_groups, int k,
                                   double gamma, bool smoothing = true) {
  reference::Instance inst;
  inst.n_users = ds.n_users();
  inst.n_bundles = ds.n_bundles();
  inst.n_items = ds.n_items();
  inst.k = k;
  inst.gamma = gamma;
  inst.smoothing = smoothing;

  const auto dense = [](const SparseBinaryMatrix& m) {
    std::vector<std::vector<int>> d(
        static_cast<std::size_t>(m.rows()),
        std::vector<int>(static_cast<std::size_t>(m.cols()), 0));
    for (int r = 0; r < m.rows(); ++r) {
      for (int c : m.row(r)) {
        d[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = 1;
      }
    }
    return d;
  };
  inst.train = dense(splits.train);
  inst.test = dense(splits.test);
  inst.y = dense(ds.user_item);
  inst.z = dense(ds.bundle_item);
  inst.lists = run.lists;
  inst.bundle_popular.assign(static_cast<std::size_t>(inst.n_bundles), 0);
  for (int b = 0; b < inst.n_bundles; ++b) {
    inst.bundle_popular[static_cast<std::size_t>(b)] =
        bundle_groups.popular[static_cast<std::size_t>(b)] ? 1 : 0;
  }
  inst.item_popular.assign(static_cast<std::size_t>(inst.n_items), 0);
  for (int i = 0; i < inst.n_items; ++i) {
    inst.item_popular[static_cast<std::size_t>(i)] =
        item_groups.popular[static_cast<std::size_t>(i)] ? 1 : 0;
  }
  return inst;
}

// Largest absolute difference between an optimized report and the
// brute-force scalars: recall, nDCG and both levels' seven fairness values.
// Infinities of matching sign count as equal so strict mode stays checkable.
inline double max_scalar_gap(const AuditReport& report,
                             const reference::Scalars& ref) {
  const auto gap = [](double a, double b) {
    if (std::isinf(a) || std::isinf(b)) {
      return a == b ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (std::isnan(a) || std::isnan(b)) {
      return std::isnan(a) && std::isnan(b)
                 ? 0.0
                 : std::numeric_limits<double>::infinity();
    }
    return std::fabs(a - b);
  };
  const auto level_gap = [&](const FairnessReport& f,
                             const reference::LevelScalars& r) {
    double g = gap(f.log_eur, r.log_eur);
    g = std::max(g, gap(f.log_rur, r.log_rur));
    g = std::max(g, gap(f.eel, r.eel));
    g = std::max(g, gap(f.eer, r.eer));
    g = std::max(g, gap(f.eed, r.eed));
    g = std::max(g, gap(f.log_dp, r.log_dp));
    g = std::max(g, gap(f.target_eed, r.target_eed));
    return g;
  };
  double g = gap(*report.overall.recall, ref.recall);
  g = std::max(g, gap(*report.overall.ndcg, ref.ndcg));
  g = std::max(g, level_gap(*report.overall.bundle, ref.bundle));
  g = std::max(g, level_gap(*report.overall.item, ref.item));
  return g;
}

}  // namespace bundlefair
