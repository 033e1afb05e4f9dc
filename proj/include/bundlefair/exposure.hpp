#pragma once

#include <vector>

#include "bundlefair/dataset.hpp"
#include "bundlefair/grouping.hpp"
#include "bundlefair/sparse_matrix.hpp"

namespace bundlefair {

// Geometric position-bias model: rank k gets weight gamma*(1-gamma)^(k-1).
struct BrowsingModel {
  double gamma = 0.5;

  void validate() const;
  double weight(int rank) const;      // rank is 1-based
  double prefix_mass(int depth) const;  // sum of weights for ranks 1..depth
};

struct ExposureVector {
  Level level = Level::Bundle;
  std::vector<double> values;
};

struct GroupExposure {
  double popular = 0.0;
  double unpopular = 0.0;
  bool normalized = false;

  double total() const { return popular + unpopular; }
  GroupExposure& normalize();
};

ExposureVector bundle_exposure(const std::vector<int>& list, int n_bundles,
                               const BrowsingModel& model);

// Each item in a recommended bundle receives the bundle's exposure divided by
// the bundle size; an item in several recommended bundles accumulates.
ExposureVector item_exposure(const std::vector<int>& list,
                             const SparseBinaryMatrix& bundle_item,
                             const BrowsingModel& model);

GroupExposure group_exposure(const ExposureVector& a,
                             const GroupAssignment& groups);

// Per-user popular/unpopular exposure mass, unnormalized, indexed by user id.
// Users with empty lists hold zeros.
struct PerUserGroupMass {
  std::vector<double> popular;
  std::vector<double> unpopular;
};

PerUserGroupMass per_user_exposure_mass(const RecommendationRun& run,
                                        const GroupAssignment& groups,
                                        const BrowsingModel& model,
                                        Level level,
                                        const SparseBinaryMatrix& bundle_item);

// Ideal-policy document shares for a user with m relevant entities out of n:
// relevant entities split the best min(m,k) position weights evenly; leftover
// positions (when m < k) spread evenly over the n-m non-relevant entities.
struct IdealShares {
  double relevant_each = 0.0;
  double nonrelevant_each = 0.0;
};

IdealShares ideal_target_shares(int m, int n, int k,
                                const BrowsingModel& model);

PerUserGroupMass per_user_target_mass(const SparseBinaryMatrix& test,
                                      const GroupAssignment& groups,
                                      const BrowsingModel& model, int k,
                                      Level level,
                                      const SparseBinaryMatrix& bundle_item);

// Mean of per-list group exposure over the included users, normalized to a
// probability vector.
GroupExposure expected_group_exposure(const RecommendationRun& run,
                                      const GroupAssignment& groups,
                                      const BrowsingModel& model, Level level,
                                      const SparseBinaryMatrix& bundle_item,
                                      const std::vector<int>& included);

// Target counterpart built from ideal rankings of test relevance.
GroupExposure target_group_exposure(const SparseBinaryMatrix& test,
                                    const GroupAssignment& groups,
                                    const BrowsingModel& model, int k,
                                    Level level,
                                    const SparseBinaryMatrix& bundle_item,
                                    const std::vector<int>& included);

// Summed per-entity exposure over the given users (for uniformity measures
// and outcome distributions).
std::vector<double> accumulated_exposure(const RecommendationRun& run,
                                         const BrowsingModel& model,
                                         Level level, int n_bundles,
                                         const SparseBinaryMatrix& bundle_item,
                                         const std::vector<int>& users);

// Fraction of each bundle's items that fall in the popular item group.
// Empty bundles get 0 for both fractions (they carry no item mass).
struct BundleItemFractions {
  std::vector<double> popular;
  std::vector<double> unpopular;
};

BundleItemFractions bundle_item_fractions(const SparseBinaryMatrix& bundle_item,
                                          const GroupAssignment& item_groups);

}  // namespace bundlefair
