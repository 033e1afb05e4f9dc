#pragma once

#include <vector>

#include "bundlefair/dataset.hpp"
#include "bundlefair/exposure.hpp"
#include "bundlefair/grouping.hpp"
#include "bundlefair/sparse_matrix.hpp"

namespace bundlefair {

// Binary bundle relevance from the test split; item relevance splits each
// relevant bundle's unit mass evenly over its items and accumulates.
struct RelevanceModel {
  Level level = Level::Bundle;
  const SparseBinaryMatrix* test = nullptr;
  const SparseBinaryMatrix* bundle_item = nullptr;
};

struct GroupUtility {
  double popular = 0.0;
  double unpopular = 0.0;
};

struct GroupCTR {
  double popular = 0.0;
  double unpopular = 0.0;
};

struct FairnessReport {
  double log_eur = 0.0;
  double log_rur = 0.0;
  double eel = 0.0;
  double eer = 0.0;
  double eed = 0.0;
  double log_dp = 0.0;
  double target_eed = 0.0;  // squared norm of the target exposure vector
};

inline constexpr double kSmoothingFloor = 1e-10;

std::vector<double> per_user_recall(const RecommendationRun& run,
                                    const SparseBinaryMatrix& test, int k);

std::vector<double> per_user_ndcg(const RecommendationRun& run,
                                  const SparseBinaryMatrix& test, int k);

// Mean over included users.
double recall_at_k(const RecommendationRun& run, const SparseBinaryMatrix& test,
                   int k, const std::vector<int>& included);

double ndcg_at_k(const RecommendationRun& run, const SparseBinaryMatrix& test,
                 int k, const std::vector<int>& included);

// Relevance mass per group and user (bundle level: test interaction counts;
// item level: fractional 1/|b| shares).
PerUserGroupMass per_user_utility_mass(const RelevanceModel& rel,
                                       const GroupAssignment& groups);

// Expected clicks per group and user: sum over entities of exposure times
// relevance under the browsing model.
PerUserGroupMass per_user_ctr_mass(const RecommendationRun& run,
                                   const RelevanceModel& rel,
                                   const GroupAssignment& groups,
                                   const BrowsingModel& model);

// Utility sums over included users; CTR averages over them.
GroupUtility group_utility(const RelevanceModel& rel,
                           const GroupAssignment& groups,
                           const std::vector<int>& included);

GroupCTR group_ctr(const RecommendationRun& run, const RelevanceModel& rel,
                   const GroupAssignment& groups, const BrowsingModel& model,
                   const std::vector<int>& included);

// Ratio metrics use natural logs, signed (positive favors the popular group).
// With smoothing every ratio operand is floored at kSmoothingFloor; without
// it degenerate operands propagate IEEE infinities.
FairnessReport fairness_metrics(const GroupExposure& eps,
                                const GroupExposure& target,
                                const GroupUtility& util, const GroupCTR& ctr,
                                bool smoothing = true);

// Concentration of a non-negative distribution: 0 uniform, 1 one-hot.
double gini_index(const std::vector<double>& values);

}  // namespace bundlefair
