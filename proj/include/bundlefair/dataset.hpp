#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bundlefair/sparse_matrix.hpp"

namespace bundlefair {

// Whether a quantity is measured over bundles or over the items inside them.
enum class Level { Bundle, Item };

inline const char* level_name(Level level) {
  return level == Level::Bundle ? "bundle" : "item";
}

// The three interaction matrices of a bundle recommendation dataset:
// X (user-bundle), Y (user-item), Z (bundle-item affiliation).
struct InteractionDataset {
  std::string name;
  SparseBinaryMatrix user_bundle;
  SparseBinaryMatrix user_item;
  SparseBinaryMatrix bundle_item;

  int n_users() const { return user_bundle.rows(); }
  int n_bundles() const { return user_bundle.cols(); }
  int n_items() const { return user_item.cols(); }

  // Checks the cross-matrix invariants: shared user/bundle/item universes and
  // that every bundle referenced in user_bundle has at least one item.
  void validate() const;
};

// Per-user partition of the user-bundle interactions.
struct SplitDataset {
  SparseBinaryMatrix train;
  SparseBinaryMatrix valid;
  SparseBinaryMatrix test;
  std::uint64_t seed = 0;  // 0 when the split was loaded from disk
};

// Ordered top-K bundle lists, indexed by user id. An empty list means the
// user received no recommendation. Index 0 is rank 1.
struct RecommendationRun {
  int k = 0;
  std::vector<std::vector<int>> lists;
};

struct DatasetStats {
  int n_users = 0;
  int n_bundles = 0;
  int n_items = 0;
  std::int64_t n_ub = 0;
  std::int64_t n_ui = 0;
  double avg_items_per_bundle = 0.0;
  double ub_density = 0.0;
};

DatasetStats dataset_stats(const InteractionDataset& ds);

// Users with at least one test interaction; everyone else is excluded from
// metric aggregation (relevance-based metrics are undefined for them).
std::vector<int> included_users(const SparseBinaryMatrix& test);

}  // namespace bundlefair
