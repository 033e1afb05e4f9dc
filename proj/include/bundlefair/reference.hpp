#pragma once

#include <vector>

namespace bundlefair::reference {

// Dense mirror of an audit problem, small enough to evaluate by direct loops.
// This implementation is deliberately independent of the main library: it
// spells out every definition naively and serves as the ground truth the
// optimized paths are checked against.
struct Instance {
  int n_users = 0;
  int n_bundles = 0;
  int n_items = 0;
  int k = 1;
  double gamma = 0.5;
  bool smoothing = true;
  std::vector<std::vector<int>> train;  // n_users x n_bundles, 0/1
  std::vector<std::vector<int>> test;   // n_users x n_bundles, 0/1
  std::vector<std::vector<int>> y;      // n_users x n_items, 0/1
  std::vector<std::vector<int>> z;      // n_bundles x n_items, 0/1
  std::vector<std::vector<int>> lists;  // ranked bundle ids per user
  std::vector<int> bundle_popular;      // n_bundles, 0/1
  std::vector<int> item_popular;        // n_items, 0/1
};

struct LevelScalars {
  double log_eur = 0.0;
  double log_rur = 0.0;
  double eel = 0.0;
  double eer = 0.0;
  double eed = 0.0;
  double log_dp = 0.0;
  double target_eed = 0.0;
};

struct Scalars {
  double recall = 0.0;
  double ndcg = 0.0;
  LevelScalars bundle;
  LevelScalars item;
};

Scalars audit(const Instance& inst);

// Mean-absolute-difference form of the concentration index, algebraically
// equal to the sorted-weights form used by the main library.
double gini(const std::vector<double>& values);

}  // namespace bundlefair::reference
