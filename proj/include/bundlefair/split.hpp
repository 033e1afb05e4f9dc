#pragma once

#include <cstdint>

#include "bundlefair/dataset.hpp"
#include "bundlefair/sparse_matrix.hpp"

namespace bundlefair {

struct SplitRatios {
  double train = 0.7;
  double valid = 0.1;
  double test = 0.2;

  void validate() const;
};

// Per-user holdout split of user/bundle interactions. Each user's bundles are
// shuffled with a stream derived from (seed, user), so the outcome for one
// user is independent of all others. Users with fewer than 3 interactions
// keep everything in train; otherwise test gets max(1, floor(n * r_test)),
// valid gets floor(n * r_valid) and train the rest.
SplitDataset split_user_bundle(const SparseBinaryMatrix& user_bundle,
                               const SplitRatios& ratios, std::uint64_t seed);

}  // namespace bundlefair
