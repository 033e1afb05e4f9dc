#pragma once

#include <cstdint>

#include "bundlefair/dataset.hpp"
#include "bundlefair/sparse_matrix.hpp"

namespace bundlefair {

// Every user gets the globally most-interacted training bundles (ties by id),
// with their own training bundles skipped and replaced from further down the
// ranking.
RecommendationRun most_popular_recommender(const SparseBinaryMatrix& train,
                                           int k);

// Uniform sample of k bundles per user, without replacement, excluding the
// user's training bundles. Per-user streams make the run independent of user
// evaluation order.
RecommendationRun random_recommender(int n_bundles, int k, std::uint64_t seed,
                                     const SparseBinaryMatrix& train);

// Scores each bundle by the fraction of its items the user has interacted
// with, score(u, b) = |items(b) owned by u| / |b|; ranks descending with ties
// by id and training bundles excluded.
RecommendationRun item_affinity_recommender(const SparseBinaryMatrix& train,
                                            const SparseBinaryMatrix& user_item,
                                            const SparseBinaryMatrix& bundle_item,
                                            int k);

}  // namespace bundlefair
