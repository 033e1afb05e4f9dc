#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bundlefair/dataset.hpp"
#include "bundlefair/sparse_matrix.hpp"

namespace bundlefair {

// Popular/unpopular partition over bundles or items.
struct GroupAssignment {
  Level entity_kind = Level::Bundle;
  std::vector<bool> popular;      // indexed by entity id
  std::vector<double> frequency;  // interaction counts used for ranking

  int n_popular() const;
};

// Training interaction count per bundle.
std::vector<double> bundle_frequency(const SparseBinaryMatrix& train);

// Item interactions combine direct user/item pairs with pairs implied by
// bundle purchases: a user buying bundle b counts once toward every item in
// b, and counts stack across sources (a direct pair plus two containing
// bundles gives an item frequency contribution of 3 for that user).
std::vector<double> item_frequency(const SparseBinaryMatrix& train,
                                   const SparseBinaryMatrix& bundle_item,
                                   const SparseBinaryMatrix& user_item);

// Sort by frequency (descending, id ascending to break ties) and mark the
// shortest head prefix whose frequency mass reaches `share` of the total.
GroupAssignment partition_by_popularity(Level kind,
                                        const std::vector<double>& frequency,
                                        double share = 0.2);

enum class Tendency { BundleOriented, Neutral, ItemOriented };

const char* tendency_name(Tendency t);  // "g1", "g2", "g3"

// Ratio of a user's bundle interactions (train) to direct item interactions.
// Users with items but no bundles score 0; users with bundles but no items
// get +infinity; users with neither get 1 (neutral).
std::vector<double> tendency_scores(const SparseBinaryMatrix& train,
                                    const SparseBinaryMatrix& user_item);

// score > hi -> BundleOriented, score < lo -> ItemOriented, else Neutral.
std::vector<Tendency> partition_users_by_tendency(
    const std::vector<double>& scores, double lo = 0.9, double hi = 1.1);

}  // namespace bundlefair
