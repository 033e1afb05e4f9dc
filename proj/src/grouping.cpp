#include "bundlefair/grouping.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "bundlefair/errors.hpp"

namespace bundlefair {

int GroupAssignment::n_popular() const {
  return static_cast<int>(std::count(popular.begin(), popular.end(), true));
}

std::vector<double> bundle_frequency(const SparseBinaryMatrix& train) {
  const auto counts = train.col_counts();
  return {counts.begin(), counts.end()};
}

std::vector<double> item_frequency(const SparseBinaryMatrix& train,
                                   const SparseBinaryMatrix& bundle_item,
                                   const SparseBinaryMatrix& user_item) {
  if (train.cols() != bundle_item.rows() ||
      user_item.cols() != bundle_item.cols() ||
      train.rows() != user_item.rows()) {
    throw AuditError(errc::dimension_mismatch,
                     "item_frequency inputs disagree on universe sizes");
  }
  // Column sums of X*Z + Y without forming the product: each bundle column
  // count fans out to the bundle's items with multiplicity.
  std::vector<double> freq(static_cast<std::size_t>(user_item.cols()), 0.0);
  const auto bundle_counts = train.col_counts();
  for (int b = 0; b < bundle_item.rows(); ++b) {
    const auto c = static_cast<double>(bundle_counts[b]);
    if (c == 0.0) continue;
    for (int i : bundle_item.row(b)) freq[static_cast<std::size_t>(i)] += c;
  }
  const auto item_counts = user_item.col_counts();
  for (std::size_t i = 0; i < freq.size(); ++i) {
    freq[i] += static_cast<double>(item_counts[i]);
  }
  return freq;
}

GroupAssignment partition_by_popularity(Level kind,
                                        const std::vector<double>& frequency,
                                        double share) {
  if (share <= 0.0 || share >= 1.0) {
    throw AuditError(errc::config, "popularity share must be in (0, 1)");
  }
  const double total = std::accumulate(frequency.begin(), frequency.end(), 0.0);
  if (total <= 0.0) {
    throw AuditError(errc::degenerate_input,
                     "cannot partition an all-zero frequency vector");
  }
  std::vector<int> order(frequency.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (frequency[static_cast<std::size_t>(a)] !=
        frequency[static_cast<std::size_t>(b)]) {
      return frequency[static_cast<std::size_t>(a)] >
             frequency[static_cast<std::size_t>(b)];
    }
    return a < b;
  });

  GroupAssignment groups;
  groups.entity_kind = kind;
  groups.frequency = frequency;
  groups.popular.assign(frequency.size(), false);
  double cum = 0.0;
  for (int id : order) {
    cum += frequency[static_cast<std::size_t>(id)];
    groups.popular[static_cast<std::size_t>(id)] = true;
    if (cum >= share * total) break;
  }
  return groups;
}

const char* tendency_name(Tendency t) {
  switch (t) {
    case Tendency::BundleOriented:
      return "g1";
    case Tendency::Neutral:
      return "g2";
    case Tendency::ItemOriented:
      return "g3";
  }
  return "g2";
}

std::vector<double> tendency_scores(const SparseBinaryMatrix& train,
                                    const SparseBinaryMatrix& user_item) {
  if (train.rows() != user_item.rows()) {
    throw AuditError(errc::dimension_mismatch,
                     "tendency_scores inputs disagree on user count");
  }
  std::vector<double> scores(static_cast<std::size_t>(train.rows()));
  for (int u = 0; u < train.rows(); ++u) {
    const auto nb = train.row(u).size();
    const auto ni = user_item.row(u).size();
    double r;
    if (ni > 0) {
      r = static_cast<double>(nb) / static_cast<double>(ni);
    } else if (nb > 0) {
      r = std::numeric_limits<double>::infinity();
    } else {
      r = 1.0;
    }
    scores[static_cast<std::size_t>(u)] = r;
  }
  return scores;
}

std::vector<Tendency> partition_users_by_tendency(
    const std::vector<double>& scores, double lo, double hi) {
  if (lo > hi) {
    throw AuditError(errc::config, "tendency thresholds must satisfy lo <= hi");
  }
  std::vector<Tendency> groups(scores.size());
  for (std::size_t u = 0; u < scores.size(); ++u) {
    if (scores[u] > hi) {
      groups[u] = Tendency::BundleOriented;
    } else if (scores[u] < lo) {
      groups[u] = Tendency::ItemOriented;
    } else {
      groups[u] = Tendency::Neutral;
    }
  }
  return groups;
}

}  // namespace bundlefair
