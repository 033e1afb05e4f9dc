#include "bundlefair/baselines.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "bundlefair/errors.hpp"
#include "bundlefair/rng.hpp"

namespace bundlefair {

namespace {

void check_k(int k, int n_bundles) {
  if (k < 1) throw AuditError(errc::config, "k must be at least 1");
  if (k > n_bundles) {
    throw AuditError(errc::config,
                     "k exceeds the bundle catalog size " +
                         std::to_string(n_bundles));
  }
}

}  // namespace

RecommendationRun most_popular_recommender(const SparseBinaryMatrix& train,
                                           int k) {
  check_k(k, train.cols());
  const auto freq = train.col_counts();
  std::vector<int> order(static_cast<std::size_t>(train.cols()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (freq[static_cast<std::size_t>(a)] != freq[static_cast<std::size_t>(b)])
      return freq[static_cast<std::size_t>(a)] >
             freq[static_cast<std::size_t>(b)];
    return a < b;
  });

  RecommendationRun run;
  run.k = k;
  run.lists.assign(static_cast<std::size_t>(train.rows()), {});
#pragma omp parallel for schedule(static)
  for (int u = 0; u < train.rows(); ++u) {
    const auto owned = train.row(u);
    auto& list = run.lists[static_cast<std::size_t>(u)];
    list.reserve(static_cast<std::size_t>(k));
    for (int b : order) {
      if (std::binary_search(owned.begin(), owned.end(), b)) continue;
      list.push_back(b);
      if (static_cast<int>(list.size()) == k) break;
    }
  }
  return run;
}

RecommendationRun random_recommender(int n_bundles, int k, std::uint64_t seed,
                                     const SparseBinaryMatrix& train) {
  check_k(k, n_bundles);
  if (train.cols() != n_bundles) {
    throw AuditError(errc::dimension_mismatch,
                     "training matrix bundle universe differs");
  }

  RecommendationRun run;
  run.k = k;
  run.lists.assign(static_cast<std::size_t>(train.rows()), {});
#pragma omp parallel for schedule(static)
  for (int u = 0; u < train.rows(); ++u) {
    const auto owned = train.row(u);
    const int available = n_bundles - static_cast<int>(owned.size());
    if (available < k) continue;  // flagged after the parallel region
    auto rng = Rng::for_stream(seed, static_cast<std::uint64_t>(u));
    auto& list = run.lists[static_cast<std::size_t>(u)];
    list.reserve(static_cast<std::size_t>(k));
    if (available < 2 * k) {
      // Dense fallback: shuffle the explicit candidate pool.
      std::vector<int> pool;
      pool.reserve(static_cast<std::size_t>(available));
      for (int b = 0; b < n_bundles; ++b) {
        if (!std::binary_search(owned.begin(), owned.end(), b)) {
          pool.push_back(b);
        }
      }
      rng.shuffle(pool);
      list.assign(pool.begin(), pool.begin() + k);
    } else {
      while (static_cast<int>(list.size()) < k) {
        const int b = static_cast<int>(
            rng.bounded(static_cast<std::uint64_t>(n_bundles)));
        if (std::binary_search(owned.begin(), owned.end(), b)) continue;
        if (std::find(list.begin(), list.end(), b) != list.end()) continue;
        list.push_back(b);
      }
    }
  }
  for (int u = 0; u < train.rows(); ++u) {
    if (run.lists[static_cast<std::size_t>(u)].empty() &&
        n_bundles - static_cast<int>(train.row(u).size()) < k) {
      throw AuditError(errc::config,
                       "user " + std::to_string(u) + " has fewer than k=" +
                           std::to_string(k) + " candidate bundles");
    }
  }
  return run;
}

RecommendationRun item_affinity_recommender(const SparseBinaryMatrix& train,
                                            const SparseBinaryMatrix& user_item,
                                            const SparseBinaryMatrix& bundle_item,
                                            int k) {
  check_k(k, train.cols());
  if (train.rows() != user_item.rows() ||
      train.cols() != bundle_item.rows() ||
      user_item.cols() != bundle_item.cols()) {
    throw AuditError(errc::dimension_mismatch,
                     "item affinity inputs disagree on universe sizes");
  }

  const int n_bundles = train.cols();
  // Item -> containing bundles adjacency, for scoring by shared items.
  std::vector<std::vector<int>> item_bundles(
      static_cast<std::size_t>(bundle_item.cols()));
  for (int b = 0; b < n_bundles; ++b) {
    for (int i : bundle_item.row(b)) {
      item_bundles[static_cast<std::size_t>(i)].push_back(b);
    }
  }
  const auto sizes = bundle_item.row_counts();

  RecommendationRun run;
  run.k = k;
  run.lists.assign(static_cast<std::size_t>(train.rows()), {});

#pragma omp parallel
  {
    std::vector<std::int64_t> shared(static_cast<std::size_t>(n_bundles), 0);
    std::vector<int> touched;
#pragma omp for schedule(static)
    for (int u = 0; u < train.rows(); ++u) {
      for (int i : user_item.row(u)) {
        for (int b : item_bundles[static_cast<std::size_t>(i)]) {
          if (shared[static_cast<std::size_t>(b)] == 0) touched.push_back(b);
          ++shared[static_cast<std::size_t>(b)];
        }
      }
      // score(b) = shared[b] / |b|; compare via cross-multiplication so ties
      // are exact.
      std::sort(touched.begin(), touched.end(), [&](int a, int b) {
        const auto lhs = shared[static_cast<std::size_t>(a)] *
                         sizes[static_cast<std::size_t>(b)];
        const auto rhs = shared[static_cast<std::size_t>(b)] *
                         sizes[static_cast<std::size_t>(a)];
        if (lhs != rhs) return lhs > rhs;
        return a < b;
      });

      const auto owned = train.row(u);
      auto& list = run.lists[static_cast<std::size_t>(u)];
      list.reserve(static_cast<std::size_t>(k));
      for (int b : touched) {
        if (static_cast<int>(list.size()) == k) break;
        if (std::binary_search(owned.begin(), owned.end(), b)) continue;
        list.push_back(b);
      }
      // Zero-score backfill in id order.
      for (int b = 0; static_cast<int>(list.size()) < k && b < n_bundles;
           ++b) {
        if (shared[static_cast<std::size_t>(b)] > 0) continue;
        if (std::binary_search(owned.begin(), owned.end(), b)) continue;
        list.push_back(b);
      }
      for (int b : touched) shared[static_cast<std::size_t>(b)] = 0;
      touched.clear();
    }
  }
  return run;
}

}  // namespace bundlefair
