#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bundlefair/audit.hpp"
#include "bundlefair/dataset.hpp"
#include "bundlefair/errors.hpp"
#include "bundlefair/grouping.hpp"
#include "bundlefair/rng.hpp"
#include "bundlefair/split.hpp"

namespace testsupport {

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    static std::mt19937_64 source{std::random_device{}()};
    path_ = base / ("bundlefair_test_" + std::to_string(source()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs fn and reports the audit error code it threw, or "" if none.
template <typename F>
std::string error_code(F&& fn) {
  try {
    fn();
  } catch (const bundlefair::AuditError& e) {
    return e.code();
  }
  return "";
}

// A complete randomized audit problem, small enough for brute-force checks.
struct TinyInstance {
  bundlefair::InteractionDataset data;
  bundlefair::SplitDataset splits;
  bundlefair::RecommendationRun run;
  bundlefair::GroupAssignment bundle_groups;
  bundlefair::GroupAssignment item_groups;
  std::vector<bundlefair::Tendency> tendency;
  bundlefair::EvaluateOptions options;
};

// Randomized instance with the degenerate corners kept reachable (users
// without test interactions, users without lists, unreferenced bundles)
// while guaranteeing the audit itself stays well-posed: user 0 always has
// train and test interactions, a direct item interaction and a ranked list.
inline TinyInstance make_tiny_instance(std::uint64_t seed) {
  using namespace bundlefair;
  auto rng = Rng::for_stream(seed, 0x7e577e57ull);

  TinyInstance t;
  const int n_users = 2 + static_cast<int>(rng.bounded(9));    // 2..10
  // At least 3 bundles so user 0's forced interactions survive the split
  // with a guaranteed test entry, keeping the instance auditable.
  const int n_bundles = 3 + static_cast<int>(rng.bounded(6));  // 3..8
  const int n_items = 2 + static_cast<int>(rng.bounded(11));   // 2..12
  const int k = 1 + static_cast<int>(rng.bounded(5));          // 1..5

  // Z: every bundle keeps at least one item.
  std::vector<std::pair<int, int>> z_pairs;
  std::vector<int> item_ids(static_cast<std::size_t>(n_items));
  for (int i = 0; i < n_items; ++i) item_ids[static_cast<std::size_t>(i)] = i;
  for (int b = 0; b < n_bundles; ++b) {
    rng.shuffle(item_ids);
    const int size = 1 + static_cast<int>(rng.bounded(
                             static_cast<std::uint64_t>(n_items)));
    for (int j = 0; j < size; ++j) {
      z_pairs.emplace_back(b, item_ids[static_cast<std::size_t>(j)]);
    }
  }

  // X: user 0 gets at least 3 interactions so the split leaves it test data.
  std::vector<std::pair<int, int>> x_pairs;
  for (int u = 0; u < n_users; ++u) {
    const int min_n = u == 0 ? 3 : 0;
    if (min_n > n_bundles) {
      for (int b = 0; b < n_bundles; ++b) x_pairs.emplace_back(u, b);
      continue;
    }
    std::vector<int> bundle_ids(static_cast<std::size_t>(n_bundles));
    for (int b = 0; b < n_bundles; ++b) {
      bundle_ids[static_cast<std::size_t>(b)] = b;
    }
    rng.shuffle(bundle_ids);
    const int n = min_n + static_cast<int>(rng.bounded(
                              static_cast<std::uint64_t>(n_bundles - min_n + 1)));
    for (int j = 0; j < n; ++j) {
      x_pairs.emplace_back(u, bundle_ids[static_cast<std::size_t>(j)]);
    }
  }

  // Y: sparse direct item interactions, user 0 guaranteed one.
  std::vector<std::pair<int, int>> y_pairs;
  y_pairs.emplace_back(0, static_cast<int>(rng.bounded(
                              static_cast<std::uint64_t>(n_items))));
  for (int u = 0; u < n_users; ++u) {
    for (int i = 0; i < n_items; ++i) {
      if (rng.bounded(4) == 0) y_pairs.emplace_back(u, i);
    }
  }

  t.data.name = "tiny";
  t.data.user_bundle = SparseBinaryMatrix::from_pairs(n_users, n_bundles,
                                                      x_pairs);
  t.data.user_item = SparseBinaryMatrix::from_pairs(n_users, n_items, y_pairs);
  t.data.bundle_item = SparseBinaryMatrix::from_pairs(n_bundles, n_items,
                                                      z_pairs);
  t.data.validate();
  t.splits = split_user_bundle(t.data.user_bundle, SplitRatios{}, seed);

  // Ranked lists: most users get one, some stay empty; user 0 always ranked.
  t.run.k = k;
  t.run.lists.assign(static_cast<std::size_t>(n_users), {});
  std::vector<int> bundle_ids(static_cast<std::size_t>(n_bundles));
  for (int b = 0; b < n_bundles; ++b) bundle_ids[static_cast<std::size_t>(b)] = b;
  for (int u = 0; u < n_users; ++u) {
    if (u != 0 && rng.bounded(5) == 0) continue;
    rng.shuffle(bundle_ids);
    const int len = 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(
                            std::min(k, n_bundles))));
    auto& list = t.run.lists[static_cast<std::size_t>(u)];
    list.assign(bundle_ids.begin(), bundle_ids.begin() + len);
  }

  t.bundle_groups = partition_by_popularity(
      Level::Bundle, bundle_frequency(t.splits.train));
  t.item_groups = partition_by_popularity(
      Level::Item, item_frequency(t.splits.train, t.data.bundle_item,
                                  t.data.user_item));
  t.tendency = partition_users_by_tendency(
      tendency_scores(t.splits.train, t.data.user_item));

  t.options.k = k;
  t.options.gamma = 0.2 + 0.6 * rng.unit();
  return t;
}

}  // namespace testsupport
