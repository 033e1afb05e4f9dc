#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "bundlefair/dataset.hpp"
#include "bundlefair/errors.hpp"
#include "bundlefair/io.hpp"
#include "bundlefair/rng.hpp"
#include "bundlefair/split.hpp"
#include "test_support.hpp"

using namespace bundlefair;
using testsupport::error_code;
using testsupport::TempDir;
using testsupport::write_file;

namespace {

using Pairs = std::vector<std::pair<int, int>>;

InteractionDataset toy_dataset() {
  InteractionDataset ds;
  ds.name = "toy";
  ds.user_bundle =
      SparseBinaryMatrix::from_pairs(3, 2, {{0, 0}, {1, 1}, {2, 0}, {2, 1}});
  ds.user_item = SparseBinaryMatrix::from_pairs(3, 4, {{0, 2}, {1, 3}});
  ds.bundle_item =
      SparseBinaryMatrix::from_pairs(2, 4, {{0, 0}, {0, 1}, {1, 2}, {1, 3}});
  return ds;
}

void write_toy_dir(const std::filesystem::path& dir, bool presplit) {
  write_file(dir / "data_size.txt", "3 2 4\n");
  write_file(dir / "user_item.txt", "0 2\n1 3\n");
  write_file(dir / "bundle_item.txt", "0 0\n0 1\n1 2\n1 3\n");
  if (presplit) {
    write_file(dir / "user_bundle_train.txt", "0 0\n2 0\n");
    write_file(dir / "user_bundle_valid.txt", "2 1\n");
    write_file(dir / "user_bundle_test.txt", "1 1\n");
  } else {
    write_file(dir / "user_bundle.txt", "0 0\n1 1\n2 0\n2 1\n");
  }
}

}  // namespace

TEST_CASE("pair matrix sorts, deduplicates and counts") {
  std::size_t dropped = 0;
  const auto m = SparseBinaryMatrix::from_pairs(
      3, 4, {{2, 3}, {0, 1}, {2, 0}, {0, 1}, {2, 3}}, &dropped);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 4);
  CHECK(m.nnz() == 3);
  CHECK(dropped == 2);
  CHECK(m.row(0).size() == 1);
  CHECK(m.row(1).empty());
  REQUIRE(m.row(2).size() == 2);
  CHECK(m.row(2)[0] == 0);
  CHECK(m.row(2)[1] == 3);
  CHECK(m.contains(0, 1));
  CHECK_FALSE(m.contains(1, 1));
  CHECK(m.row_counts() == std::vector<std::int64_t>{1, 0, 2});
  CHECK(m.col_counts() == std::vector<std::int64_t>{1, 1, 0, 1});
  CHECK(m.pairs() == Pairs{{0, 1}, {2, 0}, {2, 3}});

  const auto again = SparseBinaryMatrix::from_pairs(3, 4, m.pairs());
  CHECK(again == m);
}

TEST_CASE("pair matrix rejects out-of-range indices") {
  CHECK(error_code([] {
          SparseBinaryMatrix::from_pairs(2, 2, {{0, 0}, {2, 1}});
        }) == errc::out_of_range);
  CHECK(error_code([] {
          SparseBinaryMatrix::from_pairs(2, 2, {{0, 2}});
        }) == errc::out_of_range);
  CHECK(error_code([] {
          SparseBinaryMatrix::from_pairs(2, 2, {{-1, 0}});
        }) == errc::out_of_range);
}

TEST_CASE("dataset validation checks shapes and bundle contents") {
  auto ds = toy_dataset();
  CHECK_NOTHROW(ds.validate());

  auto bad = ds;
  bad.user_item = SparseBinaryMatrix::from_pairs(2, 4, {});
  CHECK(error_code([&] { bad.validate(); }) == errc::dimension_mismatch);

  bad = ds;
  bad.bundle_item = SparseBinaryMatrix::from_pairs(3, 4, {});
  CHECK(error_code([&] { bad.validate(); }) == errc::dimension_mismatch);

  bad = ds;
  bad.bundle_item = SparseBinaryMatrix::from_pairs(2, 5, {{0, 0}, {1, 1}});
  CHECK(error_code([&] { bad.validate(); }) == errc::dimension_mismatch);

  // Bundle 1 is interacted with but holds no items.
  bad = ds;
  bad.bundle_item = SparseBinaryMatrix::from_pairs(2, 4, {{0, 0}});
  CHECK(error_code([&] { bad.validate(); }) == errc::empty_bundle);

  // An empty bundle nobody interacts with is allowed.
  auto ok = ds;
  ok.user_bundle = SparseBinaryMatrix::from_pairs(3, 2, {{0, 0}, {2, 0}});
  ok.bundle_item = SparseBinaryMatrix::from_pairs(2, 4, {{0, 0}});
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("dataset stats report counts, averages and density") {
  const auto stats = dataset_stats(toy_dataset());
  CHECK(stats.n_users == 3);
  CHECK(stats.n_bundles == 2);
  CHECK(stats.n_items == 4);
  CHECK(stats.n_ub == 4);
  CHECK(stats.n_ui == 2);
  CHECK(stats.avg_items_per_bundle == doctest::Approx(2.0));
  CHECK(stats.ub_density == doctest::Approx(4.0 / 6.0));

  // Single user interacting with the single bundle: density exactly 1.
  InteractionDataset unit;
  unit.user_bundle = SparseBinaryMatrix::from_pairs(1, 1, {{0, 0}});
  unit.user_item = SparseBinaryMatrix::from_pairs(1, 1, {{0, 0}});
  unit.bundle_item = SparseBinaryMatrix::from_pairs(1, 1, {{0, 0}});
  CHECK(dataset_stats(unit).ub_density == doctest::Approx(1.0));
}

TEST_CASE("real-catalog dimensions give the expected density") {
  // 8,039 users x 4,771 bundles with 51,377 interactions is 0.13% dense.
  Pairs pairs;
  pairs.reserve(51377);
  for (int i = 0; i < 51377; ++i) pairs.emplace_back(i % 8039, i / 8039);
  InteractionDataset ds;
  ds.user_bundle = SparseBinaryMatrix::from_pairs(8039, 4771, pairs);
  ds.user_item = SparseBinaryMatrix::from_pairs(8039, 32770, {});
  ds.bundle_item = SparseBinaryMatrix::from_pairs(4771, 32770, {});
  const auto stats = dataset_stats(ds);
  CHECK(stats.n_ub == 51377);
  CHECK(stats.ub_density * 100.0 == doctest::Approx(0.13).epsilon(0.05));
}

TEST_CASE("included users are exactly those with test interactions") {
  const auto test = SparseBinaryMatrix::from_pairs(4, 3, {{0, 1}, {2, 0}, {2, 2}});
  CHECK(included_users(test) == std::vector<int>{0, 2});
  CHECK(included_users(SparseBinaryMatrix::from_pairs(2, 2, {})).empty());
}

TEST_CASE("pairs file round-trips and tolerates format noise") {
  TempDir tmp;
  const auto path = tmp.path() / "pairs.txt";

  write_file(path, "0 1\r\n2 0\n\n  1\t1  \n");
  const auto m = load_pairs_file(path, 3, 2);
  CHECK(m.pairs() == Pairs{{0, 1}, {1, 1}, {2, 0}});

  std::size_t dropped = 0;
  write_file(path, "0 1\n0 1\n0 1\n");
  CHECK(load_pairs_file(path, 1, 2, &dropped).nnz() == 1);
  CHECK(dropped == 2);

  const auto out = tmp.path() / "saved.txt";
  save_pairs_file(out, m);
  CHECK(load_pairs_file(out, 3, 2) == m);
}

TEST_CASE("pairs file errors carry the file location") {
  TempDir tmp;
  const auto path = tmp.path() / "pairs.txt";

  write_file(path, "0 1\n1 x\n");
  try {
    load_pairs_file(path, 2, 2);
    FAIL("expected a parse error");
  } catch (const AuditError& e) {
    CHECK(e.code() == errc::parse);
    CHECK(e.detail().find(":2:") != std::string::npos);
  }

  write_file(path, "0 5\n");
  CHECK(error_code([&] { load_pairs_file(path, 2, 2); }) == errc::out_of_range);
  write_file(path, "0\n");
  CHECK(error_code([&] { load_pairs_file(path, 2, 2); }) == errc::parse);
  write_file(path, "0 1 2\n");
  CHECK(error_code([&] { load_pairs_file(path, 2, 2); }) == errc::parse);
  CHECK(error_code([&] { load_pairs_file(tmp.path() / "absent.txt", 2, 2); }) ==
        errc::missing_file);
}

TEST_CASE("dataset directory loads with and without pre-split files") {
  TempDir tmp;
  const auto plain = tmp.path() / "plain";
  std::filesystem::create_directories(plain);
  write_toy_dir(plain, false);

  const auto loaded = load_dataset(plain, "toy");
  CHECK(loaded.data.name == "toy");
  CHECK(loaded.data.user_bundle == toy_dataset().user_bundle);
  CHECK(loaded.data.user_item == toy_dataset().user_item);
  CHECK(loaded.data.bundle_item == toy_dataset().bundle_item);
  CHECK_FALSE(loaded.splits.has_value());
  CHECK(loaded.duplicate_pairs == 0);

  const auto split_dir = tmp.path() / "presplit";
  std::filesystem::create_directories(split_dir);
  write_toy_dir(split_dir, true);

  const auto pre = load_dataset(split_dir);
  REQUIRE(pre.splits.has_value());
  CHECK(pre.splits->train.pairs() == Pairs{{0, 0}, {2, 0}});
  CHECK(pre.splits->valid.pairs() == Pairs{{2, 1}});
  CHECK(pre.splits->test.pairs() == Pairs{{1, 1}});
  CHECK(pre.data.user_bundle == toy_dataset().user_bundle);
  // Directory name is the fallback dataset name.
  CHECK(pre.data.name == "presplit");

  // The validation file may be named user_bundle_tune.txt instead.
  std::filesystem::rename(split_dir / "user_bundle_valid.txt",
                          split_dir / "user_bundle_tune.txt");
  const auto tuned = load_dataset(split_dir);
  REQUIRE(tuned.splits.has_value());
  CHECK(tuned.splits->valid.pairs() == Pairs{{2, 1}});
}

TEST_CASE("dataset directory failures are specific") {
  TempDir tmp;
  write_toy_dir(tmp.path(), false);

  std::filesystem::remove(tmp.path() / "bundle_item.txt");
  CHECK(error_code([&] { load_dataset(tmp.path()); }) == errc::missing_file);

  // Bundle 1 is referenced but listed with no items.
  write_file(tmp.path() / "bundle_item.txt", "0 0\n");
  CHECK(error_code([&] { load_dataset(tmp.path()); }) == errc::empty_bundle);

  write_file(tmp.path() / "bundle_item.txt", "0 0\n0 1\n1 2\n1 3\n");
  write_file(tmp.path() / "data_size.txt", "3 2\n");
  CHECK(error_code([&] { load_dataset(tmp.path()); }) == errc::parse);
}

TEST_CASE("dataset directory counts duplicate pairs across files") {
  TempDir tmp;
  write_toy_dir(tmp.path(), false);
  write_file(tmp.path() / "user_item.txt", "0 2\n0 2\n1 3\n");
  const auto loaded = load_dataset(tmp.path());
  CHECK(loaded.duplicate_pairs == 1);
  CHECK(loaded.data.user_item.nnz() == 2);
}

TEST_CASE("dataset save and load round-trip, including splits") {
  TempDir tmp;
  const auto ds = toy_dataset();
  const auto splits = split_user_bundle(ds.user_bundle, SplitRatios{}, 11);

  const auto plain = tmp.path() / "plain";
  save_dataset(plain, ds);
  CHECK(load_dataset(plain, "toy").data.user_bundle == ds.user_bundle);

  const auto with_splits = tmp.path() / "with_splits";
  save_dataset(with_splits, ds, &splits);
  const auto loaded = load_dataset(with_splits, "toy");
  REQUIRE(loaded.splits.has_value());
  CHECK(loaded.splits->train == splits.train);
  CHECK(loaded.splits->valid == splits.valid);
  CHECK(loaded.splits->test == splits.test);
}

TEST_CASE("recommendation lists parse ranks and validate ids") {
  TempDir tmp;
  const auto path = tmp.path() / "run.txt";

  write_file(path, "3\t10,4,7\n0\t2\n");
  const auto run = load_recommendations(path, 20, 5, 11);
  CHECK(run.k == 20);
  REQUIRE(run.lists.size() == 5);
  CHECK(run.lists[3] == std::vector<int>{10, 4, 7});
  CHECK(run.lists[0] == std::vector<int>{2});
  CHECK(run.lists[1].empty());

  write_file(path, "3\t10,10\n");
  CHECK(error_code([&] { load_recommendations(path, 20, 5, 11); }) ==
        errc::duplicate_bundle);
  write_file(path, "3\t10\n3\t4\n");
  CHECK(error_code([&] { load_recommendations(path, 20, 5, 11); }) ==
        errc::duplicate_user);
  write_file(path, "3\t11\n");
  CHECK(error_code([&] { load_recommendations(path, 20, 5, 11); }) ==
        errc::out_of_range);
  write_file(path, "5\t1\n");
  CHECK(error_code([&] { load_recommendations(path, 20, 5, 11); }) ==
        errc::out_of_range);
  write_file(path, "3\t1,2,3\n");
  CHECK(error_code([&] { load_recommendations(path, 2, 5, 11); }) ==
        errc::parse);
  write_file(path, "3\t1,,2\n");
  CHECK(error_code([&] { load_recommendations(path, 20, 5, 11); }) ==
        errc::parse);
  write_file(path, "3\t1,2 junk\n");
  CHECK(error_code([&] { load_recommendations(path, 20, 5, 11); }) ==
        errc::parse);
}

TEST_CASE("recommendation lists round-trip through disk") {
  TempDir tmp;
  RecommendationRun run;
  run.k = 3;
  run.lists = {{2, 0}, {}, {1, 3, 4}};
  const auto path = tmp.path() / "run.txt";
  save_recommendations(path, run);
  const auto loaded = load_recommendations(path, 3, 3, 5);
  CHECK(loaded.lists == run.lists);
}

TEST_CASE("holdout split follows the 7:1:2 size rule") {
  Pairs pairs;
  for (int b = 0; b < 10; ++b) pairs.emplace_back(0, b);
  const auto one_user = SparseBinaryMatrix::from_pairs(1, 10, pairs);
  const auto s = split_user_bundle(one_user, SplitRatios{}, 5);
  CHECK(s.train.nnz() == 7);
  CHECK(s.valid.nnz() == 1);
  CHECK(s.test.nnz() == 2);
  CHECK(s.seed == 5);

  // Fewer than 3 interactions: everything stays in train.
  const auto tiny = SparseBinaryMatrix::from_pairs(2, 10, {{0, 1}, {1, 2}, {1, 3}});
  const auto ts = split_user_bundle(tiny, SplitRatios{}, 5);
  CHECK(ts.train.nnz() == 3);
  CHECK(ts.test.nnz() == 0);
  CHECK(ts.valid.nnz() == 0);

  // Exactly 3: test still gets its guaranteed interaction.
  const auto three = SparseBinaryMatrix::from_pairs(1, 10, {{0, 1}, {0, 4}, {0, 7}});
  const auto hs = split_user_bundle(three, SplitRatios{}, 5);
  CHECK(hs.train.nnz() == 2);
  CHECK(hs.valid.nnz() == 0);
  CHECK(hs.test.nnz() == 1);
}

TEST_CASE("holdout split is a deterministic disjoint partition") {
  auto rng = Rng::for_stream(99, 1);
  for (int round = 0; round < 25; ++round) {
    const int n_users = 1 + static_cast<int>(rng.bounded(8));
    const int n_bundles = 3 + static_cast<int>(rng.bounded(12));
    Pairs pairs;
    for (int u = 0; u < n_users; ++u) {
      for (int b = 0; b < n_bundles; ++b) {
        if (rng.bounded(2) == 0) pairs.emplace_back(u, b);
      }
    }
    const auto ub = SparseBinaryMatrix::from_pairs(n_users, n_bundles, pairs);
    const auto a = split_user_bundle(ub, SplitRatios{}, round);
    const auto b = split_user_bundle(ub, SplitRatios{}, round);
    CHECK(a.train == b.train);
    CHECK(a.valid == b.valid);
    CHECK(a.test == b.test);

    // The three parts recombine exactly to the input with no overlap.
    auto all = a.train.pairs();
    const auto vp = a.valid.pairs();
    const auto tp = a.test.pairs();
    all.insert(all.end(), vp.begin(), vp.end());
    all.insert(all.end(), tp.begin(), tp.end());
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
    CHECK(all == ub.pairs());

    // Per-user sizes follow the rule regardless of the draw.
    for (int u = 0; u < n_users; ++u) {
      const auto n = static_cast<std::int64_t>(ub.row(u).size());
      const auto n_test = static_cast<std::int64_t>(a.test.row(u).size());
      const auto n_valid = static_cast<std::int64_t>(a.valid.row(u).size());
      if (n < 3) {
        CHECK(n_test == 0);
        CHECK(n_valid == 0);
      } else {
        CHECK(n_test == std::max<std::int64_t>(1, n / 5));
        CHECK(n_valid == n / 10);
      }
    }
  }
}

TEST_CASE("different split seeds shuffle differently") {
  Pairs pairs;
  for (int u = 0; u < 20; ++u) {
    for (int b = 0; b < 10; ++b) pairs.emplace_back(u, b);
  }
  const auto ub = SparseBinaryMatrix::from_pairs(20, 10, pairs);
  const auto a = split_user_bundle(ub, SplitRatios{}, 1);
  const auto b = split_user_bundle(ub, SplitRatios{}, 2);
  CHECK(a.test.pairs() != b.test.pairs());
}

TEST_CASE("split ratios must be a probability partition") {
  CHECK(error_code([] { SplitRatios{0.5, 0.2, 0.2}.validate(); }) ==
        errc::config);
  CHECK(error_code([] { SplitRatios{-0.1, 0.9, 0.2}.validate(); }) ==
        errc::config);
  CHECK_NOTHROW(SplitRatios{}.validate());
  CHECK_NOTHROW(SplitRatios{0.5, 0.25, 0.25}.validate());
}
