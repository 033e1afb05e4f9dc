#include "bundlefair/split.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "bundlefair/errors.hpp"
#include "bundlefair/rng.hpp"

namespace bundlefair {

void SplitRatios::validate() const {
  if (train < 0.0 || valid < 0.0 || test < 0.0) {
    throw AuditError(errc::config, "split ratios must be non-negative");
  }
  if (std::abs(train + valid + test - 1.0) > 1e-9) {
    throw AuditError(errc::config, "split ratios must sum to 1");
  }
}

SplitDataset split_user_bundle(const SparseBinaryMatrix& user_bundle,
                               const SplitRatios& ratios, std::uint64_t seed) {
  ratios.validate();

  std::vector<std::pair<int, int>> train_pairs;
  std::vector<std::pair<int, int>> valid_pairs;
  std::vector<std::pair<int, int>> test_pairs;
  train_pairs.reserve(user_bundle.nnz());

  for (int u = 0; u < user_bundle.rows(); ++u) {
    const auto row = user_bundle.row(u);
    std::vector<int> bundles(row.begin(), row.end());
    const auto n = bundles.size();
    if (n < 3) {
      for (int b : bundles) train_pairs.emplace_back(u, b);
      continue;
    }
    auto rng = Rng::for_stream(seed, static_cast<std::uint64_t>(u));
    rng.shuffle(bundles);
    const auto n_test = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(n * ratios.test)));
    const auto n_valid =
        static_cast<std::size_t>(std::floor(n * ratios.valid));
    std::size_t i = 0;
    for (; i < n_test; ++i) test_pairs.emplace_back(u, bundles[i]);
    for (; i < n_test + n_valid; ++i) valid_pairs.emplace_back(u, bundles[i]);
    for (; i < n; ++i) train_pairs.emplace_back(u, bundles[i]);
  }

  SplitDataset splits;
  splits.seed = seed;
  splits.train = SparseBinaryMatrix::from_pairs(
      user_bundle.rows(), user_bundle.cols(), train_pairs);
  splits.valid = SparseBinaryMatrix::from_pairs(
      user_bundle.rows(), user_bundle.cols(), valid_pairs);
  splits.test = SparseBinaryMatrix::from_pairs(
      user_bundle.rows(), user_bundle.cols(), test_pairs);
  return splits;
}

}  // namespace bundlefair
