#include "bundlefair/synthetic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "bundlefair/errors.hpp"
#include "bundlefair/rng.hpp"

namespace bundlefair {

namespace {

// Fenwick tree over integer weights supporting weighted draws without
// replacement. Weights are quantized to integers so sampling never touches
// floating point.
class WeightedSampler {
 public:
  explicit WeightedSampler(std::vector<std::uint64_t> weights)
      : weights_(std::move(weights)), tree_(weights_.size() + 1, 0) {
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      add(i, weights_[i]);
      total_ += weights_[i];
    }
  }

  // Draws one index with probability proportional to its weight and removes
  // it until restore().
  int draw(Rng& rng) {
    std::uint64_t r = rng.bounded(total_);
    // Find the first index whose cumulative weight exceeds r.
    std::size_t pos = 0;
    std::size_t step = std::bit_floor(tree_.size() - 1);
    for (; step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] <= r) {
        pos = next;
        r -= tree_[next];
      }
    }
    const auto idx = pos;  // 0-based entity index
    const auto w = weights_[idx];
    add(idx, ~w + 1);  // two's complement subtraction
    total_ -= w;
    removed_.push_back(idx);
    return static_cast<int>(idx);
  }

  void restore() {
    for (auto idx : removed_) {
      add(idx, weights_[idx]);
      total_ += weights_[idx];
    }
    removed_.clear();
  }

 private:
  void add(std::size_t idx, std::uint64_t delta) {
    for (std::size_t i = idx + 1; i < tree_.size(); i += i & (~i + 1)) {
      tree_[i] += delta;
    }
  }

  std::vector<std::uint64_t> weights_;
  std::vector<std::uint64_t> tree_;
  std::uint64_t total_ = 0;
  std::vector<std::size_t> removed_;
};

// Zipf rank weights, quantized to 32 fractional bits (at least 1 so every
// entity stays reachable).
std::vector<std::uint64_t> zipf_weights(int n, double skew) {
  std::vector<std::uint64_t> w(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    const double v = std::pow(static_cast<double>(r) + 1.0, -skew);
    w[static_cast<std::size_t>(r)] = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::llround(std::ldexp(v, 32))));
  }
  return w;
}

// Successes out of n_trials fair coin flips, via popcount of raw words.
int binomial_half(Rng& rng, int n_trials) {
  int successes = 0;
  int remaining = n_trials;
  while (remaining >= 64) {
    successes += std::popcount(rng.next());
    remaining -= 64;
  }
  if (remaining > 0) {
    const std::uint64_t mask = (~0ull) >> (64 - remaining);
    successes += std::popcount(rng.next() & mask);
  }
  return successes;
}

}  // namespace

void SyntheticConfig::validate() const {
  if (n_users < 1 || n_bundles < 1 || n_items < 1) {
    throw AuditError(errc::config, "entity counts must be at least 1");
  }
  if (interactions_per_user_ub < 1 || interactions_per_user_ui < 1) {
    throw AuditError(errc::config,
                     "interactions per user must be at least 1");
  }
  if (interactions_per_user_ub > n_bundles) {
    throw AuditError(errc::config,
                     "more bundle interactions per user than bundles");
  }
  if (interactions_per_user_ui > n_items) {
    throw AuditError(errc::config,
                     "more item interactions per user than items");
  }
  if (bundle_popularity_skew < 0.0 || item_popularity_skew < 0.0) {
    throw AuditError(errc::config, "popularity skew must be non-negative");
  }
  if (bundle_size_mean < 1.0) {
    throw AuditError(errc::config, "bundle size mean must be at least 1");
  }
  const auto max_size =
      1 + std::llround(2.0 * (bundle_size_mean - 1.0));
  if (max_size > n_items) {
    throw AuditError(errc::config,
                     "bundle size mean too large for the item catalog");
  }
}

InteractionDataset generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();

  // Independent streams per phase, so e.g. changing a skew leaves the bundle
  // sizes untouched.
  auto size_rng = Rng::for_stream(cfg.seed, 0);
  auto z_rng = Rng::for_stream(cfg.seed, 1);
  auto x_rng = Rng::for_stream(cfg.seed, 2);
  auto y_rng = Rng::for_stream(cfg.seed, 3);

  const int n_trials =
      static_cast<int>(std::llround(2.0 * (cfg.bundle_size_mean - 1.0)));
  std::vector<int> sizes(static_cast<std::size_t>(cfg.n_bundles));
  for (auto& s : sizes) s = 1 + binomial_half(size_rng, n_trials);

  WeightedSampler item_sampler(zipf_weights(cfg.n_items,
                                            cfg.item_popularity_skew));
  std::vector<std::pair<int, int>> z_pairs;
  for (int b = 0; b < cfg.n_bundles; ++b) {
    for (int j = 0; j < sizes[static_cast<std::size_t>(b)]; ++j) {
      z_pairs.emplace_back(b, item_sampler.draw(z_rng));
    }
    item_sampler.restore();
  }

  WeightedSampler bundle_sampler(zipf_weights(cfg.n_bundles,
                                              cfg.bundle_popularity_skew));
  std::vector<std::pair<int, int>> x_pairs;
  for (int u = 0; u < cfg.n_users; ++u) {
    for (int j = 0; j < cfg.interactions_per_user_ub; ++j) {
      x_pairs.emplace_back(u, bundle_sampler.draw(x_rng));
    }
    bundle_sampler.restore();
  }

  std::vector<std::pair<int, int>> y_pairs;
  for (int u = 0; u < cfg.n_users; ++u) {
    for (int j = 0; j < cfg.interactions_per_user_ui; ++j) {
      y_pairs.emplace_back(u, item_sampler.draw(y_rng));
    }
    item_sampler.restore();
  }

  InteractionDataset ds;
  ds.name = cfg.name;
  ds.user_bundle =
      SparseBinaryMatrix::from_pairs(cfg.n_users, cfg.n_bundles, x_pairs);
  ds.user_item =
      SparseBinaryMatrix::from_pairs(cfg.n_users, cfg.n_items, y_pairs);
  ds.bundle_item =
      SparseBinaryMatrix::from_pairs(cfg.n_bundles, cfg.n_items, z_pairs);
  ds.validate();
  return ds;
}

}  // namespace bundlefair
