#pragma once

#include <cstdint>
#include <string>

#include "bundlefair/dataset.hpp"

namespace bundlefair {

// Long-tail interaction generator. Popularity skews are Zipf exponents over
// entity rank (0 = uniform); bundle sizes are 1 plus a fair-coin binomial
// centred on bundle_size_mean, so generation stays integer-only and the same
// seed reproduces the same dataset everywhere.
struct SyntheticConfig {
  int n_users = 1000;
  int n_bundles = 200;
  int n_items = 1000;
  double bundle_size_mean = 5.0;
  double bundle_popularity_skew = 0.0;
  double item_popularity_skew = 0.0;
  int interactions_per_user_ub = 5;
  int interactions_per_user_ui = 10;
  std::uint64_t seed = 0;
  std::string name = "synthetic";

  void validate() const;
};

InteractionDataset generate_synthetic(const SyntheticConfig& cfg);

}  // namespace bundlefair
