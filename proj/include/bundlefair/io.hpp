#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bundlefair/dataset.hpp"
#include "bundlefair/sparse_matrix.hpp"

namespace bundlefair {

// One (row, col) pair per line, whitespace separated. Duplicate pairs are
// tolerated and counted; out-of-range indices are errors.
SparseBinaryMatrix load_pairs_file(const std::filesystem::path& path,
                                   int n_rows, int n_cols,
                                   std::size_t* dropped_duplicates = nullptr);

void save_pairs_file(const std::filesystem::path& path,
                     const SparseBinaryMatrix& m);

struct LoadedDataset {
  InteractionDataset data;
  // Present when the directory ships pre-split user/bundle interactions.
  std::optional<SplitDataset> splits;
  std::size_t duplicate_pairs = 0;
};

// Directory layout: data_size.txt ("n_users n_bundles n_items"), then either
// user_bundle.txt or the pre-split triple user_bundle_{train,valid,test}.txt
// (user_bundle_tune.txt is accepted as the validation file), plus
// user_item.txt and bundle_item.txt. When pre-split files are present they
// take precedence and user_bundle becomes their union.
LoadedDataset load_dataset(const std::filesystem::path& dir,
                           const std::string& name = "");

void save_dataset(const std::filesystem::path& dir,
                  const InteractionDataset& ds,
                  const SplitDataset* splits = nullptr);

// TSV: "user<TAB>b1,b2,...,bK" per line, ranks left to right. Users may be
// omitted (empty list); duplicate user lines and duplicate bundles within a
// list are errors, as are lists longer than k.
RecommendationRun load_recommendations(const std::filesystem::path& path,
                                       int k, int n_users, int n_bundles);

void save_recommendations(const std::filesystem::path& path,
                          const RecommendationRun& run);

}  // namespace bundlefair
