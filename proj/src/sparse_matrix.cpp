#include "bundlefair/sparse_matrix.hpp"

#include <algorithm>
#include <string>

#include "bundlefair/errors.hpp"

namespace bundlefair {

SparseBinaryMatrix SparseBinaryMatrix::from_pairs(
    int n_rows, int n_cols, std::vector<std::pair<int, int>> pairs,
    std::size_t* dropped_duplicates) {
  if (n_rows < 0 || n_cols < 0) {
    throw AuditError(errc::config, "matrix dimensions must be non-negative");
  }
  for (const auto& [r, c] : pairs) {
    if (r < 0 || r >= n_rows || c < 0 || c >= n_cols) {
      throw AuditError(errc::out_of_range,
                       "pair (" + std::to_string(r) + ", " + std::to_string(c) +
                           ") outside " + std::to_string(n_rows) + "x" +
                           std::to_string(n_cols) + " matrix");
    }
  }
  std::sort(pairs.begin(), pairs.end());
  const auto last = std::unique(pairs.begin(), pairs.end());
  if (dropped_duplicates != nullptr) {
    *dropped_duplicates +=
        static_cast<std::size_t>(std::distance(last, pairs.end()));
  }
  pairs.erase(last, pairs.end());

  SparseBinaryMatrix m;
  m.n_rows_ = n_rows;
  m.n_cols_ = n_cols;
  m.row_ptr_.assign(static_cast<std::size_t>(n_rows) + 1, 0);
  m.cols_.reserve(pairs.size());
  for (const auto& [r, c] : pairs) {
    m.row_ptr_[static_cast<std::size_t>(r) + 1]++;
    m.cols_.push_back(c);
  }
  for (int r = 0; r < n_rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

bool SparseBinaryMatrix::contains(int r, int c) const {
  if (r < 0 || r >= n_rows_) return false;
  const auto cols = row(r);
  return std::binary_search(cols.begin(), cols.end(), c);
}

std::vector<std::int64_t> SparseBinaryMatrix::row_counts() const {
  std::vector<std::int64_t> counts(n_rows_, 0);
  for (int r = 0; r < n_rows_; ++r) counts[r] = row_ptr_[r + 1] - row_ptr_[r];
  return counts;
}

std::vector<std::int64_t> SparseBinaryMatrix::col_counts() const {
  std::vector<std::int64_t> counts(n_cols_, 0);
  for (int c : cols_) counts[c]++;
  return counts;
}

std::vector<std::pair<int, int>> SparseBinaryMatrix::pairs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(cols_.size());
  for (int r = 0; r < n_rows_; ++r) {
    for (int c : row(r)) out.emplace_back(r, c);
  }
  return out;
}

}  // namespace bundlefair
