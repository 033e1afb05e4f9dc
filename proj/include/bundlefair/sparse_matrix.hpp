#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace bundlefair {

// Row-compressed set of (row, col) presence pairs: a binary matrix where an
// entry exists iff the pair was observed. Immutable after construction;
// columns are sorted and deduplicated within each row, so instances are
// safely shareable across threads.
class SparseBinaryMatrix {
 public:
  SparseBinaryMatrix() = default;

  // Builds from possibly unsorted, possibly duplicated pairs. Out-of-range
  // pairs throw E_OUT_OF_RANGE naming the offending pair. Duplicates are
  // dropped silently; the number dropped is added to *dropped_duplicates
  // when the caller wants the warning counter.
  static SparseBinaryMatrix from_pairs(int n_rows, int n_cols,
                                       std::vector<std::pair<int, int>> pairs,
                                       std::size_t* dropped_duplicates = nullptr);

  int rows() const { return n_rows_; }
  int cols() const { return n_cols_; }
  std::size_t nnz() const { return cols_.size(); }

  // Sorted column indices of row r.
  std::span<const int> row(int r) const {
    return {cols_.data() + row_ptr_[r], cols_.data() + row_ptr_[r + 1]};
  }

  bool contains(int r, int c) const;

  std::vector<std::int64_t> row_counts() const;
  std::vector<std::int64_t> col_counts() const;

  // Entries in (row asc, col asc) order.
  std::vector<std::pair<int, int>> pairs() const;

  bool operator==(const SparseBinaryMatrix&) const = default;

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<int> row_ptr_ = {0};
  std::vector<int> cols_;
};

}  // namespace bundlefair
