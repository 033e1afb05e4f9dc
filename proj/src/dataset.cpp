#include "bundlefair/dataset.hpp"

#include <string>

#include "bundlefair/errors.hpp"

namespace bundlefair {

void InteractionDataset::validate() const {
  if (user_bundle.rows() != user_item.rows()) {
    throw AuditError(errc::dimension_mismatch,
                     "user_bundle has " + std::to_string(user_bundle.rows()) +
                         " users but user_item has " +
                         std::to_string(user_item.rows()));
  }
  if (user_bundle.cols() != bundle_item.rows()) {
    throw AuditError(errc::dimension_mismatch,
                     "user_bundle has " + std::to_string(user_bundle.cols()) +
                         " bundles but bundle_item has " +
                         std::to_string(bundle_item.rows()));
  }
  if (user_item.cols() != bundle_item.cols()) {
    throw AuditError(errc::dimension_mismatch,
                     "user_item has " + std::to_string(user_item.cols()) +
                         " items but bundle_item has " +
                         std::to_string(bundle_item.cols()));
  }
  const auto bundle_sizes = bundle_item.row_counts();
  for (const auto& [user, bundle] : user_bundle.pairs()) {
    (void)user;
    if (bundle_sizes[bundle] == 0) {
      throw AuditError(errc::empty_bundle,
                       "bundle " + std::to_string(bundle) +
                           " is referenced in user_bundle but has no items");
    }
  }
}

DatasetStats dataset_stats(const InteractionDataset& ds) {
  DatasetStats s;
  s.n_users = ds.n_users();
  s.n_bundles = ds.n_bundles();
  s.n_items = ds.n_items();
  s.n_ub = static_cast<std::int64_t>(ds.user_bundle.nnz());
  s.n_ui = static_cast<std::int64_t>(ds.user_item.nnz());
  s.avg_items_per_bundle =
      s.n_bundles > 0
          ? static_cast<double>(ds.bundle_item.nnz()) / s.n_bundles
          : 0.0;
  const double cells = static_cast<double>(s.n_users) * s.n_bundles;
  s.ub_density = cells > 0 ? static_cast<double>(s.n_ub) / cells : 0.0;
  return s;
}

std::vector<int> included_users(const SparseBinaryMatrix& test) {
  std::vector<int> users;
  for (int u = 0; u < test.rows(); ++u) {
    if (!test.row(u).empty()) users.push_back(u);
  }
  return users;
}

}  // namespace bundlefair
