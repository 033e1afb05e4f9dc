#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bundlefair/audit.hpp"
#include "bundlefair/baselines.hpp"
#include "bundlefair/densify.hpp"
#include "bundlefair/grouping.hpp"
#include "bundlefair/reference.hpp"
#include "bundlefair/split.hpp"
#include "bundlefair/synthetic.hpp"

namespace {

using namespace bundlefair;
using Clock = std::chrono::steady_clock;

struct Problem {
  InteractionDataset data;
  SplitDataset splits;
  RecommendationRun run;
  GroupAssignment bundle_groups;
  GroupAssignment item_groups;
  std::vector<Tendency> tendency;
  EvaluateOptions options;
};

Problem make_problem(const SyntheticConfig& cfg, int k) {
  Problem p;
  p.data = generate_synthetic(cfg);
  p.splits = split_user_bundle(p.data.user_bundle, SplitRatios{}, cfg.seed);
  p.run = most_popular_recommender(p.splits.train, k);
  p.bundle_groups = partition_by_popularity(
      Level::Bundle, bundle_frequency(p.splits.train));
  p.item_groups = partition_by_popularity(
      Level::Item,
      item_frequency(p.splits.train, p.data.bundle_item, p.data.user_item));
  p.tendency = partition_users_by_tendency(
      tendency_scores(p.splits.train, p.data.user_item));
  p.options.k = k;
  return p;
}

template <typename F>
double time_ms(F&& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    fn();
    const auto ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start)
            .count();
    best = std::min(best, ms);
  }
  return best;
}

double timed_evaluate(const Problem& p, int threads, int reps, double* out_ms) {
#ifdef _OPENMP
  omp_set_num_threads(threads);
#else
  (void)threads;
#endif
  AuditReport report;
  *out_ms = time_ms([&] {
    report = evaluate(p.run, p.data, p.splits, p.bundle_groups,
                      p.item_groups, p.tendency, p.options);
  }, reps);
  return report.overall.recall.value_or(-1.0);
}

}  // namespace

int main() {
#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
#else
  const int max_threads = 1;
#endif

  // Small instance: brute-force reference is feasible, so check agreement
  // and compare all three paths.
  SyntheticConfig small;
  small.n_users = 300;
  small.n_bundles = 60;
  small.n_items = 150;
  small.bundle_size_mean = 4.0;
  small.bundle_popularity_skew = 1.0;
  small.item_popularity_skew = 0.8;
  small.interactions_per_user_ub = 6;
  small.interactions_per_user_ui = 12;
  small.seed = 7;
  const auto p_small = make_problem(small, 10);

  const auto inst = densify(p_small.data, p_small.splits, p_small.run,
                            p_small.bundle_groups, p_small.item_groups,
                            p_small.options.k, p_small.options.gamma);
  reference::Scalars ref;
  const double ref_ms = time_ms([&] { ref = reference::audit(inst); }, 3);

  const auto report =
      evaluate(p_small.run, p_small.data, p_small.splits,
               p_small.bundle_groups, p_small.item_groups, p_small.tendency,
               p_small.options);
  const double cross_gap = max_scalar_gap(report, ref);
  std::printf("cross-check vs brute force: max |delta| = %.3g over 16 scalars %s\n",
              cross_gap, cross_gap < 1e-9 ? "(OK)" : "(MISMATCH)");

  double small_1 = 0.0;
  double small_n = 0.0;
  timed_evaluate(p_small, 1, 5, &small_1);
  timed_evaluate(p_small, max_threads, 5, &small_n);

  // Larger instance: optimized paths only.
  SyntheticConfig large;
  large.n_users = 10000;
  large.n_bundles = 5000;
  large.n_items = 20000;
  large.bundle_size_mean = 10.0;
  large.bundle_popularity_skew = 1.0;
  large.item_popularity_skew = 0.8;
  large.interactions_per_user_ub = 10;
  large.interactions_per_user_ui = 30;
  large.seed = 7;
  const auto p_large = make_problem(large, 20);

  double large_1 = 0.0;
  double large_n = 0.0;
  timed_evaluate(p_large, 1, 3, &large_1);
  timed_evaluate(p_large, max_threads, 3, &large_n);

  std::printf("\n%-28s %12s %12s %12s\n", "instance", "brute force",
              "audit x1", ("audit x" + std::to_string(max_threads)).c_str());
  std::printf("%-28s %9.1f ms %9.1f ms %9.1f ms\n",
              "300u/60b/150i K=10", ref_ms, small_1, small_n);
  std::printf("%-28s %12s %9.1f ms %9.1f ms\n",
              "10000u/5000b/20000i K=20", "-", large_1, large_n);
  std::printf("\nlarge-instance speedup at %d threads: %.2fx\n", max_threads,
              large_1 / large_n);
  return cross_gap < 1e-9 ? 0 : 1;
}
