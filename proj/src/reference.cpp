#include "bundlefair/reference.hpp"

#include <algorithm>
#include <cmath>

namespace bundlefair::reference {

namespace {

double position_weight(double gamma, int rank) {
  return gamma * std::pow(1.0 - gamma, rank - 1);
}

int row_sum(const std::vector<int>& row) {
  int s = 0;
  for (int v : row) s += v;
  return s;
}

struct GroupPair {
  double plus = 0.0;
  double minus = 0.0;
};

GroupPair split_by_group(const std::vector<double>& values,
                         const std::vector<int>& popular) {
  GroupPair g;
  for (std::size_t e = 0; e < values.size(); ++e) {
    if (popular[e]) {
      g.plus += values[e];
    } else {
      g.minus += values[e];
    }
  }
  return g;
}

LevelScalars level_metrics(GroupPair eps, GroupPair target, GroupPair util,
                           GroupPair ctr, bool smoothing) {
  const double eps_total = eps.plus + eps.minus;
  eps.plus /= eps_total;
  eps.minus /= eps_total;
  const double target_total = target.plus + target.minus;
  target.plus /= target_total;
  target.minus /= target_total;

  const auto guard = [smoothing](double x) {
    return smoothing && x < 1e-10 ? 1e-10 : x;
  };

  LevelScalars out;
  out.log_eur = std::log(guard(eps.plus)) - std::log(guard(util.plus)) -
                std::log(guard(eps.minus)) + std::log(guard(util.minus));
  out.log_rur = std::log(guard(ctr.plus)) - std::log(guard(util.plus)) -
                std::log(guard(ctr.minus)) + std::log(guard(util.minus));
  out.log_dp = std::log(guard(eps.plus)) - std::log(guard(eps.minus));
  out.eel = (eps.plus - target.plus) * (eps.plus - target.plus) +
            (eps.minus - target.minus) * (eps.minus - target.minus);
  out.eer = 2.0 * (eps.plus * target.plus + eps.minus * target.minus);
  out.eed = eps.plus * eps.plus + eps.minus * eps.minus;
  out.target_eed = target.plus * target.plus + target.minus * target.minus;
  return out;
}

}  // namespace

Scalars audit(const Instance& inst) {
  std::vector<int> included;
  for (int u = 0; u < inst.n_users; ++u) {
    if (row_sum(inst.test[u]) > 0) included.push_back(u);
  }
  const auto n_inc = static_cast<double>(included.size());

  Scalars out;

  // Accuracy.
  for (int u : included) {
    const auto& list = inst.lists[u];
    const int n_test = row_sum(inst.test[u]);
    int hits = 0;
    double dcg = 0.0;
    for (int p = 1; p <= static_cast<int>(list.size()) && p <= inst.k; ++p) {
      if (inst.test[u][list[p - 1]]) {
        ++hits;
        dcg += 1.0 / (std::log(p + 1.0) / std::log(2.0));
      }
    }
    double idcg = 0.0;
    for (int p = 1; p <= std::min(n_test, inst.k); ++p) {
      idcg += 1.0 / (std::log(p + 1.0) / std::log(2.0));
    }
    out.recall += static_cast<double>(hits) / n_test;
    out.ndcg += dcg / idcg;
  }
  out.recall /= n_inc;
  out.ndcg /= n_inc;

  // Per-level aggregates, averaged (or for utility, summed) over users.
  for (int level = 0; level < 2; ++level) {
    const bool item_level = level == 1;
    const int n_entities = item_level ? inst.n_items : inst.n_bundles;
    const auto& popular = item_level ? inst.item_popular : inst.bundle_popular;

    GroupPair eps_sum, target_sum, util_sum, ctr_sum;
    for (int u : included) {
      // Exposure of this user's ranked list.
      std::vector<double> exposure(n_entities, 0.0);
      const auto& list = inst.lists[u];
      for (int p = 1; p <= static_cast<int>(list.size()); ++p) {
        const int b = list[p - 1];
        const double w = position_weight(inst.gamma, p);
        if (!item_level) {
          exposure[b] += w;
        } else {
          const int size = row_sum(inst.z[b]);
          for (int i = 0; i < inst.n_items; ++i) {
            if (inst.z[b][i]) exposure[i] += w / size;
          }
        }
      }

      // Relevance.
      std::vector<double> relevance(n_entities, 0.0);
      for (int b = 0; b < inst.n_bundles; ++b) {
        if (!inst.test[u][b]) continue;
        if (!item_level) {
          relevance[b] = 1.0;
        } else {
          const int size = row_sum(inst.z[b]);
          if (size == 0) continue;
          for (int i = 0; i < inst.n_items; ++i) {
            if (inst.z[b][i]) relevance[i] += 1.0 / size;
          }
        }
      }

      // Ideal-policy target: relevant bundles share the top positions
      // evenly, leftovers spread over the rest, then spread into items.
      const int m = row_sum(inst.test[u]);
      double top_mass = 0.0;
      for (int p = 1; p <= std::min(m, inst.k); ++p) {
        top_mass += position_weight(inst.gamma, p);
      }
      double rest_mass = 0.0;
      for (int p = m + 1; p <= inst.k; ++p) {
        rest_mass += position_weight(inst.gamma, p);
      }
      std::vector<double> target_bundle(inst.n_bundles, 0.0);
      for (int b = 0; b < inst.n_bundles; ++b) {
        if (inst.test[u][b]) {
          target_bundle[b] = top_mass / m;
        } else if (inst.n_bundles > m) {
          target_bundle[b] = rest_mass / (inst.n_bundles - m);
        }
      }
      std::vector<double> target(n_entities, 0.0);
      if (!item_level) {
        target = target_bundle;
      } else {
        for (int b = 0; b < inst.n_bundles; ++b) {
          const int size = row_sum(inst.z[b]);
          if (size == 0) continue;
          for (int i = 0; i < inst.n_items; ++i) {
            if (inst.z[b][i]) target[i] += target_bundle[b] / size;
          }
        }
      }

      std::vector<double> clicks(n_entities, 0.0);
      for (int e = 0; e < n_entities; ++e) clicks[e] = exposure[e] * relevance[e];

      const auto e = split_by_group(exposure, popular);
      const auto t = split_by_group(target, popular);
      const auto y = split_by_group(relevance, popular);
      const auto c = split_by_group(clicks, popular);
      eps_sum.plus += e.plus;
      eps_sum.minus += e.minus;
      target_sum.plus += t.plus;
      target_sum.minus += t.minus;
      util_sum.plus += y.plus;
      util_sum.minus += y.minus;
      ctr_sum.plus += c.plus;
      ctr_sum.minus += c.minus;
    }

    eps_sum.plus /= n_inc;
    eps_sum.minus /= n_inc;
    target_sum.plus /= n_inc;
    target_sum.minus /= n_inc;
    ctr_sum.plus /= n_inc;
    ctr_sum.minus /= n_inc;

    const auto scalars =
        level_metrics(eps_sum, target_sum, util_sum, ctr_sum, inst.smoothing);
    if (item_level) {
      out.item = scalars;
    } else {
      out.bundle = scalars;
    }
  }
  return out;
}

double gini(const std::vector<double>& values) {
  const auto n = values.size();
  double total = 0.0;
  for (double v : values) total += v;
  double abs_diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      abs_diff += std::abs(values[i] - values[j]);
    }
  }
  return abs_diff / (2.0 * static_cast<double>(n - 1) * total);
}

}  // namespace bundlefair::reference
