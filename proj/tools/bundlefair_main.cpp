#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "bundlefair/audit.hpp"
#include "bundlefair/baselines.hpp"
#include "bundlefair/errors.hpp"
#include "bundlefair/exposure.hpp"
#include "bundlefair/grouping.hpp"
#include "bundlefair/io.hpp"
#include "bundlefair/metrics.hpp"
#include "bundlefair/split.hpp"
#include "bundlefair/synthetic.hpp"

namespace {

namespace fs = std::filesystem;
using namespace bundlefair;

struct CliConfig {
  std::string dataset_dir;
  std::string predictions;
  int k = 20;
  double gamma = 0.5;
  double pop_share = 0.2;
  double tendency_lo = 0.9;
  double tendency_hi = 1.1;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  std::vector<std::string> levels{"bundle", "item"};
  bool no_smoothing = false;
  int threads = 0;
};

void add_common_options(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--dataset-dir", cfg.dataset_dir,
                  "Directory with data_size.txt and interaction files")
      ->required();
  cmd->add_option("--predictions", cfg.predictions,
                  "Prediction file (user TAB b1,b2,...) or a baseline: "
                  "most_popular, random, item_affinity")
      ->required();
  cmd->add_option("--k", cfg.k, "List depth")->capture_default_str();
  cmd->add_option("--gamma", cfg.gamma, "Browsing patience parameter")
      ->capture_default_str();
  cmd->add_option("--pop-share", cfg.pop_share,
                  "Interaction share of the popular group")
      ->capture_default_str();
  cmd->add_option("--tendency-lo", cfg.tendency_lo,
                  "Below this ratio a user is item-oriented")
      ->capture_default_str();
  cmd->add_option("--tendency-hi", cfg.tendency_hi,
                  "Above this ratio a user is bundle-oriented")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed,
                  "Seed for the holdout split and the random baseline")
      ->capture_default_str();
  cmd->add_option("--output-dir", cfg.output_dir, "Where to write outputs")
      ->envname("BUNDLEFAIR_OUTPUT_DIR")
      ->capture_default_str();
  cmd->add_option("--levels", cfg.levels,
                  "Entity levels to audit (bundle, item)")
      ->check(CLI::IsMember({"bundle", "item"}))
      ->capture_default_str();
  cmd->add_flag("--no-smoothing", cfg.no_smoothing,
                "Propagate infinities instead of flooring ratio operands");
  cmd->add_option("--threads", cfg.threads, "Worker thread count (0 = auto)")
      ->envname("BUNDLEFAIR_THREADS")
      ->capture_default_str();
}

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

struct Pipeline {
  InteractionDataset data;
  SplitDataset splits;
  bool presplit = false;
  RecommendationRun run;
  std::string predictions_name;
  GroupAssignment bundle_groups;
  GroupAssignment item_groups;
  std::vector<double> scores;
  std::vector<Tendency> tendency;
  std::vector<int> included;
};

Pipeline build_pipeline(const CliConfig& cfg) {
  Pipeline p;
  auto loaded = load_dataset(cfg.dataset_dir);
  p.data = std::move(loaded.data);
  if (loaded.splits) {
    p.splits = std::move(*loaded.splits);
    p.presplit = true;
  } else {
    p.splits = split_user_bundle(p.data.user_bundle, SplitRatios{}, cfg.seed);
  }

  if (cfg.predictions == "most_popular") {
    p.run = most_popular_recommender(p.splits.train, cfg.k);
    p.predictions_name = cfg.predictions;
  } else if (cfg.predictions == "random") {
    p.run = random_recommender(p.data.n_bundles(), cfg.k, cfg.seed,
                               p.splits.train);
    p.predictions_name = cfg.predictions;
  } else if (cfg.predictions == "item_affinity") {
    p.run = item_affinity_recommender(p.splits.train, p.data.user_item,
                                      p.data.bundle_item, cfg.k);
    p.predictions_name = cfg.predictions;
  } else {
    if (!fs::exists(cfg.predictions)) {
      throw AuditError(errc::predictions_not_found,
                       "no prediction file at " + cfg.predictions +
                           " and no baseline of that name");
    }
    p.run = load_recommendations(cfg.predictions, cfg.k, p.data.n_users(),
                                 p.data.n_bundles());
    p.predictions_name = fs::path(cfg.predictions).filename().string();
  }

  p.bundle_groups = partition_by_popularity(
      Level::Bundle, bundle_frequency(p.splits.train), cfg.pop_share);
  p.item_groups = partition_by_popularity(
      Level::Item,
      item_frequency(p.splits.train, p.data.bundle_item, p.data.user_item),
      cfg.pop_share);
  p.scores = tendency_scores(p.splits.train, p.data.user_item);
  p.tendency =
      partition_users_by_tendency(p.scores, cfg.tendency_lo, cfg.tendency_hi);
  p.included = included_users(p.splits.test);
  return p;
}

EvaluateOptions evaluate_options(const CliConfig& cfg) {
  EvaluateOptions opt;
  opt.k = cfg.k;
  opt.gamma = cfg.gamma;
  opt.pop_share = cfg.pop_share;
  opt.tendency_lo = cfg.tendency_lo;
  opt.tendency_hi = cfg.tendency_hi;
  opt.bundle_level =
      std::find(cfg.levels.begin(), cfg.levels.end(), "bundle") !=
      cfg.levels.end();
  opt.item_level = std::find(cfg.levels.begin(), cfg.levels.end(), "item") !=
                   cfg.levels.end();
  opt.smoothing = !cfg.no_smoothing;
  return opt;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw AuditError(errc::io, "cannot write " + path.string());
  out << content;
  if (!out.flush()) {
    throw AuditError(errc::io, "write failed for " + path.string());
  }
}

std::string group_csv(const GroupAssignment& groups) {
  std::ostringstream out;
  out << "entity_id,group,frequency\n";
  for (std::size_t e = 0; e < groups.popular.size(); ++e) {
    out << e << ',' << (groups.popular[e] ? "G+" : "G-") << ','
        << format_float(groups.frequency[e]) << '\n';
  }
  return out.str();
}

std::string user_group_csv(const std::vector<double>& scores,
                           const std::vector<Tendency>& tendency) {
  std::ostringstream out;
  out << "user_id,r_u,group\n";
  for (std::size_t u = 0; u < scores.size(); ++u) {
    out << u << ',' << format_float(scores[u]) << ','
        << tendency_name(tendency[u]) << '\n';
  }
  return out.str();
}

// 50 bins over log(1 + value); bounds reported back in raw units.
std::string histogram_csv(const std::vector<double>& values) {
  constexpr int kBins = 50;
  std::ostringstream out;
  out << "bin_lo,bin_hi,count\n";
  if (values.empty()) return out.str();
  double lo = std::log1p(values.front());
  double hi = lo;
  for (double v : values) {
    lo = std::min(lo, std::log1p(v));
    hi = std::max(hi, std::log1p(v));
  }
  if (hi <= lo) {
    out << format_float(std::expm1(lo)) << ',' << format_float(std::expm1(hi))
        << ',' << values.size() << '\n';
    return out.str();
  }
  const double step = (hi - lo) / kBins;
  std::vector<std::size_t> counts(kBins, 0);
  for (double v : values) {
    auto bin = static_cast<int>((std::log1p(v) - lo) / step);
    bin = std::clamp(bin, 0, kBins - 1);
    ++counts[static_cast<std::size_t>(bin)];
  }
  for (int b = 0; b < kBins; ++b) {
    out << format_float(std::expm1(lo + b * step)) << ','
        << format_float(std::expm1(lo + (b + 1) * step)) << ','
        << counts[static_cast<std::size_t>(b)] << '\n';
  }
  return out.str();
}

// How often each entity shows up across all recommendation lists.
std::vector<double> appearance_counts(const RecommendationRun& run,
                                      Level level,
                                      const SparseBinaryMatrix& bundle_item) {
  const auto n = static_cast<std::size_t>(
      level == Level::Bundle ? bundle_item.rows() : bundle_item.cols());
  std::vector<double> counts(n, 0.0);
  for (const auto& list : run.lists) {
    for (int b : list) {
      if (level == Level::Bundle) {
        counts[static_cast<std::size_t>(b)] += 1.0;
      } else {
        for (int i : bundle_item.row(b)) {
          counts[static_cast<std::size_t>(i)] += 1.0;
        }
      }
    }
  }
  return counts;
}

std::string exposure_csv(const std::vector<double>& exposure) {
  std::ostringstream out;
  out << "entity_id,exposure\n";
  for (std::size_t e = 0; e < exposure.size(); ++e) {
    out << e << ',' << format_float(exposure[e]) << '\n';
  }
  return out.str();
}

int cmd_audit(const CliConfig& cfg) {
  apply_threads(cfg.threads);
  auto p = build_pipeline(cfg);
  auto report = evaluate(p.run, p.data, p.splits, p.bundle_groups,
                         p.item_groups, p.tendency, evaluate_options(cfg),
                         p.predictions_name);
  if (p.presplit) report.split_seed.reset();

  const fs::path out_dir{cfg.output_dir};
  fs::create_directories(out_dir);
  write_text(out_dir / "report.json", report_to_json(report));
  write_text(out_dir / "report.csv", report_to_csv(report));
  write_text(out_dir / "groups_bundle.csv", group_csv(p.bundle_groups));
  write_text(out_dir / "groups_item.csv", group_csv(p.item_groups));
  write_text(out_dir / "groups_user.csv",
             user_group_csv(p.scores, p.tendency));
  std::cout << "audited " << report.n_included << " users ("
            << report.n_excluded << " without test interactions); reports in "
            << out_dir.string() << "\n";
  return 0;
}

int cmd_distributions(const CliConfig& cfg) {
  apply_threads(cfg.threads);
  auto p = build_pipeline(cfg);
  const BrowsingModel model{cfg.gamma};

  const auto bundle_freq = bundle_frequency(p.splits.train);
  const auto item_freq =
      item_frequency(p.splits.train, p.data.bundle_item, p.data.user_item);

  const fs::path out_dir{cfg.output_dir};
  fs::create_directories(out_dir);
  write_text(out_dir / "hist_bundle_interactions.csv",
             histogram_csv(bundle_freq));
  write_text(out_dir / "hist_item_interactions.csv", histogram_csv(item_freq));
  write_text(out_dir / "hist_bundle_recommendations.csv",
             histogram_csv(
                 appearance_counts(p.run, Level::Bundle, p.data.bundle_item)));
  write_text(out_dir / "hist_item_recommendations.csv",
             histogram_csv(
                 appearance_counts(p.run, Level::Item, p.data.bundle_item)));

  // Bundle popularity against the mean popularity of the bundle's items.
  std::ostringstream scatter;
  scatter << "bundle_id,bundle_freq,avg_item_freq\n";
  for (int b = 0; b < p.data.n_bundles(); ++b) {
    const double freq = bundle_freq[static_cast<std::size_t>(b)];
    if (freq < 1.0) continue;
    const auto items = p.data.bundle_item.row(b);
    double sum = 0.0;
    for (int i : items) sum += item_freq[static_cast<std::size_t>(i)];
    scatter << b << ',' << format_float(freq) << ','
            << format_float(sum / static_cast<double>(items.size())) << '\n';
  }
  write_text(out_dir / "scatter_bundle_item.csv", scatter.str());

  write_text(out_dir / "exposure_bundle.csv",
             exposure_csv(accumulated_exposure(p.run, model, Level::Bundle,
                                               p.data.n_bundles(),
                                               p.data.bundle_item,
                                               p.included)));
  write_text(out_dir / "exposure_item.csv",
             exposure_csv(accumulated_exposure(p.run, model, Level::Item,
                                               p.data.n_bundles(),
                                               p.data.bundle_item,
                                               p.included)));
  std::cout << "distribution files written to " << out_dir.string() << "\n";
  return 0;
}

int cmd_gini(const CliConfig& cfg) {
  apply_threads(cfg.threads);
  auto p = build_pipeline(cfg);
  const BrowsingModel model{cfg.gamma};

  std::ostringstream out;
  out << "level,source,gini\n";
  out << "bundle,interactions,"
      << format_float(gini_index(bundle_frequency(p.splits.train))) << '\n';
  out << "bundle,run,"
      << format_float(gini_index(accumulated_exposure(
             p.run, model, Level::Bundle, p.data.n_bundles(),
             p.data.bundle_item, p.included)))
      << '\n';
  out << "item,interactions,"
      << format_float(gini_index(item_frequency(
             p.splits.train, p.data.bundle_item, p.data.user_item)))
      << '\n';
  out << "item,run,"
      << format_float(gini_index(accumulated_exposure(
             p.run, model, Level::Item, p.data.n_bundles(),
             p.data.bundle_item, p.included)))
      << '\n';

  const fs::path out_dir{cfg.output_dir};
  fs::create_directories(out_dir);
  write_text(out_dir / "gini.csv", out.str());
  std::cout << "gini table written to "
            << (out_dir / "gini.csv").string() << "\n";
  return 0;
}

int cmd_synth(const SyntheticConfig& cfg, const std::string& output_dir) {
  const auto ds = generate_synthetic(cfg);
  save_dataset(output_dir, ds);
  const auto stats = dataset_stats(ds);
  std::cout << "wrote " << ds.name << ": " << stats.n_users << " users, "
            << stats.n_bundles << " bundles, " << stats.n_items << " items, "
            << stats.n_ub << " bundle and " << stats.n_ui
            << " item interactions to " << output_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Product-side fairness audit for bundle recommendation runs"};
  app.require_subcommand(1);

  CliConfig cfg;
  auto* audit_cmd = app.add_subcommand(
      "audit", "Evaluate utility and exposure fairness of a run");
  add_common_options(audit_cmd, cfg);
  auto* dist_cmd = app.add_subcommand(
      "distributions",
      "Export frequency histograms, popularity scatter and exposure vectors");
  add_common_options(dist_cmd, cfg);
  auto* gini_cmd = app.add_subcommand(
      "gini", "Uniformity of interactions vs recommended exposure");
  add_common_options(gini_cmd, cfg);

  SyntheticConfig synth_cfg;
  std::string synth_out = ".";
  auto* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic dataset on disk");
  synth_cmd->add_option("--users", synth_cfg.n_users)->capture_default_str();
  synth_cmd->add_option("--bundles", synth_cfg.n_bundles)
      ->capture_default_str();
  synth_cmd->add_option("--items", synth_cfg.n_items)->capture_default_str();
  synth_cmd->add_option("--bundle-size-mean", synth_cfg.bundle_size_mean)
      ->capture_default_str();
  synth_cmd->add_option("--bundle-skew", synth_cfg.bundle_popularity_skew)
      ->capture_default_str();
  synth_cmd->add_option("--item-skew", synth_cfg.item_popularity_skew)
      ->capture_default_str();
  synth_cmd->add_option("--ipu-bundle", synth_cfg.interactions_per_user_ub)
      ->capture_default_str();
  synth_cmd->add_option("--ipu-item", synth_cfg.interactions_per_user_ui)
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_cfg.seed)->capture_default_str();
  synth_cmd->add_option("--name", synth_cfg.name)->capture_default_str();
  synth_cmd->add_option("--output-dir", synth_out)
      ->envname("BUNDLEFAIR_OUTPUT_DIR")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (audit_cmd->parsed()) return cmd_audit(cfg);
    if (dist_cmd->parsed()) return cmd_distributions(cfg);
    if (gini_cmd->parsed()) return cmd_gini(cfg);
    if (synth_cmd->parsed()) return cmd_synth(synth_cfg, synth_out);
  } catch (const bundlefair::AuditError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: E_IO: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
