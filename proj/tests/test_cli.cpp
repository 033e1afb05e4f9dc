#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "json.hpp"

#include "test_support.hpp"

using testsupport::read_file;
using testsupport::TempDir;
using testsupport::write_file;

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the installed binary (path from BUNDLEFAIR_CLI) with the given
// arguments, capturing both streams.
CliResult run_cli(const std::string& args, const fs::path& scratch) {
  const char* bin = std::getenv("BUNDLEFAIR_CLI");
  REQUIRE_MESSAGE(bin != nullptr, "BUNDLEFAIR_CLI must point at the binary");
  const auto out_path = scratch / "cli_stdout.txt";
  const auto err_path = scratch / "cli_stderr.txt";
  const std::string cmd = std::string(bin) + " " + args + " >" +
                          out_path.string() + " 2>" + err_path.string();
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  return r;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

// Three users, two bundles, pre-split; users 0 and 1 carry test data.
void write_presplit_fixture(const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "data_size.txt", "3 2 2\n");
  write_file(dir / "user_bundle_train.txt", "0 0\n1 1\n2 0\n2 1\n");
  write_file(dir / "user_bundle_valid.txt", "");
  write_file(dir / "user_bundle_test.txt", "0 1\n1 0\n");
  write_file(dir / "user_item.txt", "0 0\n1 1\n2 0\n");
  write_file(dir / "bundle_item.txt", "0 0\n0 1\n1 1\n");
}

}  // namespace

TEST_CASE("synth then audit produces a parseable, stable report") {
  TempDir tmp;
  const auto ds_dir = tmp.path() / "ds";
  const auto r_synth = run_cli(
      "synth --users 60 --bundles 20 --items 40 --ipu-bundle 4 --ipu-item 5"
      " --bundle-skew 0.8 --seed 3 --output-dir " + ds_dir.string(),
      tmp.path());
  CHECK(r_synth.exit_code == 0);
  CHECK(fs::exists(ds_dir / "data_size.txt"));
  CHECK(fs::exists(ds_dir / "user_bundle.txt"));

  const auto out1 = tmp.path() / "out1";
  const std::string audit_args =
      "audit --dataset-dir " + ds_dir.string() +
      " --predictions most_popular --k 5 --seed 1 --output-dir ";
  const auto r1 = run_cli(audit_args + out1.string(), tmp.path());
  CHECK(r1.exit_code == 0);
  CHECK(r1.err.empty());

  const auto report_text = read_file(out1 / "report.json");
  const auto j = nlohmann::json::parse(report_text);
  CHECK(j["metadata"]["dataset"].get<std::string>() == "ds");
  CHECK(j["metadata"]["predictions"].get<std::string>() == "most_popular");
  CHECK(j["metadata"]["k"].get<int>() == 5);
  CHECK(j["metadata"]["split_seed"].get<std::uint64_t>() == 1);
  const double recall = j["overall"]["recall_at_k"].get<double>();
  CHECK(recall >= 0.0);
  CHECK(recall <= 1.0);
  REQUIRE(j["overall"]["bundle"].is_object());
  REQUIRE(j["overall"]["item"].is_object());

  // The companion outputs are all present and sized to the universe.
  CHECK(count_lines(read_file(out1 / "groups_bundle.csv")) == 21);
  CHECK(count_lines(read_file(out1 / "groups_item.csv")) == 41);
  CHECK(count_lines(read_file(out1 / "groups_user.csv")) == 61);
  CHECK(read_file(out1 / "report.csv").rfind("scope,level,metric,value\n", 0) ==
        0);

  // Re-running the identical audit gives byte-identical reports.
  const auto out2 = tmp.path() / "out2";
  const auto r2 = run_cli(audit_args + out2.string(), tmp.path());
  CHECK(r2.exit_code == 0);
  CHECK(read_file(out2 / "report.json") == report_text);
  CHECK(read_file(out2 / "report.csv") == read_file(out1 / "report.csv"));
}

TEST_CASE("audit on a pre-split directory keeps the shipped split") {
  TempDir tmp;
  const auto ds_dir = tmp.path() / "fixture";
  write_presplit_fixture(ds_dir);
  write_file(tmp.path() / "preds.txt", "0\t1\n1\t0\n2\t0\n");

  const auto out = tmp.path() / "out";
  const auto r = run_cli("audit --dataset-dir " + ds_dir.string() +
                             " --predictions " +
                             (tmp.path() / "preds.txt").string() +
                             " --output-dir " + out.string(),
                         tmp.path());
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(read_file(out / "report.json"));
  CHECK(j["metadata"]["split_seed"].is_null());
  CHECK(j["metadata"]["n_included_users"].get<int>() == 2);
  CHECK(j["metadata"]["n_excluded_users"].get<int>() == 1);
  // Both included users receive their single relevant bundle at rank 1.
  CHECK(j["overall"]["recall_at_k"].get<double>() == doctest::Approx(1.0));
  CHECK(j["overall"]["ndcg_at_k"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("a missing predictions file fails with its own error code") {
  TempDir tmp;
  const auto ds_dir = tmp.path() / "fixture";
  write_presplit_fixture(ds_dir);
  const auto r = run_cli("audit --dataset-dir " + ds_dir.string() +
                             " --predictions " +
                             (tmp.path() / "absent.txt").string() +
                             " --output-dir " + (tmp.path() / "o").string(),
                         tmp.path());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error: E_PREDICTIONS_NOT_FOUND:") != std::string::npos);
  CHECK(count_lines(r.err) == 1);
}

TEST_CASE("a broken dataset directory fails with the ingest error code") {
  TempDir tmp;
  const auto ds_dir = tmp.path() / "fixture";
  write_presplit_fixture(ds_dir);
  fs::remove(ds_dir / "bundle_item.txt");
  const auto r = run_cli("audit --dataset-dir " + ds_dir.string() +
                             " --predictions most_popular --output-dir " +
                             (tmp.path() / "o").string(),
                         tmp.path());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error: E_MISSING_FILE:") != std::string::npos);
}

TEST_CASE("uniformity table has one row per level and source") {
  TempDir tmp;
  const auto ds_dir = tmp.path() / "ds";
  run_cli("synth --users 50 --bundles 15 --items 30 --ipu-bundle 4"
          " --ipu-item 4 --seed 2 --output-dir " + ds_dir.string(),
          tmp.path());
  const auto out = tmp.path() / "gini";
  const auto r = run_cli("gini --dataset-dir " + ds_dir.string() +
                             " --predictions most_popular --k 5 --output-dir " +
                             out.string(),
                         tmp.path());
  CHECK(r.exit_code == 0);
  const auto table = read_file(out / "gini.csv");
  CHECK(count_lines(table) == 5);
  CHECK(table.rfind("level,source,gini\n", 0) == 0);
  CHECK(table.find("bundle,interactions,") != std::string::npos);
  CHECK(table.find("bundle,run,") != std::string::npos);
  CHECK(table.find("item,interactions,") != std::string::npos);
  CHECK(table.find("item,run,") != std::string::npos);
}

TEST_CASE("distribution outputs cover histograms, scatter and exposure") {
  TempDir tmp;
  const auto ds_dir = tmp.path() / "fixture";
  write_presplit_fixture(ds_dir);
  write_file(tmp.path() / "preds.txt", "0\t1\n1\t0\n2\t0\n");

  const auto out = tmp.path() / "dist";
  const auto r = run_cli("distributions --dataset-dir " + ds_dir.string() +
                             " --predictions " +
                             (tmp.path() / "preds.txt").string() +
                             " --output-dir " + out.string(),
                         tmp.path());
  CHECK(r.exit_code == 0);

  // Train frequencies are [2, 2]: the all-equal histogram collapses to one
  // row holding every observation.
  const auto hist = read_file(out / "hist_bundle_interactions.csv");
  CHECK(count_lines(hist) == 2);
  CHECK(hist.find(",2\n") != std::string::npos);

  // Every bundle has at least one training interaction: one scatter row each.
  CHECK(count_lines(read_file(out / "scatter_bundle_item.csv")) == 3);

  CHECK(count_lines(read_file(out / "exposure_bundle.csv")) == 3);
  CHECK(count_lines(read_file(out / "exposure_item.csv")) == 3);
  CHECK(fs::exists(out / "hist_item_interactions.csv"));
  CHECK(fs::exists(out / "hist_bundle_recommendations.csv"));
  CHECK(fs::exists(out / "hist_item_recommendations.csv"));
}

TEST_CASE("bad command lines are rejected before any work happens") {
  TempDir tmp;
  const auto no_sub = run_cli("", tmp.path());
  CHECK(no_sub.exit_code != 0);

  const auto bad_level = run_cli(
      "audit --dataset-dir x --predictions y --levels nope --output-dir " +
          (tmp.path() / "o").string(),
      tmp.path());
  CHECK(bad_level.exit_code != 0);
  CHECK_FALSE(bad_level.err.empty());
}
