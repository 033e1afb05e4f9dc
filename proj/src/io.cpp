#include "bundlefair/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "bundlefair/errors.hpp"

namespace bundlefair {

namespace {

std::string loc(const std::filesystem::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no);
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

// Parses one non-negative integer, advancing past leading blanks.
bool parse_int(std::string_view& s, int& out) {
  std::size_t i = s.find_first_not_of(" \t");
  if (i == std::string_view::npos) return false;
  s.remove_prefix(i);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{}) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return true;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw AuditError(errc::missing_file, "cannot open " + path.string());
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw AuditError(errc::io, "cannot write " + path.string());
  }
  return out;
}

std::vector<std::pair<int, int>> read_pairs(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::pair<int, int>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    std::string_view s{line};
    if (blank(s)) continue;
    int row = 0;
    int col = 0;
    if (!parse_int(s, row) || !parse_int(s, col) || !blank(s)) {
      throw AuditError(errc::parse,
                       loc(path, line_no) + ": expected two integers, got \"" +
                           line + "\"");
    }
    pairs.emplace_back(row, col);
  }
  return pairs;
}

SparseBinaryMatrix load_pairs_checked(const std::filesystem::path& path,
                                      int n_rows, int n_cols,
                                      std::size_t* dropped) {
  try {
    return SparseBinaryMatrix::from_pairs(n_rows, n_cols, read_pairs(path),
                                          dropped);
  } catch (const AuditError& e) {
    if (e.code() == errc::out_of_range) {
      throw AuditError(errc::out_of_range, path.string() + ": " + e.detail());
    }
    throw;
  }
}

}  // namespace

SparseBinaryMatrix load_pairs_file(const std::filesystem::path& path,
                                   int n_rows, int n_cols,
                                   std::size_t* dropped_duplicates) {
  return load_pairs_checked(path, n_rows, n_cols, dropped_duplicates);
}

void save_pairs_file(const std::filesystem::path& path,
                     const SparseBinaryMatrix& m) {
  auto out = open_output(path);
  for (const auto& [row, col] : m.pairs()) {
    out << row << '\t' << col << '\n';
  }
  if (!out) throw AuditError(errc::io, "write failed for " + path.string());
}

LoadedDataset load_dataset(const std::filesystem::path& dir,
                           const std::string& name) {
  const auto size_path = dir / "data_size.txt";
  auto size_in = open_input(size_path);
  std::string line;
  if (!std::getline(size_in, line)) {
    throw AuditError(errc::parse, size_path.string() + ": file is empty");
  }
  strip_cr(line);
  std::string_view s{line};
  int n_users = 0;
  int n_bundles = 0;
  int n_items = 0;
  if (!parse_int(s, n_users) || !parse_int(s, n_bundles) ||
      !parse_int(s, n_items) || !blank(s)) {
    throw AuditError(errc::parse,
                     size_path.string() +
                         ": expected \"n_users n_bundles n_items\", got \"" +
                         line + "\"");
  }
  if (n_users <= 0 || n_bundles <= 0 || n_items <= 0) {
    throw AuditError(errc::parse,
                     size_path.string() + ": sizes must be positive");
  }

  LoadedDataset loaded;
  loaded.data.name = name.empty() ? dir.filename().string() : name;

  std::size_t dups = 0;
  auto load = [&](const std::filesystem::path& p, int rows, int cols) {
    std::size_t d = 0;
    auto m = load_pairs_checked(p, rows, cols, &d);
    dups += d;
    return m;
  };

  loaded.data.user_item = load(dir / "user_item.txt", n_users, n_items);
  loaded.data.bundle_item = load(dir / "bundle_item.txt", n_bundles, n_items);

  const auto train_path = dir / "user_bundle_train.txt";
  const auto test_path = dir / "user_bundle_test.txt";
  auto valid_path = dir / "user_bundle_valid.txt";
  if (!std::filesystem::exists(valid_path) &&
      std::filesystem::exists(dir / "user_bundle_tune.txt")) {
    valid_path = dir / "user_bundle_tune.txt";
  }

  if (std::filesystem::exists(train_path)) {
    SplitDataset splits;
    splits.train = load(train_path, n_users, n_bundles);
    splits.valid = load(valid_path, n_users, n_bundles);
    splits.test = load(test_path, n_users, n_bundles);
    auto all = splits.train.pairs();
    auto valid_pairs = splits.valid.pairs();
    auto test_pairs = splits.test.pairs();
    all.insert(all.end(), valid_pairs.begin(), valid_pairs.end());
    all.insert(all.end(), test_pairs.begin(), test_pairs.end());
    loaded.data.user_bundle =
        SparseBinaryMatrix::from_pairs(n_users, n_bundles, all);
    loaded.splits = std::move(splits);
  } else {
    loaded.data.user_bundle =
        load(dir / "user_bundle.txt", n_users, n_bundles);
  }

  loaded.duplicate_pairs = dups;
  loaded.data.validate();
  return loaded;
}

void save_dataset(const std::filesystem::path& dir,
                  const InteractionDataset& ds, const SplitDataset* splits) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_output(dir / "data_size.txt");
    out << ds.n_users() << ' ' << ds.n_bundles() << ' ' << ds.n_items()
        << '\n';
  }
  save_pairs_file(dir / "user_item.txt", ds.user_item);
  save_pairs_file(dir / "bundle_item.txt", ds.bundle_item);
  if (splits != nullptr) {
    save_pairs_file(dir / "user_bundle_train.txt", splits->train);
    save_pairs_file(dir / "user_bundle_valid.txt", splits->valid);
    save_pairs_file(dir / "user_bundle_test.txt", splits->test);
  } else {
    save_pairs_file(dir / "user_bundle.txt", ds.user_bundle);
  }
}

RecommendationRun load_recommendations(const std::filesystem::path& path,
                                       int k, int n_users, int n_bundles) {
  if (k <= 0) throw AuditError(errc::config, "k must be positive");
  auto in = open_input(path);
  RecommendationRun run;
  run.k = k;
  run.lists.assign(static_cast<std::size_t>(n_users), {});
  std::vector<bool> seen_user(static_cast<std::size_t>(n_users), false);
  std::vector<int> mark(static_cast<std::size_t>(n_bundles), -1);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    std::string_view s{line};
    if (blank(s)) continue;

    int user = 0;
    if (!parse_int(s, user)) {
      throw AuditError(errc::parse,
                       loc(path, line_no) + ": expected a user id");
    }
    if (user < 0 || user >= n_users) {
      throw AuditError(errc::out_of_range,
                       loc(path, line_no) + ": user " + std::to_string(user) +
                           " outside [0, " + std::to_string(n_users) + ")");
    }
    if (seen_user[static_cast<std::size_t>(user)]) {
      throw AuditError(errc::duplicate_user,
                       loc(path, line_no) + ": user " + std::to_string(user) +
                           " listed more than once");
    }
    seen_user[static_cast<std::size_t>(user)] = true;

    auto& list = run.lists[static_cast<std::size_t>(user)];
    // Remainder is a comma separated bundle list.
    std::size_t i = s.find_first_not_of(" \t");
    if (i != std::string_view::npos) {
      s.remove_prefix(i);
      while (!s.empty()) {
        int bundle = 0;
        const auto [ptr, ec] =
            std::from_chars(s.data(), s.data() + s.size(), bundle);
        if (ec != std::errc{}) {
          throw AuditError(errc::parse,
                           loc(path, line_no) + ": bad bundle id near \"" +
                               std::string(s.substr(0, 16)) + "\"");
        }
        s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
        if (bundle < 0 || bundle >= n_bundles) {
          throw AuditError(errc::out_of_range,
                           loc(path, line_no) + ": bundle " +
                               std::to_string(bundle) + " outside [0, " +
                               std::to_string(n_bundles) + ")");
        }
        if (mark[static_cast<std::size_t>(bundle)] ==
            static_cast<int>(line_no)) {
          throw AuditError(errc::duplicate_bundle,
                           loc(path, line_no) + ": bundle " +
                               std::to_string(bundle) +
                               " repeated within one list");
        }
        mark[static_cast<std::size_t>(bundle)] = static_cast<int>(line_no);
        list.push_back(bundle);
        if (static_cast<int>(list.size()) > k) {
          throw AuditError(errc::parse,
                           loc(path, line_no) + ": list longer than k=" +
                               std::to_string(k));
        }
        if (!s.empty() && s.front() == ',') {
          s.remove_prefix(1);
          if (s.empty() || s.front() == ',') {
            throw AuditError(errc::parse,
                             loc(path, line_no) + ": empty list entry");
          }
        } else if (!blank(s)) {
          throw AuditError(errc::parse,
                           loc(path, line_no) + ": trailing garbage \"" +
                               std::string(s.substr(0, 16)) + "\"");
        } else {
          break;
        }
      }
    }
  }
  return run;
}

void save_recommendations(const std::filesystem::path& path,
                          const RecommendationRun& run) {
  auto out = open_output(path);
  for (std::size_t u = 0; u < run.lists.size(); ++u) {
    const auto& list = run.lists[u];
    if (list.empty()) continue;
    out << u << '\t';
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i > 0) out << ',';
      out << list[i];
    }
    out << '\n';
  }
  if (!out) throw AuditError(errc::io, "write failed for " + path.string());
}

}  // namespace bundlefair
