#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "core/error.hpp"
#include "core/eval.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace hpi;

namespace {

// One row per (feature value, label, group); dim 1, unit weights.
LabeledMatrix make_data(const std::vector<std::tuple<double, int, int>>& rows) {
  LabeledMatrix data;
  data.dim = 1;
  for (const auto& [x, y, g] : rows) {
    data.features.push_back(x);
    data.labels.push_back(y);
    data.weights.push_back(1.0);
    data.groups.push_back(g);
  }
  return data;
}

std::vector<ScoredLabel> worked_example() {
  return {{0.9, 1}, {0.8, -1}, {0.3, 1}, {0.1, -1}};
}

// n >= 2; the discrete score levels force plenty of ties.
std::vector<ScoredLabel> random_scored(std::mt19937_64& rng, std::size_t n) {
  static const double levels[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<ScoredLabel> scored;
  for (std::size_t i = 0; i < n; ++i)
    scored.push_back({levels[rng() % 5], rng() % 2 == 0 ? 1 : -1});
  std::size_t i_pos = rng() % n;
  scored[i_pos].label = 1;
  scored[(i_pos + 1 + rng() % (n - 1)) % n].label = -1;
  return scored;
}

}  // namespace

TEST_CASE("confusion counts at a threshold") {
  auto scored = worked_example();
  auto c = confusion_at_threshold(scored, 0.5);
  CHECK(c.tp == 1);
  CHECK(c.fp == 1);
  CHECK(c.tn == 1);
  CHECK(c.fn == 1);

  auto all_positive = confusion_at_threshold(scored, -std::numeric_limits<double>::infinity());
  CHECK(all_positive.tp == 2);
  CHECK(all_positive.fp == 2);
  CHECK(all_positive.tn == 0);

  auto all_negative = confusion_at_threshold(scored, std::numeric_limits<double>::infinity());
  CHECK(all_negative.tp == 0);
  CHECK(all_negative.fn == 2);
  CHECK(all_negative.tn == 2);

  // The boundary score itself predicts positive.
  auto boundary = confusion_at_threshold(scored, 0.8);
  CHECK(boundary.fp == 1);
}

TEST_CASE("ranking metrics on the worked example") {
  auto scored = worked_example();
  CHECK(auc_roc(scored) == 0.75);
  CHECK(auc_pr(scored) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("perfect and inverted rankings") {
  std::vector<ScoredLabel> perfect{{0.9, 1}, {0.8, 1}, {0.2, -1}, {0.1, -1}};
  CHECK(auc_roc(perfect) == 1.0);
  CHECK(auc_pr(perfect) == 1.0);

  std::vector<ScoredLabel> inverted{{0.9, -1}, {0.8, -1}, {0.2, 1}, {0.1, 1}};
  CHECK(auc_roc(inverted) == 0.0);
}

TEST_CASE("fully tied scores") {
  std::vector<ScoredLabel> tied{{0.5, 1}, {0.5, -1}, {0.5, 1}, {0.5, -1}, {0.5, -1}};
  CHECK(auc_roc(tied) == 0.5);
  CHECK(auc_pr(tied) == doctest::Approx(2.0 / 5.0).epsilon(1e-12));  // prevalence
}

TEST_CASE("metrics depend only on the ranking") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    auto scored = random_scored(rng, 2 + rng() % 10);
    auto transformed = scored;
    for (auto& s : transformed) s.score = 3.0 * s.score + 2.0;
    CHECK(auc_roc(transformed) == auc_roc(scored));
    CHECK(auc_pr(transformed) == auc_pr(scored));
  }
}

TEST_CASE("flipping labels complements the ROC area") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    auto scored = random_scored(rng, 2 + rng() % 10);
    auto flipped = scored;
    for (auto& s : flipped) s.label = -s.label;
    CHECK(auc_roc(flipped) == doctest::Approx(1.0 - auc_roc(scored)).epsilon(1e-12));
  }
}

TEST_CASE("rank-based areas match pair counting and threshold sweeps") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    auto scored = random_scored(rng, 2 + rng() % 11);
    CHECK(auc_roc(scored) == doctest::Approx(oracle::auc_roc_pairwise(scored)).epsilon(1e-12));
    CHECK(auc_pr(scored) == doctest::Approx(oracle::auc_pr_threshold_sweep(scored)).epsilon(1e-12));
  }
}

TEST_CASE("single positive ranked last") {
  for (std::size_t k : {2u, 5u, 9u}) {
    std::vector<ScoredLabel> scored;
    for (std::size_t i = 0; i < k; ++i)
      scored.push_back({static_cast<double>(k - i), i + 1 == k ? 1 : -1});
    CHECK(auc_pr(scored) == doctest::Approx(1.0 / static_cast<double>(k)).epsilon(1e-12));
    CHECK(auc_roc(scored) == 0.0);
  }
}

TEST_CASE("degenerate inputs") {
  std::vector<ScoredLabel> all_pos{{0.4, 1}, {0.6, 1}};
  CHECK(auc_pr(all_pos) == 1.0);
  CHECK_THROWS_AS(auc_roc(all_pos), Error);

  std::vector<ScoredLabel> all_neg{{0.4, -1}, {0.6, -1}};
  CHECK_THROWS_AS(auc_pr(all_neg), Error);
  CHECK_THROWS_AS(auc_roc(all_neg), Error);

  CHECK_THROWS_AS(auc_roc({}), Error);
  CHECK_THROWS_AS(auc_pr({}), Error);
}

TEST_CASE("group split partitions the data") {
  auto data = make_data({{1.0, 1, 1}, {2.0, 1, 2}, {3.0, -1, 1}, {4.0, -1, 3}});
  auto [train_idx, test_idx] = logo_split(data, 1);
  CHECK(test_idx == std::vector<std::size_t>{0, 2});
  CHECK(train_idx == std::vector<std::size_t>{1, 3});
  CHECK_THROWS_AS(logo_split(data, 9), Error);
}

TEST_CASE("hyperparameter selection returns the lone grid point") {
  auto data = make_data({{1.0, 1, 1}, {1.1, 1, 1}, {1.2, 1, 1},
                         {-1.0, -1, 1}, {-1.1, -1, 1}, {-1.2, -1, 1}});
  std::vector<std::size_t> indices{0, 1, 2, 3, 4, 5};
  auto point = nested_select(data, indices, {{7.0, 0.25}}, false, 1, SolverOptions{});
  CHECK(point.cost == 7.0);
  CHECK(point.gamma == 0.25);
}

TEST_CASE("hyperparameter selection prefers the setting that ranks held-out data") {
  // gamma 1e6 collapses every cross-kernel to ~0, so held-out scores are all
  // ties (AUC 0.5); a moderate gamma separates this data perfectly.
  auto data = make_data({{1.0, 1, 1}, {1.07, 1, 1}, {1.16, 1, 1}, {1.23, 1, 1},
                         {-1.0, -1, 1}, {-1.07, -1, 1}, {-1.16, -1, 1}, {-1.23, -1, 1}});
  std::vector<std::size_t> indices{0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<GridPoint> grid{{1.0, 1e6}, {1.0, 0.5}};
  auto point = nested_select(data, indices, grid, false, 3, SolverOptions{});
  CHECK(point.gamma == 0.5);
}

TEST_CASE("hyperparameter ties go to the smaller cost, then the smaller gamma") {
  auto data = make_data({{1.0, 1, 1}, {1.07, 1, 1}, {1.16, 1, 1}, {1.23, 1, 1},
                         {-1.0, -1, 1}, {-1.07, -1, 1}, {-1.16, -1, 1}, {-1.23, -1, 1}});
  std::vector<std::size_t> indices{0, 1, 2, 3, 4, 5, 6, 7};
  // All three settings reach AUC 1 on this data.
  std::vector<GridPoint> grid{{10.0, 0.5}, {1.0, 1.0}, {1.0, 0.5}};
  auto point = nested_select(data, indices, grid, false, 5, SolverOptions{});
  CHECK(point.cost == 1.0);
  CHECK(point.gamma == 0.5);
}

TEST_CASE("hyperparameter selection fails on single-class data") {
  auto data = make_data({{1.0, 1, 1}, {1.1, 1, 1}, {1.2, 1, 1}});
  std::vector<std::size_t> indices{0, 1, 2};
  CHECK_THROWS_AS(nested_select(data, indices, {{1.0, 0.5}}, false, 1, SolverOptions{}), Error);
}

TEST_CASE("cross-validation over separable groups") {
  std::vector<std::tuple<double, int, int>> rows;
  for (int g = 1; g <= 3; ++g) {
    for (int k = 0; k < 2; ++k) {
      rows.push_back({1.0 + 0.05 * g + 0.01 * k, 1, g});
      rows.push_back({-1.0 - 0.05 * g - 0.01 * k, -1, g});
    }
  }
  auto data = make_data(rows);

  LogoOptions options;
  options.fixed = GridPoint{10.0, 0.5};
  std::map<int, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> seen;
  options.fold_observer = [&](int group, const std::vector<std::size_t>& train_idx,
                              const std::vector<std::size_t>& test_idx) {
    seen[group] = {train_idx, test_idx};
  };

  auto report = run_logo(data, nullptr, options);
  REQUIRE(report.rows.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& row = report.rows[r];
    CHECK(row.group == static_cast<int>(r) + 1);
    CHECK(row.defined);
    CHECK(row.p_test == 2);
    CHECK(row.n_test == 2);
    CHECK(row.cost == 10.0);
    CHECK(row.gamma == 0.5);
    CHECK(row.auc_roc == 1.0);
    CHECK(row.auc_pr == 1.0);
  }
  CHECK(report.total_p == 6);
  CHECK(report.total_n == 6);
  CHECK(report.weighted_auc_roc == 1.0);
  CHECK(report.weighted_auc_pr == 1.0);
  CHECK(report.warnings.empty());

  // Every fold is pure: test rows carry the left-out group, train rows never do.
  REQUIRE(seen.size() == 3);
  for (const auto& [group, folds] : seen) {
    const auto& [train_idx, test_idx] = folds;
    CHECK(train_idx.size() + test_idx.size() == data.size());
    for (std::size_t i : test_idx) CHECK(data.groups[i] == group);
    for (std::size_t i : train_idx) CHECK(data.groups[i] != group);
    std::set<std::size_t> overlap(train_idx.begin(), train_idx.end());
    for (std::size_t i : test_idx) CHECK(overlap.count(i) == 0);
  }
}

TEST_CASE("a single group cannot form a training fold") {
  auto data = make_data({{1.0, 1, 1}, {-1.0, -1, 1}});
  LogoOptions options;
  options.fixed = GridPoint{1.0, 0.5};
  auto report = run_logo(data, nullptr, options);
  REQUIRE(report.rows.size() == 1);
  CHECK_FALSE(report.rows[0].defined);
  CHECK(report.total_p == 0);
  CHECK(report.total_n == 0);
  REQUIRE(!report.warnings.empty());
}

TEST_CASE("ungrouped rows only ever train") {
  auto data = make_data({{1.0, 1, 0}, {-1.0, -1, 0},
                         {1.1, 1, 1}, {-1.1, -1, 1},
                         {1.2, 1, 2}, {-1.2, -1, 2}});
  LogoOptions options;
  options.fixed = GridPoint{10.0, 0.5};
  std::vector<int> observed_groups;
  options.fold_observer = [&](int group, const std::vector<std::size_t>& train_idx,
                              const std::vector<std::size_t>&) {
    observed_groups.push_back(group);
    // The two ungrouped rows are always available for training.
    CHECK(std::count(train_idx.begin(), train_idx.end(), 0u) == 1);
    CHECK(std::count(train_idx.begin(), train_idx.end(), 1u) == 1);
  };
  auto report = run_logo(data, nullptr, options);
  CHECK(observed_groups == std::vector<int>{1, 2});
  REQUIRE(report.rows.size() == 2);
  bool mentioned = false;
  for (const auto& w : report.warnings) mentioned |= w.find("ungrouped") != std::string::npos;
  CHECK(mentioned);
}

TEST_CASE("single-class test folds are reported but not averaged") {
  std::vector<std::tuple<double, int, int>> rows;
  for (int g = 1; g <= 2; ++g) {
    rows.push_back({1.0 + 0.05 * g, 1, g});
    rows.push_back({-1.0 - 0.05 * g, -1, g});
  }
  rows.push_back({1.4, 1, 3});  // group 3 has no negatives
  rows.push_back({1.45, 1, 3});
  auto data = make_data(rows);

  LogoOptions options;
  options.fixed = GridPoint{10.0, 0.5};
  auto report = run_logo(data, nullptr, options);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[2].group == 3);
  CHECK_FALSE(report.rows[2].defined);
  CHECK(report.rows[2].p_test == 2);
  CHECK(report.total_p == 2);  // only the defined rows contribute
  CHECK(report.total_n == 2);
  bool mentioned = false;
  for (const auto& w : report.warnings) mentioned |= w.find("single-class") != std::string::npos;
  CHECK(mentioned);
}

TEST_CASE("weighted averages recompute from the rows") {
  std::vector<std::tuple<double, int, int>> rows;
  for (int g = 1; g <= 2; ++g) {
    for (int k = 0; k < 3; ++k) {
      rows.push_back({1.0 + 0.05 * g + 0.01 * k, 1, g});
      rows.push_back({-1.0 - 0.05 * g - 0.01 * k, -1, g});
    }
  }
  // Group 3 is adversarial: its labels oppose the feature sign.
  rows.push_back({-1.5, 1, 3});
  rows.push_back({1.5, -1, 3});
  auto data = make_data(rows);

  LogoOptions options;
  options.fixed = GridPoint{10.0, 0.5};
  auto report = run_logo(data, nullptr, options);
  REQUIRE(report.rows.size() == 3);

  double roc_sum = 0.0, pr_sum = 0.0, weight_sum = 0.0;
  long p = 0, n = 0;
  for (const auto& row : report.rows) {
    if (!row.defined) continue;
    double w = static_cast<double>(row.p_test + row.n_test);
    roc_sum += w * row.auc_roc;
    pr_sum += w * row.auc_pr;
    weight_sum += w;
    p += row.p_test;
    n += row.n_test;
  }
  CHECK(report.total_p == p);
  CHECK(report.total_n == n);
  CHECK(report.weighted_auc_roc == roc_sum / weight_sum);
  CHECK(report.weighted_auc_pr == pr_sum / weight_sum);
  CHECK(report.weighted_auc_roc < 1.0);  // the adversarial group really dragged it down
}

TEST_CASE("test folds can come from a separate dataset") {
  std::vector<std::tuple<double, int, int>> train_rows;
  for (int g = 1; g <= 2; ++g) {
    for (int k = 0; k < 3; ++k) {
      train_rows.push_back({1.0 + 0.05 * g + 0.01 * k, 1, g});
      train_rows.push_back({-1.0 - 0.05 * g - 0.01 * k, -1, g});
    }
  }
  auto train_data = make_data(train_rows);
  auto test_data = make_data({{1.3, 1, 1}, {-1.3, -1, 1}, {1.35, 1, 2}, {-1.35, -1, 2}});

  LogoOptions options;
  options.fixed = GridPoint{10.0, 0.5};
  options.fold_observer = [&](int group, const std::vector<std::size_t>& train_idx,
                              const std::vector<std::size_t>& test_idx) {
    CHECK(test_idx.size() == 2);  // indices into test_data
    for (std::size_t i : test_idx) CHECK(test_data.groups[i] == group);
    CHECK(train_idx.size() == 6);  // indices into train_data, other group only
    for (std::size_t i : train_idx) CHECK(train_data.groups[i] != group);
  };
  auto report = run_logo(train_data, &test_data, options);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].p_test == 1);
  CHECK(report.rows[0].n_test == 1);
  CHECK(report.weighted_auc_roc == 1.0);

  auto bad_dim = test_data;
  bad_dim.dim = 2;
  CHECK_THROWS_AS(run_logo(train_data, &bad_dim, options), Error);
}
