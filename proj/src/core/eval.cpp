#include "core/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace hpi {

Confusion confusion_at_threshold(const std::vector<ScoredLabel>& scored, double threshold) {
  Confusion c;
  for (const ScoredLabel& s : scored) {
    bool predicted_positive = s.score >= threshold;
    if (s.label > 0)
      (predicted_positive ? c.tp : c.fn)++;
    else
      (predicted_positive ? c.fp : c.tn)++;
  }
  return c;
}

double auc_roc(const std::vector<ScoredLabel>& scored) {
  std::size_t n = scored.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scored[a].score < scored[b].score; });

  long positives = 0, negatives = 0;
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scored[order[j]].score == scored[order[i]].score) ++j;
    // Average 1-based rank across the tie block [i, j).
    double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) {
      if (scored[order[k]].label > 0) {
        ++positives;
        rank_sum_pos += avg_rank;
      } else {
        ++negatives;
      }
    }
    i = j;
  }
  if (positives == 0 || negatives == 0) fail_invalid("auc_roc requires both classes");
  double p = static_cast<double>(positives);
  return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
}

double auc_pr(const std::vector<ScoredLabel>& scored) {
  std::size_t n = scored.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scored[a].score > scored[b].score; });

  long total_pos = 0;
  for (const ScoredLabel& s : scored)
    if (s.label > 0) ++total_pos;
  if (total_pos == 0) fail_invalid("auc_pr requires at least one positive");

  double ap = 0.0;
  long tp = 0, fp = 0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    // Same-score examples enter together; precision is taken where the block ends.
    while (j < n && scored[order[j]].score == scored[order[i]].score) ++j;
    for (std::size_t k = i; k < j; ++k) {
      if (scored[order[k]].label > 0)
        ++tp;
      else
        ++fp;
    }
    double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> logo_split(const LabeledMatrix& data,
                                                                         int group) {
  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.groups[i] == group)
      test_idx.push_back(i);
    else
      train_idx.push_back(i);
  }
  if (test_idx.empty()) fail_invalid("group " + std::to_string(group) + " has no examples");
  return {std::move(train_idx), std::move(test_idx)};
}

std::vector<GridPoint> default_grid() {
  std::vector<GridPoint> grid;
  for (double c : {0.1, 1.0, 10.0, 100.0})
    for (double g : {0.01, 0.1, 1.0}) grid.push_back({c, g});
  return grid;
}

namespace {

TrainResult train_subset(const LabeledMatrix& data, const std::vector<std::size_t>& idx,
                         GridPoint params, bool weighted, const SolverOptions& solver) {
  TrainingProblem problem;
  problem.dim = data.dim;
  problem.gamma = params.gamma;
  problem.tolerance = solver.tolerance;
  problem.max_iter = solver.max_iter;
  problem.cache_bytes = solver.cache_bytes;
  problem.features.reserve(idx.size() * data.dim);
  problem.labels.reserve(idx.size());
  std::vector<double> weights;
  weights.reserve(idx.size());
  for (std::size_t i : idx) {
    const double* row = data.features.data() + i * data.dim;
    problem.features.insert(problem.features.end(), row, row + data.dim);
    problem.labels.push_back(data.labels[i]);
    weights.push_back(data.weights[i]);
  }
  problem.box = effective_boxes(problem.labels, weights, params.cost, weighted);
  TrainResult result = train(problem);
  result.model.mode = weighted ? "weighted" : "unweighted";
  result.model.cost = params.cost;
  return result;
}

std::vector<ScoredLabel> score_subset(const SvmModel& model, const LabeledMatrix& data,
                                      const std::vector<std::size_t>& idx) {
  std::vector<ScoredLabel> scored;
  scored.reserve(idx.size());
  for (std::size_t i : idx) {
    std::span<const double> row(data.features.data() + i * data.dim, data.dim);
    scored.push_back({model.decision(row), data.labels[i]});
  }
  return scored;
}

bool has_both_classes(const LabeledMatrix& data, const std::vector<std::size_t>& idx) {
  bool pos = false, neg = false;
  for (std::size_t i : idx) (data.labels[i] > 0 ? pos : neg) = true;
  return pos && neg;
}

}  // namespace

GridPoint nested_select(const LabeledMatrix& data, const std::vector<std::size_t>& indices,
                        const std::vector<GridPoint>& grid, bool weighted, std::uint64_t seed,
                        const SolverOptions& solver) {
  if (grid.empty()) fail_invalid("hyperparameter grid is empty");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i : indices) (data.labels[i] > 0 ? pos : neg).push_back(i);

  std::vector<std::size_t> fold_a, fold_b;
  bool valid = false;
  for (std::uint64_t attempt = 0; attempt < 10 && !valid; ++attempt) {
    fold_a.clear();
    fold_b.clear();
    std::mt19937_64 rng(mix_seed(seed, attempt));
    std::vector<std::size_t> p = pos, n = neg;
    shuffle_values(p, rng);
    shuffle_values(n, rng);
    // Alternate assignment keeps the class ratio of both halves.
    for (std::size_t k = 0; k < p.size(); ++k) (k % 2 == 0 ? fold_a : fold_b).push_back(p[k]);
    for (std::size_t k = 0; k < n.size(); ++k) (k % 2 == 0 ? fold_a : fold_b).push_back(n[k]);
    valid = has_both_classes(data, fold_a) && has_both_classes(data, fold_b);
  }
  if (!valid)
    fail_data("could not split the training fold into two folds that both keep both classes");

  std::sort(fold_a.begin(), fold_a.end());
  std::sort(fold_b.begin(), fold_b.end());

  GridPoint best = grid.front();
  double best_score = -1.0;
  for (const GridPoint& point : grid) {
    double total = 0.0;
    for (int half = 0; half < 2; ++half) {
      const std::vector<std::size_t>& train_idx = half == 0 ? fold_a : fold_b;
      const std::vector<std::size_t>& eval_idx = half == 0 ? fold_b : fold_a;
      TrainResult result = train_subset(data, train_idx, point, weighted, solver);
      total += auc_roc(score_subset(result.model, data, eval_idx));
    }
    double mean = total / 2.0;
    bool better = mean > best_score;
    bool tie_smaller = mean == best_score && (point.cost < best.cost ||
                                              (point.cost == best.cost && point.gamma < best.gamma));
    if (better || tie_smaller) {
      best = point;
      best_score = mean;
    }
  }
  return best;
}

void finalize_report(CvReport& report) {
  report.total_p = 0;
  report.total_n = 0;
  double roc_sum = 0.0, pr_sum = 0.0;
  double weight_sum = 0.0;
  for (const GroupResult& row : report.rows) {
    if (!row.defined) continue;
    double w = static_cast<double>(row.p_test + row.n_test);
    report.total_p += row.p_test;
    report.total_n += row.n_test;
    roc_sum += w * row.auc_roc;
    pr_sum += w * row.auc_pr;
    weight_sum += w;
  }
  if (weight_sum > 0.0) {
    report.weighted_auc_roc = roc_sum / weight_sum;
    report.weighted_auc_pr = pr_sum / weight_sum;
  } else {
    report.weighted_auc_roc = 0.0;
    report.weighted_auc_pr = 0.0;
    report.warnings.push_back("no group produced a defined score");
  }
}

CvReport run_logo(const LabeledMatrix& train_data, const LabeledMatrix* test_data,
                  const LogoOptions& options) {
  if (train_data.size() == 0) fail_invalid("cross-validation needs a non-empty dataset");
  const LabeledMatrix& fold_source = test_data ? *test_data : train_data;
  if (test_data && test_data->dim != train_data.dim)
    fail_invalid("test dataset dimensionality differs from the training dataset");

  std::vector<GridPoint> grid = options.grid.empty() ? default_grid() : options.grid;

  std::vector<int> groups;
  for (std::size_t i = 0; i < fold_source.size(); ++i) groups.push_back(fold_source.groups[i]);
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());

  CvReport report;
  bool saw_ungrouped = false;
  for (int group : groups) {
    if (group == 0) {  // ungrouped rows train but never form their own fold
      saw_ungrouped = true;
      continue;
    }
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < fold_source.size(); ++i)
      if (fold_source.groups[i] == group) test_idx.push_back(i);
    std::vector<std::size_t> train_idx;
    for (std::size_t i = 0; i < train_data.size(); ++i)
      if (train_data.groups[i] != group) train_idx.push_back(i);

    if (options.fold_observer) options.fold_observer(group, train_idx, test_idx);

    GroupResult row;
    row.group = group;
    for (std::size_t i : test_idx) (fold_source.labels[i] > 0 ? row.p_test : row.n_test)++;

    if (!has_both_classes(train_data, train_idx)) {
      row.defined = false;
      report.warnings.push_back("group " + std::to_string(group) +
                                ": training fold lacks a class, skipped");
      report.rows.push_back(row);
      continue;
    }

    GridPoint chosen;
    if (options.fixed) {
      chosen = *options.fixed;
    } else {
      chosen = nested_select(train_data, train_idx, grid, options.weighted,
                             mix_seed(options.seed, static_cast<std::uint64_t>(group)),
                             options.solver);
    }
    row.cost = chosen.cost;
    row.gamma = chosen.gamma;

    TrainResult result = train_subset(train_data, train_idx, chosen, options.weighted,
                                      options.solver);
    if (row.p_test == 0 || row.n_test == 0) {
      row.defined = false;
      report.warnings.push_back("group " + std::to_string(group) +
                                ": test fold is single-class, scores undefined");
      report.rows.push_back(row);
      continue;
    }
    std::vector<ScoredLabel> scored = score_subset(result.model, fold_source, test_idx);
    row.auc_roc = auc_roc(scored);
    row.auc_pr = auc_pr(scored);
    report.rows.push_back(row);
  }
  if (saw_ungrouped)
    report.warnings.push_back("ungrouped examples participate in training folds only");

  finalize_report(report);
  return report;
}

}  // namespace hpi
