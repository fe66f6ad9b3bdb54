#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/svm.hpp"

namespace hpi {

struct ScoredLabel {
  double score = 0.0;
  int label = 1;  // +1 / -1
};

struct Confusion {
  long tp = 0, fp = 0, tn = 0, fn = 0;
};

// Predict +1 iff score >= threshold.
Confusion confusion_at_threshold(const std::vector<ScoredLabel>& scored, double threshold);

// Mann-Whitney statistic: P(score_pos > score_neg) + 1/2 P(tie).
double auc_roc(const std::vector<ScoredLabel>& scored);

// Average precision; equal scores form one threshold block with precision
// taken at the block end.
double auc_pr(const std::vector<ScoredLabel>& scored);

// Flattened dataset ready for training/scoring.
struct LabeledMatrix {
  std::vector<double> features;  // n x dim, row-major
  std::size_t dim = 0;
  std::vector<int> labels;
  std::vector<double> weights;
  std::vector<int> groups;

  std::size_t size() const { return labels.size(); }
};

// (train indices, test indices) for leaving out group `group`.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> logo_split(const LabeledMatrix& data,
                                                                         int group);

struct GridPoint {
  double cost = 1.0;
  double gamma = 0.1;
};

std::vector<GridPoint> default_grid();

struct SolverOptions {
  double tolerance = 1e-3;
  long long max_iter = 10'000'000;
  std::size_t cache_bytes = 256u << 20;
};

// Stratified, seeded 2-fold selection of (C, gamma) by mean AUC-ROC across the
// two folds; ties go to the smaller C, then the smaller gamma. Folds missing a
// class are re-drawn up to 10 times.
GridPoint nested_select(const LabeledMatrix& data, const std::vector<std::size_t>& indices,
                        const std::vector<GridPoint>& grid, bool weighted, std::uint64_t seed,
                        const SolverOptions& solver);

struct GroupResult {
  int group = 0;
  long p_test = 0, n_test = 0;
  double cost = 0.0, gamma = 0.0;
  double auc_roc = 0.0, auc_pr = 0.0;
  bool defined = true;  // false when the test fold is single-class
};

struct CvReport {
  std::vector<GroupResult> rows;  // ascending group order
  long total_p = 0, total_n = 0;
  double weighted_auc_roc = 0.0;
  double weighted_auc_pr = 0.0;
  std::vector<std::string> warnings;
};

struct LogoOptions {
  std::optional<GridPoint> fixed;  // bypass nested selection when set
  std::vector<GridPoint> grid;     // defaults to default_grid() when empty
  bool weighted = false;
  std::uint64_t seed = 0;
  SolverOptions solver;
  // Test-only observer of each fold's composition.
  std::function<void(int group, const std::vector<std::size_t>& train_idx,
                     const std::vector<std::size_t>& test_idx)>
      fold_observer;
};

// Leave-one-group-out cross-validation. Test folds come from `test_data` when
// given (its groups drive the folds) while training folds always come from
// `train_data`, which supports protocols that fix the test examples across
// differently sampled training sets.
CvReport run_logo(const LabeledMatrix& train_data, const LabeledMatrix* test_data,
                  const LogoOptions& options);

// Weighted averages over defined rows, weighted by test-fold size. Exposed so
// reports can be recomputed and checked exactly.
void finalize_report(CvReport& report);

}  // namespace hpi
