#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hpi {

double rbf_kernel(std::span<const double> x, std::span<const double> z, double gamma);

// Per-example upper bounds on the dual variables. Unweighted mode assigns C/P
// to positives and C/N to negatives; weighted mode multiplies those by the
// example weights.
std::vector<double> effective_boxes(std::span<const int> labels, std::span<const double> weights,
                                    double cost, bool weighted);

struct TrainingProblem {
  std::vector<double> features;  // n x dim, row-major
  std::size_t dim = 0;
  std::vector<int> labels;       // +1 / -1, both classes required
  std::vector<double> box;       // B_i > 0
  double gamma = 0.1;
  double tolerance = 1e-3;       // KKT violation gap
  long long max_iter = 10'000'000;
  std::size_t cache_bytes = 256u << 20;
  bool record_objective = false;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const { return {features.data() + i * dim, dim}; }
};

struct SvmModel {
  double gamma = 0.0;
  double bias = 0.0;
  std::size_t dim = 0;
  std::vector<double> coefficients;     // alpha_i * y_i per support vector
  std::vector<double> support_vectors;  // n_sv x dim, row-major
  // Training metadata carried in the model file.
  std::string mode = "unweighted";
  double cost = 1.0;

  std::size_t n_support() const { return coefficients.size(); }
  std::span<const double> support_vector(std::size_t i) const {
    return {support_vectors.data() + i * dim, dim};
  }
  // f(x) = sum_i coef_i K(sv_i, x) + bias. Predicted label is +1 iff f > 0.
  double decision(std::span<const double> x) const;
};

inline int predicted_label(double score) { return score > 0.0 ? 1 : -1; }

struct TrainResult {
  SvmModel model;
  bool converged = false;
  long long iterations = 0;
  double dual_objective = 0.0;
  std::size_t n_support = 0;
  std::size_t n_free_support = 0;
  std::vector<double> alpha;            // full dual solution, diagnostics
  std::vector<double> objective_trace;  // filled when record_objective is set
};

// Sequential minimal optimization over maximal-KKT-violating pairs with a
// bounded LRU kernel-row cache. Deterministic: fixed scan order, lowest index
// wins ties. Stops at tolerance or flags non-convergence after max_iter.
TrainResult train(const TrainingProblem& problem);

// Versioned line-oriented text format; reals carry 17 significant digits so a
// round-trip preserves scores.
void save_model(const SvmModel& model, const std::string& path);
SvmModel load_model(const std::string& path);

}  // namespace hpi
