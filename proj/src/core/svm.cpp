#include "core/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <list>
#include <sstream>

#include "core/error.hpp"
#include "core/format.hpp"

namespace hpi {

double rbf_kernel(std::span<const double> x, std::span<const double> z, double gamma) {
  if (x.size() != z.size()) fail_invalid("rbf_kernel: dimension mismatch");
  if (gamma <= 0.0) fail_invalid("rbf_kernel: gamma must be positive");
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - z[i];
    dist2 += d * d;
  }
  return std::exp(-gamma * dist2);
}

std::vector<double> effective_boxes(std::span<const int> labels, std::span<const double> weights,
                                    double cost, bool weighted) {
  if (labels.size() != weights.size()) fail_invalid("effective_boxes: size mismatch");
  if (cost <= 0.0) fail_invalid("effective_boxes: C must be positive");
  std::size_t p = 0, n = 0;
  for (int y : labels) (y > 0 ? p : n) += 1;
  if (p == 0 || n == 0) fail_invalid("effective_boxes: both classes required");
  std::vector<double> box(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double base = labels[i] > 0 ? cost / static_cast<double>(p) : cost / static_cast<double>(n);
    if (weighted) {
      if (weights[i] <= 0.0) fail_invalid("effective_boxes: weights must be positive");
      box[i] = base * weights[i];
    } else {
      box[i] = base;
    }
  }
  return box;
}

namespace {

// LRU cache of full kernel rows, capped by a byte budget.
class KernelCache {
 public:
  KernelCache(const TrainingProblem& problem, std::size_t budget_bytes) : problem_(problem) {
    std::size_t row_bytes = problem.size() * sizeof(double);
    max_rows_ = std::max<std::size_t>(2, row_bytes ? budget_bytes / row_bytes : 2);
    slots_.assign(problem.size(), lru_.end());
  }

  const std::vector<double>& row(std::size_t i) {
    if (slots_[i] != lru_.end()) {
      lru_.splice(lru_.begin(), lru_, slots_[i]);
      return slots_[i]->second;
    }
    if (lru_.size() >= max_rows_) {
      slots_[lru_.back().first] = lru_.end();
      lru_.pop_back();
    }
    lru_.emplace_front(i, compute_row(i));
    slots_[i] = lru_.begin();
    return slots_[i]->second;
  }

 private:
  std::vector<double> compute_row(std::size_t i) const {
    const std::size_t n = problem_.size();
    std::vector<double> out(n);
    std::span<const double> xi = problem_.row(i);
    for (std::size_t k = 0; k < n; ++k) {
      std::span<const double> xk = problem_.row(k);
      double dist2 = 0.0;
      for (std::size_t d = 0; d < xi.size(); ++d) {
        double diff = xi[d] - xk[d];
        dist2 += diff * diff;
      }
      out[k] = std::exp(-problem_.gamma * dist2);
    }
    return out;
  }

  const TrainingProblem& problem_;
  std::size_t max_rows_;
  std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  std::vector<std::list<std::pair<std::size_t, std::vector<double>>>::iterator> slots_;
};

void validate(const TrainingProblem& p) {
  const std::size_t n = p.size();
  if (n < 2) fail_invalid("training needs at least two examples");
  if (p.dim == 0 || p.features.size() != n * p.dim) fail_invalid("training features have wrong shape");
  if (p.box.size() != n) fail_invalid("training box bounds have wrong length");
  if (p.gamma <= 0.0) fail_invalid("gamma must be positive");
  if (p.tolerance <= 0.0) fail_invalid("tolerance must be positive");
  bool pos = false, neg = false;
  for (int y : p.labels) {
    if (y == 1)
      pos = true;
    else if (y == -1)
      neg = true;
    else
      fail_invalid("labels must be +1 or -1");
  }
  if (!pos || !neg) fail_invalid("training requires both classes");
  for (double b : p.box)
    if (b <= 0.0) fail_invalid("box bounds must be positive");
}

// Dual objective of the maximization form, via the maintained gradient of the
// equivalent minimization: obj = -1/2 sum_i alpha_i (G_i - 1).
double dual_objective(const std::vector<double>& alpha, const std::vector<double>& grad) {
  double acc = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) acc += alpha[i] * (grad[i] - 1.0);
  return -0.5 * acc;
}

}  // namespace

TrainResult train(const TrainingProblem& problem) {
  validate(problem);
  const std::size_t n = problem.size();
  const std::vector<int>& y = problem.labels;
  const std::vector<double>& box = problem.box;

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // G_i = sum_j Q_ij alpha_j - 1, Q_ij = y_i y_j K_ij
  KernelCache cache(problem, problem.cache_bytes);

  TrainResult result;
  if (problem.record_objective) result.objective_trace.push_back(dual_objective(alpha, grad));

  long long iter = 0;
  bool converged = false;
  while (iter < problem.max_iter) {
    // Maximal violating pair: i maximizes -y G over I_up, j minimizes it over I_low.
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    std::ptrdiff_t i = -1, j = -1;
    for (std::size_t k = 0; k < n; ++k) {
      double v = -y[k] * grad[k];
      bool in_up = y[k] > 0 ? alpha[k] < box[k] : alpha[k] > 0.0;
      bool in_low = y[k] > 0 ? alpha[k] > 0.0 : alpha[k] < box[k];
      if (in_up && v > gmax) {
        gmax = v;
        i = static_cast<std::ptrdiff_t>(k);
      }
      if (in_low && v < gmin) {
        gmin = v;
        j = static_cast<std::ptrdiff_t>(k);
      }
    }
    if (i < 0 || j < 0 || gmax - gmin < problem.tolerance) {
      converged = true;
      break;
    }

    const std::vector<double>& ki = cache.row(static_cast<std::size_t>(i));
    const std::vector<double>& kj = cache.row(static_cast<std::size_t>(j));
    double eta = ki[i] + kj[j] - 2.0 * ki[j];
    if (eta <= 0.0) eta = 1e-12;
    double step = (y[j] * grad[j] - y[i] * grad[i]) / eta;  // > 0 by selection

    // Distance each variable may move before hitting its bound.
    double limit_i = y[i] > 0 ? box[i] - alpha[i] : alpha[i];
    double limit_j = y[j] > 0 ? alpha[j] : box[j] - alpha[j];
    double limit = std::min(limit_i, limit_j);
    bool clipped = step >= limit;
    if (clipped) step = limit;

    double old_i = alpha[i], old_j = alpha[j];
    alpha[i] += y[i] * step;
    alpha[j] -= y[j] * step;
    if (clipped) {
      if (limit == limit_i) alpha[i] = y[i] > 0 ? box[i] : 0.0;
      if (limit == limit_j) alpha[j] = y[j] > 0 ? 0.0 : box[j];
    }
    double delta_i = alpha[i] - old_i, delta_j = alpha[j] - old_j;
    for (std::size_t k = 0; k < n; ++k)
      grad[k] += y[k] * (y[i] * delta_i * ki[k] + y[j] * delta_j * kj[k]);

    ++iter;
    if (problem.record_objective) result.objective_trace.push_back(dual_objective(alpha, grad));
  }

  // Bias from free support vectors: mean of -y_i G_i over 0 < alpha_i < B_i.
  // Without any free vector, the midpoint of the feasible interval.
  double bias;
  {
    double sum_free = 0.0;
    std::size_t n_free = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      double v = -y[k] * grad[k];
      if (alpha[k] > 0.0 && alpha[k] < box[k]) {
        sum_free += v;
        ++n_free;
      } else if ((alpha[k] == 0.0 && y[k] > 0) || (alpha[k] == box[k] && y[k] < 0)) {
        lower = std::max(lower, v);
      } else {
        upper = std::min(upper, v);
      }
    }
    if (n_free > 0)
      bias = sum_free / static_cast<double>(n_free);
    else
      bias = (lower + upper) / 2.0;
    result.n_free_support = n_free;
  }

  result.converged = converged;
  result.iterations = iter;
  result.dual_objective = dual_objective(alpha, grad);
  result.alpha = alpha;

  SvmModel model;
  model.gamma = problem.gamma;
  model.bias = bias;
  model.dim = problem.dim;
  for (std::size_t k = 0; k < n; ++k) {
    if (alpha[k] > 0.0) {
      model.coefficients.push_back(alpha[k] * y[k]);
      std::span<const double> xk = problem.row(k);
      model.support_vectors.insert(model.support_vectors.end(), xk.begin(), xk.end());
    }
  }
  result.n_support = model.n_support();
  result.model = std::move(model);
  return result;
}

double SvmModel::decision(std::span<const double> x) const {
  if (x.size() != dim) fail_invalid("decision: input has dimension " + std::to_string(x.size()) +
                                    ", model expects " + std::to_string(dim));
  double score = bias;
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    score += coefficients[i] * rbf_kernel(support_vector(i), x, gamma);
  return score;
}

namespace {

std::string expect_line(std::istream& in, const std::string& key, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) fail_parse("model file '" + path + "': truncated before '" + key + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() < key.size() + 2 || line.compare(0, key.size(), key) != 0 || line[key.size()] != ' ')
    fail_parse("model file '" + path + "': expected '" + key + " <value>' line");
  return line.substr(key.size() + 1);
}

double parse_real(const std::string& s, const std::string& what, const std::string& path) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    fail_parse("model file '" + path + "': bad " + what + " '" + s + "'");
  return v;
}

long long parse_int(const std::string& s, const std::string& what, const std::string& path) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail_parse("model file '" + path + "': bad " + what + " '" + s + "'");
  }
}

}  // namespace

void save_model(const SvmModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("cannot write model file '" + path + "'");
  out << "version 1\n";
  out << "gamma " << format_real(model.gamma) << '\n';
  out << "bias " << format_real(model.bias) << '\n';
  out << "dim " << model.dim << '\n';
  out << "n_sv " << model.n_support() << '\n';
  out << "mode " << model.mode << '\n';
  out << "C " << format_real(model.cost) << '\n';
  for (std::size_t i = 0; i < model.n_support(); ++i) {
    out << format_real(model.coefficients[i]);
    std::span<const double> sv = model.support_vector(i);
    for (std::size_t d = 0; d < sv.size(); ++d) out << (d ? "," : "\t") << format_real(sv[d]);
    out << '\n';
  }
  if (!out) fail_io("error writing model file '" + path + "'");
}

SvmModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open model file '" + path + "'");
  std::string version = expect_line(in, "version", path);
  if (version != "1") fail_parse("model file '" + path + "': unsupported version '" + version + "'");
  SvmModel model;
  model.gamma = parse_real(expect_line(in, "gamma", path), "gamma", path);
  model.bias = parse_real(expect_line(in, "bias", path), "bias", path);
  long long dim = parse_int(expect_line(in, "dim", path), "dim", path);
  long long n_sv = parse_int(expect_line(in, "n_sv", path), "n_sv", path);
  if (dim <= 0 || n_sv < 0) fail_parse("model file '" + path + "': non-positive dim or negative n_sv");
  model.dim = static_cast<std::size_t>(dim);
  model.mode = expect_line(in, "mode", path);
  if (model.mode != "unweighted" && model.mode != "weighted")
    fail_parse("model file '" + path + "': unknown mode '" + model.mode + "'");
  model.cost = parse_real(expect_line(in, "C", path), "C", path);
  model.coefficients.reserve(static_cast<std::size_t>(n_sv));
  model.support_vectors.reserve(static_cast<std::size_t>(n_sv) * model.dim);
  std::string line;
  for (long long i = 0; i < n_sv; ++i) {
    if (!std::getline(in, line))
      fail_parse("model file '" + path + "': truncated, expected " + std::to_string(n_sv) +
                 " support vectors");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      fail_parse("model file '" + path + "': support vector line " + std::to_string(i) + " lacks a tab");
    model.coefficients.push_back(parse_real(line.substr(0, tab), "coefficient", path));
    const char* p = line.c_str() + tab + 1;
    for (std::size_t d = 0; d < model.dim; ++d) {
      char* end = nullptr;
      double v = std::strtod(p, &end);
      if (end == p)
        fail_parse("model file '" + path + "': support vector line " + std::to_string(i) +
                   " has fewer than " + std::to_string(model.dim) + " values");
      model.support_vectors.push_back(v);
      p = (*end == ',') ? end + 1 : end;
    }
    if (*p != '\0')
      fail_parse("model file '" + path + "': support vector line " + std::to_string(i) +
                 " has trailing data");
  }
  return model;
}

}  // namespace hpi
