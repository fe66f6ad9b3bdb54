#include "hpipred/hpipred.h"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/features.hpp"
#include "core/pipeline.hpp"
#include "core/sampling.hpp"
#include "core/seqio.hpp"
#include "core/svm.hpp"

struct hpi_corpus {
  hpi::Corpus corpus;
};

struct hpi_dataset {
  std::vector<hpi::PairExample> examples;
};

struct hpi_model {
  hpi::SvmModel model;
};

namespace {

thread_local std::string g_last_error;

int set_error(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

int map_exception() {
  try {
    throw;
  } catch (const hpi::Error& e) {
    switch (e.code()) {
      case hpi::ErrorCode::io: return set_error(HPI_ERR_IO, e.what());
      case hpi::ErrorCode::parse: return set_error(HPI_ERR_PARSE, e.what());
      case hpi::ErrorCode::invalid_argument: return set_error(HPI_ERR_INVALID, e.what());
      case hpi::ErrorCode::data: return set_error(HPI_ERR_DATA, e.what());
      case hpi::ErrorCode::internal: return set_error(HPI_ERR_INTERNAL, e.what());
    }
    return set_error(HPI_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(HPI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HPI_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(HPI_ERR_INTERNAL, "unknown error");
  }
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return HPI_OK;
  } catch (...) {
    return map_exception();
  }
}

void require(const void* p, const char* name) {
  if (!p) hpi::fail_invalid(std::string(name) + " must not be NULL");
}

const hpi::ProteinSet& set_for_role(const hpi::Corpus& corpus, int role) {
  if (role == HPI_ROLE_HOST) return corpus.hosts;
  if (role == HPI_ROLE_PATHOGEN) return corpus.viruses;
  hpi::fail_invalid("role must be HPI_ROLE_HOST or HPI_ROLE_PATHOGEN");
}

std::string sanitize_raw(const char* sequence, const char* name) {
  require(sequence, name);
  std::string upper(sequence);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  try {
    return hpi::sanitize_sequence(upper).clean;
  } catch (const hpi::Error&) {
    hpi::fail_invalid(std::string(name) + " contains no canonical amino-acid letters");
  }
}

hpi::LabeledMatrix matrix_from(const hpi_corpus* corpus, const hpi_dataset* dataset) {
  return hpi::assemble_matrix(corpus->corpus, dataset->examples);
}

std::vector<hpi::GridPoint> grid_from(const hpi_crossval_options& options) {
  std::vector<double> costs, gammas;
  if (options.grid_cost) {
    if (options.n_grid_cost == 0) hpi::fail_invalid("grid_cost is set but n_grid_cost is 0");
    costs.assign(options.grid_cost, options.grid_cost + options.n_grid_cost);
  } else {
    costs = {0.1, 1.0, 10.0, 100.0};
  }
  if (options.grid_gamma) {
    if (options.n_grid_gamma == 0) hpi::fail_invalid("grid_gamma is set but n_grid_gamma is 0");
    gammas.assign(options.grid_gamma, options.grid_gamma + options.n_grid_gamma);
  } else {
    gammas = {0.01, 0.1, 1.0};
  }
  std::vector<hpi::GridPoint> grid;
  for (double c : costs) {
    if (c <= 0.0) hpi::fail_invalid("grid C values must be positive");
    for (double g : gammas) {
      if (g <= 0.0) hpi::fail_invalid("grid gamma values must be positive");
      grid.push_back({c, g});
    }
  }
  return grid;
}

}  // namespace

extern "C" {

const char* hpi_version(void) { return "1.0.0"; }

const char* hpi_last_error(void) { return g_last_error.c_str(); }

int hpi_corpus_load(const char* interactions_path, const char* hosts_path,
                    const char* viruses_path, hpi_corpus** out) {
  return guarded([&] {
    require(hosts_path, "hosts_path");
    require(viruses_path, "viruses_path");
    require(out, "out");
    auto handle = std::make_unique<hpi_corpus>();
    if (interactions_path && *interactions_path) {
      handle->corpus = hpi::load_corpus(interactions_path, hosts_path, viruses_path, &std::cerr);
    } else {
      handle->corpus.hosts = hpi::load_protein_set(hosts_path, hpi::Role::host, &std::cerr);
      handle->corpus.viruses =
          hpi::load_protein_set(viruses_path, hpi::Role::pathogen, &std::cerr);
      handle->corpus.hosts_path = hosts_path;
      handle->corpus.viruses_path = viruses_path;
      handle->corpus.virus_digest = hpi::fnv1a64_file(viruses_path);
    }
    *out = handle.release();
  });
}

void hpi_corpus_free(hpi_corpus* corpus) { delete corpus; }

int hpi_corpus_count(const hpi_corpus* corpus, int role, size_t* out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(out, "out");
    *out = set_for_role(corpus->corpus, role).size();
  });
}

int hpi_corpus_positive_count(const hpi_corpus* corpus, size_t* out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(out, "out");
    *out = corpus->corpus.table.positives.size();
  });
}

int hpi_corpus_duplicate_count(const hpi_corpus* corpus, size_t* out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(out, "out");
    *out = corpus->corpus.table.duplicates;
  });
}

int hpi_corpus_sequence(const hpi_corpus* corpus, int role, const char* id, const char** out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(id, "id");
    require(out, "out");
    const hpi::ProteinSet& set = set_for_role(corpus->corpus, role);
    const hpi::ProteinRecord* record = set.find(id);
    if (!record)
      hpi::fail_data(std::string(role == HPI_ROLE_HOST ? "host" : "pathogen") + " '" + id +
                     "' is not in the corpus");
    *out = record->sequence.c_str();
  });
}

int hpi_corpus_write_features(const hpi_corpus* corpus, int role, const char* path) {
  return guarded([&] {
    require(corpus, "corpus");
    require(path, "path");
    hpi::write_features_tsv(set_for_role(corpus->corpus, role), path, &std::cerr);
  });
}

void hpi_sampling_options_init(hpi_sampling_options* options) {
  if (!options) return;
  options->mode = HPI_SAMPLING_DENOVO;
  options->threshold = 0.7;
  options->count_kind = HPI_COUNT_ALL;
  options->count_absolute = 0;
  options->count_ratio = 1.0;
  options->seed = 0;
  options->use_cache = 1;
  options->n_threads = 0;
}

int hpi_dataset_build(const hpi_corpus* corpus, const hpi_sampling_options* options,
                      hpi_dataset** out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(options, "options");
    require(out, "out");
    hpi::SamplingOptions opts;
    switch (options->mode) {
      case HPI_SAMPLING_RANDOM: opts.mode = hpi::SamplingMode::random_uniform; break;
      case HPI_SAMPLING_DENOVO: opts.mode = hpi::SamplingMode::denovo; break;
      default: hpi::fail_invalid("unknown sampling mode");
    }
    opts.threshold = options->threshold;
    switch (options->count_kind) {
      case HPI_COUNT_ALL: opts.count.kind = hpi::CountPolicy::Kind::all; break;
      case HPI_COUNT_ABSOLUTE:
        opts.count.kind = hpi::CountPolicy::Kind::absolute;
        opts.count.absolute = options->count_absolute;
        break;
      case HPI_COUNT_RATIO:
        opts.count.kind = hpi::CountPolicy::Kind::ratio;
        opts.count.ratio = options->count_ratio;
        break;
      default: hpi::fail_invalid("unknown count kind");
    }
    opts.seed = options->seed;
    opts.use_cache = options->use_cache != 0;
    opts.n_threads = options->n_threads;
    auto handle = std::make_unique<hpi_dataset>();
    handle->examples = hpi::build_dataset(corpus->corpus, opts, &std::cerr);
    *out = handle.release();
  });
}

int hpi_dataset_save(const hpi_dataset* dataset, const char* path) {
  return guarded([&] {
    require(dataset, "dataset");
    require(path, "path");
    hpi::write_dataset_file(path, dataset->examples);
  });
}

int hpi_dataset_load(const char* path, hpi_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto handle = std::make_unique<hpi_dataset>();
    handle->examples = hpi::read_dataset_file(path);
    *out = handle.release();
  });
}

void hpi_dataset_free(hpi_dataset* dataset) { delete dataset; }

int hpi_dataset_size(const hpi_dataset* dataset, size_t* out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "out");
    *out = dataset->examples.size();
  });
}

int hpi_dataset_counts(const hpi_dataset* dataset, size_t* positives, size_t* negatives) {
  return guarded([&] {
    require(dataset, "dataset");
    require(positives, "positives");
    require(negatives, "negatives");
    size_t pos = 0;
    for (const hpi::PairExample& e : dataset->examples)
      if (e.label > 0) ++pos;
    *positives = pos;
    *negatives = dataset->examples.size() - pos;
  });
}

int hpi_dataset_example(const hpi_dataset* dataset, size_t index, const char** host_id,
                        const char** virus_id, int* label, double* weight, int* group) {
  return guarded([&] {
    require(dataset, "dataset");
    if (index >= dataset->examples.size())
      hpi::fail_invalid("example index " + std::to_string(index) + " out of range");
    const hpi::PairExample& e = dataset->examples[index];
    if (host_id) *host_id = e.host_id.c_str();
    if (virus_id) *virus_id = e.virus_id.c_str();
    if (label) *label = e.label;
    if (weight) *weight = e.weight;
    if (group) *group = e.group;
  });
}

void hpi_train_options_init(hpi_train_options* options) {
  if (!options) return;
  options->cost = 10.0;
  options->gamma = 0.1;
  options->weighted = 0;
  options->tolerance = 1e-3;
  options->max_iter = 10'000'000;
  options->strict_convergence = 0;
  options->cache_bytes = 256ull << 20;
}

int hpi_model_train(const hpi_corpus* corpus, const hpi_dataset* dataset,
                    const hpi_train_options* options, hpi_model** out, hpi_train_stats* stats) {
  return guarded([&] {
    require(corpus, "corpus");
    require(dataset, "dataset");
    require(options, "options");
    require(out, "out");
    hpi::LabeledMatrix data = matrix_from(corpus, dataset);
    hpi::TrainingProblem problem;
    problem.features = std::move(data.features);
    problem.dim = data.dim;
    problem.labels = std::move(data.labels);
    problem.box = hpi::effective_boxes(problem.labels, data.weights, options->cost,
                                       options->weighted != 0);
    problem.gamma = options->gamma;
    problem.tolerance = options->tolerance;
    problem.max_iter = options->max_iter;
    problem.cache_bytes = static_cast<size_t>(options->cache_bytes);
    hpi::TrainResult result = hpi::train(problem);
    if (!result.converged && options->strict_convergence)
      hpi::fail_data("solver stopped after " + std::to_string(result.iterations) +
                     " iterations without reaching tolerance; raise max_iter or tolerance");
    result.model.mode = options->weighted ? "weighted" : "unweighted";
    result.model.cost = options->cost;
    if (stats) {
      stats->iterations = result.iterations;
      stats->dual_objective = result.dual_objective;
      stats->n_support = result.n_support;
      stats->converged = result.converged ? 1 : 0;
    }
    auto handle = std::make_unique<hpi_model>();
    handle->model = std::move(result.model);
    *out = handle.release();
  });
}

int hpi_model_save(const hpi_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    hpi::save_model(model->model, path);
  });
}

int hpi_model_load(const char* path, hpi_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto handle = std::make_unique<hpi_model>();
    handle->model = hpi::load_model(path);
    *out = handle.release();
  });
}

void hpi_model_free(hpi_model* model) { delete model; }

int hpi_model_gamma(const hpi_model* model, double* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->model.gamma;
  });
}

int hpi_model_bias(const hpi_model* model, double* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->model.bias;
  });
}

int hpi_model_dim(const hpi_model* model, size_t* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->model.dim;
  });
}

int hpi_model_n_sv(const hpi_model* model, size_t* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->model.n_support();
  });
}

int hpi_model_cost(const hpi_model* model, double* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->model.cost;
  });
}

int hpi_model_mode(const hpi_model* model, const char** out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->model.mode.c_str();
  });
}

int hpi_model_predict(const hpi_model* model, const char* host_sequence,
                      const char* virus_sequence, double* score, int* label) {
  return guarded([&] {
    require(model, "model");
    require(score, "score");
    std::string host = sanitize_raw(host_sequence, "host_sequence");
    std::string virus = sanitize_raw(virus_sequence, "virus_sequence");
    std::vector<double> pair =
        hpi::pair_features(hpi::protein_feature(host), hpi::protein_feature(virus));
    double s = model->model.decision(pair);
    *score = s;
    if (label) *label = hpi::predicted_label(s);
  });
}

void hpi_crossval_options_init(hpi_crossval_options* options) {
  if (!options) return;
  options->weighted = 0;
  options->fixed = 0;
  options->cost = 10.0;
  options->gamma = 0.1;
  options->grid_cost = nullptr;
  options->n_grid_cost = 0;
  options->grid_gamma = nullptr;
  options->n_grid_gamma = 0;
  options->seed = 0;
  options->tolerance = 1e-3;
  options->max_iter = 10'000'000;
  options->cache_bytes = 256ull << 20;
}

int hpi_crossval(const hpi_corpus* corpus, const hpi_dataset* dataset,
                 const hpi_dataset* test_dataset, const hpi_crossval_options* options,
                 const char* report_tsv_path, const char* report_json_path,
                 double* weighted_auc_roc, double* weighted_auc_pr) {
  return guarded([&] {
    require(corpus, "corpus");
    require(dataset, "dataset");
    require(options, "options");
    hpi::LabeledMatrix train_data = matrix_from(corpus, dataset);
    hpi::LabeledMatrix test_data;
    if (test_dataset) test_data = matrix_from(corpus, test_dataset);

    hpi::LogoOptions logo;
    if (options->fixed) {
      if (options->cost <= 0.0 || options->gamma <= 0.0)
        hpi::fail_invalid("fixed C and gamma must be positive");
      logo.fixed = hpi::GridPoint{options->cost, options->gamma};
    } else {
      logo.grid = grid_from(*options);
    }
    logo.weighted = options->weighted != 0;
    logo.seed = options->seed;
    logo.solver.tolerance = options->tolerance;
    logo.solver.max_iter = options->max_iter;
    logo.solver.cache_bytes = static_cast<size_t>(options->cache_bytes);

    hpi::CvReport report =
        hpi::run_logo(train_data, test_dataset ? &test_data : nullptr, logo);
    for (const std::string& warning : report.warnings)
      std::cerr << "warning: " << warning << "\n";
    if (report_tsv_path) hpi::write_report_tsv(report, report_tsv_path);
    if (report_json_path) hpi::write_report_json(report, report_json_path);
    if (weighted_auc_roc) *weighted_auc_roc = report.weighted_auc_roc;
    if (weighted_auc_pr) *weighted_auc_pr = report.weighted_auc_pr;
  });
}

}  // extern "C"
