// Command-line front end. Everything below talks to the library through the
// C API only, so this file doubles as a usage example for bindings.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"

#include "hpipred/hpipred.h"

namespace {

int report_failure(int status) {
  std::cerr << "error: " << hpi_last_error() << "\n";
  return status;
}

#define HPI_CHECK(call)                           \
  do {                                            \
    int hpi_check_rc = (call);                    \
    if (hpi_check_rc != HPI_OK) return report_failure(hpi_check_rc); \
  } while (0)

struct CorpusDeleter {
  void operator()(hpi_corpus* p) const { hpi_corpus_free(p); }
};
struct DatasetDeleter {
  void operator()(hpi_dataset* p) const { hpi_dataset_free(p); }
};
struct ModelDeleter {
  void operator()(hpi_model* p) const { hpi_model_free(p); }
};
using CorpusPtr = std::unique_ptr<hpi_corpus, CorpusDeleter>;
using DatasetPtr = std::unique_ptr<hpi_dataset, DatasetDeleter>;
using ModelPtr = std::unique_ptr<hpi_model, ModelDeleter>;

std::string format_score(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- featurize ----

struct FeaturizeArgs {
  std::string hosts, viruses, out_hosts, out_viruses;
};

int run_featurize(const FeaturizeArgs& args) {
  hpi_corpus* corpus_raw = nullptr;
  HPI_CHECK(hpi_corpus_load(nullptr, args.hosts.c_str(), args.viruses.c_str(), &corpus_raw));
  CorpusPtr corpus(corpus_raw);
  HPI_CHECK(hpi_corpus_write_features(corpus.get(), HPI_ROLE_HOST, args.out_hosts.c_str()));
  HPI_CHECK(hpi_corpus_write_features(corpus.get(), HPI_ROLE_PATHOGEN, args.out_viruses.c_str()));
  size_t n_hosts = 0, n_viruses = 0;
  HPI_CHECK(hpi_corpus_count(corpus.get(), HPI_ROLE_HOST, &n_hosts));
  HPI_CHECK(hpi_corpus_count(corpus.get(), HPI_ROLE_PATHOGEN, &n_viruses));
  std::cout << "wrote " << args.out_hosts << " (" << n_hosts << " proteins) and "
            << args.out_viruses << " (" << n_viruses << " proteins)\n";
  return 0;
}

// ---- build-dataset ----

struct BuildArgs {
  std::string interactions, hosts, viruses, out;
  std::string mode = "denovo";
  std::string count = "all";
  double threshold = 0.7;
  unsigned long long seed = 0;
  bool no_cache = false;
  int threads = 0;
};

bool parse_count(const std::string& text, hpi_sampling_options& options, std::string& error) {
  if (text == "all") {
    options.count_kind = HPI_COUNT_ALL;
    return true;
  }
  if (text.rfind("ratio:", 0) == 0) {
    try {
      size_t used = 0;
      double ratio = std::stod(text.substr(6), &used);
      if (used != text.size() - 6 || ratio <= 0.0) throw std::invalid_argument(text);
      options.count_kind = HPI_COUNT_RATIO;
      options.count_ratio = ratio;
      return true;
    } catch (const std::exception&) {
      error = "--count ratio value must be a positive number, got '" + text + "'";
      return false;
    }
  }
  try {
    size_t used = 0;
    unsigned long long n = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    options.count_kind = HPI_COUNT_ABSOLUTE;
    options.count_absolute = static_cast<size_t>(n);
    return true;
  } catch (const std::exception&) {
    error = "--count must be 'all', 'ratio:K', or a non-negative integer, got '" + text + "'";
    return false;
  }
}

int run_build(const BuildArgs& args) {
  hpi_sampling_options options;
  hpi_sampling_options_init(&options);
  options.mode = args.mode == "random" ? HPI_SAMPLING_RANDOM : HPI_SAMPLING_DENOVO;
  options.threshold = args.threshold;
  options.seed = args.seed;
  options.use_cache = args.no_cache ? 0 : 1;
  options.n_threads = args.threads;
  std::string parse_error;
  if (!parse_count(args.count, options, parse_error)) {
    std::cerr << "error: " << parse_error << "\n";
    return static_cast<int>(HPI_ERR_INVALID);
  }

  hpi_corpus* corpus_raw = nullptr;
  HPI_CHECK(hpi_corpus_load(args.interactions.c_str(), args.hosts.c_str(), args.viruses.c_str(),
                            &corpus_raw));
  CorpusPtr corpus(corpus_raw);
  hpi_dataset* dataset_raw = nullptr;
  HPI_CHECK(hpi_dataset_build(corpus.get(), &options, &dataset_raw));
  DatasetPtr dataset(dataset_raw);
  HPI_CHECK(hpi_dataset_save(dataset.get(), args.out.c_str()));
  size_t positives = 0, negatives = 0;
  HPI_CHECK(hpi_dataset_counts(dataset.get(), &positives, &negatives));
  std::cout << "wrote " << args.out << ": " << positives << " positives, " << negatives
            << " negatives\n";
  return 0;
}

// ---- train ----

struct TrainArgs {
  std::string dataset, hosts, viruses, out;
  std::string mode = "unweighted";
  double cost = 10.0;
  double gamma = 0.1;
  double tolerance = 1e-3;
  long long max_iter = 10'000'000;
  unsigned long long cache_mb = 256;
  bool strict = false;
};

int run_train(const TrainArgs& args) {
  hpi_corpus* corpus_raw = nullptr;
  HPI_CHECK(hpi_corpus_load(nullptr, args.hosts.c_str(), args.viruses.c_str(), &corpus_raw));
  CorpusPtr corpus(corpus_raw);
  hpi_dataset* dataset_raw = nullptr;
  HPI_CHECK(hpi_dataset_load(args.dataset.c_str(), &dataset_raw));
  DatasetPtr dataset(dataset_raw);

  hpi_train_options options;
  hpi_train_options_init(&options);
  options.cost = args.cost;
  options.gamma = args.gamma;
  options.weighted = args.mode == "weighted" ? 1 : 0;
  options.tolerance = args.tolerance;
  options.max_iter = args.max_iter;
  options.cache_bytes = args.cache_mb << 20;

  hpi_train_stats stats{};
  hpi_model* model_raw = nullptr;
  HPI_CHECK(hpi_model_train(corpus.get(), dataset.get(), &options, &model_raw, &stats));
  ModelPtr model(model_raw);
  HPI_CHECK(hpi_model_save(model.get(), args.out.c_str()));

  std::cout << "iterations: " << stats.iterations << "\n"
            << "dual_objective: " << format_score(stats.dual_objective) << "\n"
            << "support_vectors: " << stats.n_support << "\n"
            << "converged: " << (stats.converged ? "yes" : "no") << "\n"
            << "wrote " << args.out << "\n";
  if (!stats.converged) {
    std::cerr << "warning: solver hit the iteration limit before reaching tolerance\n";
    if (args.strict) return static_cast<int>(HPI_ERR_DATA);
  }
  return 0;
}

// ---- crossval ----

struct CrossvalArgs {
  std::string dataset, hosts, viruses;
  std::string test_dataset;
  std::string out_tsv, out_json;
  std::string mode = "unweighted";
  std::optional<double> cost, gamma;
  std::vector<double> grid_cost, grid_gamma;
  unsigned long long seed = 0;
  double tolerance = 1e-3;
  long long max_iter = 10'000'000;
};

int run_crossval(const CrossvalArgs& args) {
  if (args.cost.has_value() != args.gamma.has_value()) {
    std::cerr << "error: --C and --gamma must be given together\n";
    return static_cast<int>(HPI_ERR_INVALID);
  }
  if (args.cost && (!args.grid_cost.empty() || !args.grid_gamma.empty())) {
    std::cerr << "error: fixed --C/--gamma and --grid-c/--grid-gamma are mutually exclusive\n";
    return static_cast<int>(HPI_ERR_INVALID);
  }

  hpi_corpus* corpus_raw = nullptr;
  HPI_CHECK(hpi_corpus_load(nullptr, args.hosts.c_str(), args.viruses.c_str(), &corpus_raw));
  CorpusPtr corpus(corpus_raw);
  hpi_dataset* dataset_raw = nullptr;
  HPI_CHECK(hpi_dataset_load(args.dataset.c_str(), &dataset_raw));
  DatasetPtr dataset(dataset_raw);
  DatasetPtr test_dataset;
  if (!args.test_dataset.empty()) {
    hpi_dataset* test_raw = nullptr;
    HPI_CHECK(hpi_dataset_load(args.test_dataset.c_str(), &test_raw));
    test_dataset.reset(test_raw);
  }

  hpi_crossval_options options;
  hpi_crossval_options_init(&options);
  options.weighted = args.mode == "weighted" ? 1 : 0;
  if (args.cost) {
    options.fixed = 1;
    options.cost = *args.cost;
    options.gamma = *args.gamma;
  }
  if (!args.grid_cost.empty()) {
    options.grid_cost = args.grid_cost.data();
    options.n_grid_cost = args.grid_cost.size();
  }
  if (!args.grid_gamma.empty()) {
    options.grid_gamma = args.grid_gamma.data();
    options.n_grid_gamma = args.grid_gamma.size();
  }
  options.seed = args.seed;
  options.tolerance = args.tolerance;
  options.max_iter = args.max_iter;

  double auc_roc = 0.0, auc_pr = 0.0;
  HPI_CHECK(hpi_crossval(corpus.get(), dataset.get(), test_dataset.get(), &options,
                         args.out_tsv.empty() ? nullptr : args.out_tsv.c_str(),
                         args.out_json.empty() ? nullptr : args.out_json.c_str(), &auc_roc,
                         &auc_pr));
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", auc_roc);
  std::cout << "weighted_auc_roc: " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.6f", auc_pr);
  std::cout << "weighted_auc_pr: " << buf << "\n";
  return 0;
}

// ---- predict ----

struct PredictArgs {
  std::string model;
  std::string pairs, hosts, viruses, out;
  std::string host_seq, virus_seq;
};

int predict_pairs(const hpi_model* model, const PredictArgs& args) {
  if (args.hosts.empty() || args.viruses.empty()) {
    std::cerr << "error: --pairs needs --hosts and --viruses\n";
    return static_cast<int>(HPI_ERR_INVALID);
  }
  hpi_corpus* corpus_raw = nullptr;
  HPI_CHECK(hpi_corpus_load(nullptr, args.hosts.c_str(), args.viruses.c_str(), &corpus_raw));
  CorpusPtr corpus(corpus_raw);

  std::ifstream in(args.pairs, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << args.pairs << "'\n";
    return static_cast<int>(HPI_ERR_IO);
  }
  std::ostream* out = &std::cout;
  std::ofstream out_file;
  if (!args.out.empty()) {
    out_file.open(args.out, std::ios::binary);
    if (!out_file) {
      std::cerr << "error: cannot write '" << args.out << "'\n";
      return static_cast<int>(HPI_ERR_IO);
    }
    out = &out_file;
  }

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      std::cerr << "error: '" << args.pairs << "' line " << line_no
                << ": expected host_id<TAB>virus_id\n";
      return static_cast<int>(HPI_ERR_PARSE);
    }
    std::string host_id = line.substr(0, tab);
    std::string virus_id = line.substr(tab + 1);
    const char* host_seq = nullptr;
    const char* virus_seq = nullptr;
    HPI_CHECK(hpi_corpus_sequence(corpus.get(), HPI_ROLE_HOST, host_id.c_str(), &host_seq));
    HPI_CHECK(hpi_corpus_sequence(corpus.get(), HPI_ROLE_PATHOGEN, virus_id.c_str(), &virus_seq));
    double score = 0.0;
    int label = 0;
    HPI_CHECK(hpi_model_predict(model, host_seq, virus_seq, &score, &label));
    *out << host_id << '\t' << virus_id << '\t' << format_score(score) << '\t'
         << (label > 0 ? "+1" : "-1") << '\n';
  }
  out->flush();
  if (!*out) {
    std::cerr << "error: failed writing predictions\n";
    return static_cast<int>(HPI_ERR_IO);
  }
  return 0;
}

int run_predict(const PredictArgs& args) {
  hpi_model* model_raw = nullptr;
  HPI_CHECK(hpi_model_load(args.model.c_str(), &model_raw));
  ModelPtr model(model_raw);

  bool pairs_mode = !args.pairs.empty();
  bool literal_mode = !args.host_seq.empty() || !args.virus_seq.empty();
  if (pairs_mode == literal_mode) {
    std::cerr << "error: give either --pairs or both --host-seq and --virus-seq\n";
    return static_cast<int>(HPI_ERR_INVALID);
  }
  if (pairs_mode) return predict_pairs(model.get(), args);

  if (args.host_seq.empty() || args.virus_seq.empty()) {
    std::cerr << "error: --host-seq and --virus-seq must be given together\n";
    return static_cast<int>(HPI_ERR_INVALID);
  }
  double score = 0.0;
  int label = 0;
  HPI_CHECK(hpi_model_predict(model.get(), args.host_seq.c_str(), args.virus_seq.c_str(), &score,
                              &label));
  std::cout << format_score(score) << '\t' << (label > 0 ? "+1" : "-1") << '\n';
  return 0;
}

// ---- serve ----

struct ServeArgs {
  std::string model;
  std::string address = "127.0.0.1";
  int port = 8080;
  int load_delay_ms = 0;
};

httplib::Server* g_server = nullptr;

void handle_stop_signal(int) {
  if (g_server) g_server->stop();
}

nlohmann::json model_metadata(const hpi_model* model) {
  double gamma = 0.0, bias = 0.0, cost = 0.0;
  size_t dim = 0, n_sv = 0;
  const char* mode = "";
  hpi_model_gamma(model, &gamma);
  hpi_model_bias(model, &bias);
  hpi_model_cost(model, &cost);
  hpi_model_dim(model, &dim);
  hpi_model_n_sv(model, &n_sv);
  hpi_model_mode(model, &mode);
  return {{"gamma", gamma}, {"bias", bias},     {"C", cost},
          {"dim", dim},     {"n_sv", n_sv},     {"mode", mode}};
}

int run_serve(const ServeArgs& args) {
  httplib::Server server;
  std::atomic<const hpi_model*> model{nullptr};

  server.Get("/health", [&](const httplib::Request&, httplib::Response& res) {
    const hpi_model* m = model.load();
    if (!m) {
      res.status = 503;
      res.set_content("not_ready", "text/plain");
      return;
    }
    nlohmann::json body{{"status", "ready"}, {"model", model_metadata(m)}};
    res.set_content(body.dump() + "\n", "application/json");
  });

  server.Post("/predict", [&](const httplib::Request& req, httplib::Response& res) {
    const hpi_model* m = model.load();
    if (!m) {
      res.status = 503;
      res.set_content("not_ready", "text/plain");
      return;
    }
    nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      res.status = 400;
      res.set_content("bad_request: body is not a JSON object", "text/plain");
      return;
    }
    for (const char* field : {"host_sequence", "virus_sequence"}) {
      if (!body.contains(field) || !body[field].is_string()) {
        res.status = 400;
        res.set_content(std::string("bad_request: missing string field ") + field, "text/plain");
        return;
      }
    }
    std::string host_seq = body["host_sequence"].get<std::string>();
    std::string virus_seq = body["virus_sequence"].get<std::string>();
    double score = 0.0;
    int label = 0;
    int rc = hpi_model_predict(m, host_seq.c_str(), virus_seq.c_str(), &score, &label);
    if (rc == HPI_ERR_INVALID) {
      res.status = 400;
      res.set_content(std::string("bad_request: ") + hpi_last_error(), "text/plain");
      return;
    }
    if (rc != HPI_OK) {
      res.status = 500;
      res.set_content(std::string("internal_error: ") + hpi_last_error(), "text/plain");
      return;
    }
    nlohmann::json out{{"score", score}, {"label", label}, {"model", model_metadata(m)}};
    res.set_content(out.dump() + "\n", "application/json");
  });

  int port = args.port;
  if (port == 0) {
    port = server.bind_to_any_port(args.address);
    if (port <= 0) {
      std::cerr << "error: cannot bind to " << args.address << "\n";
      return static_cast<int>(HPI_ERR_IO);
    }
  } else if (!server.bind_to_port(args.address, port)) {
    std::cerr << "error: cannot bind to " << args.address << ":" << port << "\n";
    return static_cast<int>(HPI_ERR_IO);
  }
  std::cout << "listening on " << args.address << ":" << port << std::endl;

  g_server = &server;
  std::signal(SIGINT, handle_stop_signal);
  std::signal(SIGTERM, handle_stop_signal);
  std::thread listener([&] { server.listen_after_bind(); });

  // The listener answers not_ready until the model is in place; the delay
  // widens that window for tests.
  if (args.load_delay_ms > 0)
    std::this_thread::sleep_for(std::chrono::milliseconds(args.load_delay_ms));
  hpi_model* loaded = nullptr;
  int rc = hpi_model_load(args.model.c_str(), &loaded);
  if (rc != HPI_OK) {
    std::cerr << "error: " << hpi_last_error() << "\n";
    // stop() is a no-op until the listener thread is actually running.
    server.wait_until_ready();
    server.stop();
    listener.join();
    g_server = nullptr;
    return rc;
  }
  ModelPtr owner(loaded);
  model.store(owner.get());
  std::cout << "model loaded" << std::endl;

  listener.join();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"host-pathogen protein interaction prediction toolkit"};
  app.set_version_flag("--version", std::string(hpi_version()));
  app.require_subcommand(1);

  FeaturizeArgs feat;
  CLI::App* featurize = app.add_subcommand("featurize", "write per-protein triad features as TSV");
  featurize->add_option("--hosts", feat.hosts, "host FASTA")->required();
  featurize->add_option("--viruses", feat.viruses, "pathogen FASTA")->required();
  featurize->add_option("--out-hosts", feat.out_hosts, "output TSV for hosts")->required();
  featurize->add_option("--out-viruses", feat.out_viruses, "output TSV for pathogens")->required();

  BuildArgs build;
  CLI::App* build_cmd =
      app.add_subcommand("build-dataset", "sample negatives and write a labeled dataset");
  build_cmd->add_option("--interactions", build.interactions, "positive pairs TSV")->required();
  build_cmd->add_option("--hosts", build.hosts, "host FASTA")->required();
  build_cmd->add_option("--viruses", build.viruses, "pathogen FASTA")->required();
  build_cmd->add_option("--mode", build.mode, "negative sampling mode")
      ->check(CLI::IsMember({"random", "denovo"}))
      ->capture_default_str();
  build_cmd->add_option("--threshold", build.threshold, "dissimilarity cutoff")
      ->capture_default_str();
  build_cmd->add_option("--count", build.count, "'all', 'ratio:K', or an absolute count")
      ->capture_default_str();
  build_cmd->add_option("--seed", build.seed, "sampling seed")->capture_default_str();
  build_cmd->add_flag("--no-cache", build.no_cache, "skip the dissimilarity matrix sidecar");
  build_cmd->add_option("--threads", build.threads, "alignment threads (0 = auto)")
      ->capture_default_str();
  build_cmd->add_option("--out", build.out, "output dataset TSV")->required();

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "fit a margin classifier on a dataset");
  train_cmd->add_option("--dataset", train.dataset, "dataset TSV")->required();
  train_cmd->add_option("--hosts", train.hosts, "host FASTA")->required();
  train_cmd->add_option("--viruses", train.viruses, "pathogen FASTA")->required();
  train_cmd->add_option("--C", train.cost, "soft-margin C")->capture_default_str();
  train_cmd->add_option("--gamma", train.gamma, "RBF width")->capture_default_str();
  train_cmd->add_option("--mode", train.mode, "margin penalty mode")
      ->check(CLI::IsMember({"weighted", "unweighted"}))
      ->capture_default_str();
  train_cmd->add_option("--tolerance", train.tolerance, "stopping tolerance")
      ->capture_default_str();
  train_cmd->add_option("--max-iter", train.max_iter, "iteration limit")->capture_default_str();
  train_cmd->add_option("--cache-mb", train.cache_mb, "kernel cache size in MiB")
      ->capture_default_str();
  train_cmd->add_flag("--strict-convergence", train.strict,
                      "exit nonzero when the solver hits the iteration limit");
  train_cmd->add_option("--out", train.out, "output model file")->required();

  CrossvalArgs cv;
  CLI::App* cv_cmd = app.add_subcommand("crossval", "leave-one-group-out cross-validation");
  cv_cmd->add_option("--dataset", cv.dataset, "training dataset TSV")->required();
  cv_cmd->add_option("--test-dataset", cv.test_dataset,
                     "separate dataset whose rows form the held-out folds");
  cv_cmd->add_option("--hosts", cv.hosts, "host FASTA")->required();
  cv_cmd->add_option("--viruses", cv.viruses, "pathogen FASTA")->required();
  cv_cmd->add_option("--mode", cv.mode, "margin penalty mode")
      ->check(CLI::IsMember({"weighted", "unweighted"}))
      ->capture_default_str();
  double cv_cost = 0.0, cv_gamma = 0.0;
  CLI::Option* cost_opt = cv_cmd->add_option("--C", cv_cost, "fixed C (skips the grid search)");
  CLI::Option* gamma_opt = cv_cmd->add_option("--gamma", cv_gamma, "fixed gamma");
  cv_cmd->add_option("--grid-c", cv.grid_cost, "comma-separated C grid")->delimiter(',');
  cv_cmd->add_option("--grid-gamma", cv.grid_gamma, "comma-separated gamma grid")->delimiter(',');
  cv_cmd->add_option("--seed", cv.seed, "inner-fold split seed")->capture_default_str();
  cv_cmd->add_option("--tolerance", cv.tolerance, "solver tolerance")->capture_default_str();
  cv_cmd->add_option("--max-iter", cv.max_iter, "solver iteration limit")->capture_default_str();
  cv_cmd->add_option("--out", cv.out_tsv, "report TSV path");
  cv_cmd->add_option("--json-out", cv.out_json, "report JSON path");

  PredictArgs predict;
  CLI::App* predict_cmd = app.add_subcommand("predict", "score pairs with a saved model");
  predict_cmd->add_option("--model", predict.model, "model file")->required();
  predict_cmd->add_option("--pairs", predict.pairs, "TSV of host_id<TAB>virus_id");
  predict_cmd->add_option("--hosts", predict.hosts, "host FASTA (with --pairs)");
  predict_cmd->add_option("--viruses", predict.viruses, "pathogen FASTA (with --pairs)");
  predict_cmd->add_option("--out", predict.out, "output TSV (default stdout)");
  predict_cmd->add_option("--host-seq", predict.host_seq, "literal host sequence");
  predict_cmd->add_option("--virus-seq", predict.virus_seq, "literal pathogen sequence");

  ServeArgs serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "HTTP prediction endpoint");
  serve_cmd->add_option("--model", serve.model, "model file")->required();
  serve_cmd->add_option("--address", serve.address, "bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "port (0 picks a free one)")
      ->capture_default_str();
  serve_cmd->add_option("--load-delay-ms", serve.load_delay_ms,
                        "delay model loading; widens the not_ready window for tests")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (featurize->parsed()) return run_featurize(feat);
  if (build_cmd->parsed()) return run_build(build);
  if (train_cmd->parsed()) return run_train(train);
  if (cv_cmd->parsed()) {
    if (cost_opt->count()) cv.cost = cv_cost;
    if (gamma_opt->count()) cv.gamma = cv_gamma;
    return run_crossval(cv);
  }
  if (predict_cmd->parsed()) return run_predict(predict);
  if (serve_cmd->parsed()) return run_serve(serve);
  return 0;
}
