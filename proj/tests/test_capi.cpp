#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "core/pipeline.hpp"
#include "doctest.h"
#include "hpipred/hpipred.h"
#include "testutil.hpp"

using namespace testutil;

namespace {

// Raw pointers wrapped so a failing REQUIRE cannot leak handles.
struct CorpusHandle {
  hpi_corpus* p = nullptr;
  ~CorpusHandle() { hpi_corpus_free(p); }
};
struct DatasetHandle {
  hpi_dataset* p = nullptr;
  ~DatasetHandle() { hpi_dataset_free(p); }
};
struct ModelHandle {
  hpi_model* p = nullptr;
  ~ModelHandle() { hpi_model_free(p); }
};

// Two pathogen groups with two positive partners each, so every training fold
// keeps both classes even after one group is held out.
struct Fixture {
  TempDir dir;
  std::string hosts_path, viruses_path, interactions_path;

  Fixture() {
    hosts_path = dir.file("hosts.fasta");
    viruses_path = dir.file("viruses.fasta");
    interactions_path = dir.file("interactions.tsv");
    write_text_file(hosts_path,
                    ">h1\nMKVLWAALLVTFLAGCQAMKVLWAALL\n"
                    ">h2\nGDVEKGKKIFIMKCSQCHTVEKGGKHK\n"
                    ">h3\nMKAAVLTLAVLFLTGSQARHGLDNYRG\n"
                    ">h4\nQIKDLLPKIEELRKEVTELRNQIQSVR\n");
    write_text_file(viruses_path,
                    ">w1\nMNKIALAIVTLAVSAGAMAQDSSSDSS\n"
                    ">w2\nWWCHHPPGGYYTTRRKKDDEEFFMMNN\n");
    write_text_file(interactions_path,
                    "host\tvirus\tgroup\n"
                    "h1\tw1\t1\n"
                    "h2\tw1\t1\n"
                    "h3\tw2\t2\n"
                    "h4\tw2\t2\n");
  }

  hpi_corpus* load() const {
    hpi_corpus* corpus = nullptr;
    REQUIRE(hpi_corpus_load(interactions_path.c_str(), hosts_path.c_str(), viruses_path.c_str(),
                            &corpus) == HPI_OK);
    return corpus;
  }
};

hpi_dataset* build_random_dataset(const hpi_corpus* corpus) {
  hpi_sampling_options options;
  hpi_sampling_options_init(&options);
  options.mode = HPI_SAMPLING_RANDOM;
  hpi_dataset* dataset = nullptr;
  REQUIRE(hpi_dataset_build(corpus, &options, &dataset) == HPI_OK);
  return dataset;
}

}  // namespace

TEST_CASE("library reports a version") {
  const char* v = hpi_version();
  REQUIRE(v != nullptr);
  CHECK(std::strlen(v) >= 5);
}

TEST_CASE("null arguments are rejected with a message") {
  CHECK(hpi_corpus_load(nullptr, nullptr, nullptr, nullptr) == HPI_ERR_INVALID);
  CHECK(std::strlen(hpi_last_error()) > 0);

  size_t n = 0;
  CHECK(hpi_corpus_count(nullptr, HPI_ROLE_HOST, &n) == HPI_ERR_INVALID);
  CHECK(hpi_dataset_size(nullptr, &n) == HPI_ERR_INVALID);
  double x = 0.0;
  CHECK(hpi_model_gamma(nullptr, &x) == HPI_ERR_INVALID);
  CHECK(hpi_model_predict(nullptr, "MKV", "MKV", &x, nullptr) == HPI_ERR_INVALID);

  hpi_corpus* corpus = nullptr;
  CHECK(hpi_corpus_load(nullptr, "x.fasta", nullptr, &corpus) == HPI_ERR_INVALID);
  CHECK(corpus == nullptr);  // out-parameters stay untouched on failure
}

TEST_CASE("missing and malformed files map to distinct codes") {
  Fixture fx;
  hpi_corpus* corpus = nullptr;
  CHECK(hpi_corpus_load(nullptr, fx.dir.file("absent.fasta").c_str(), fx.viruses_path.c_str(),
                        &corpus) == HPI_ERR_IO);
  CHECK(std::string(hpi_last_error()).find("absent.fasta") != std::string::npos);

  std::string junk = fx.dir.file("junk.fasta");
  write_text_file(junk, "MKVLW\n>later\nMKV\n");  // data before any header
  CHECK(hpi_corpus_load(nullptr, junk.c_str(), fx.viruses_path.c_str(), &corpus) == HPI_ERR_PARSE);

  hpi_dataset* dataset = nullptr;
  CHECK(hpi_dataset_load(fx.dir.file("absent.tsv").c_str(), &dataset) == HPI_ERR_IO);
  std::string bad = fx.dir.file("bad.tsv");
  write_text_file(bad, "h\tv\t+9\t1.000000\t0\n");
  CHECK(hpi_dataset_load(bad.c_str(), &dataset) == HPI_ERR_PARSE);
}

TEST_CASE("corpus accessors") {
  Fixture fx;
  CorpusHandle corpus{fx.load()};

  size_t n = 0;
  REQUIRE(hpi_corpus_count(corpus.p, HPI_ROLE_HOST, &n) == HPI_OK);
  CHECK(n == 4);
  REQUIRE(hpi_corpus_count(corpus.p, HPI_ROLE_PATHOGEN, &n) == HPI_OK);
  CHECK(n == 2);
  CHECK(hpi_corpus_count(corpus.p, 7, &n) == HPI_ERR_INVALID);

  REQUIRE(hpi_corpus_positive_count(corpus.p, &n) == HPI_OK);
  CHECK(n == 4);
  REQUIRE(hpi_corpus_duplicate_count(corpus.p, &n) == HPI_OK);
  CHECK(n == 0);

  const char* seq = nullptr;
  REQUIRE(hpi_corpus_sequence(corpus.p, HPI_ROLE_PATHOGEN, "w2", &seq) == HPI_OK);
  CHECK(std::string(seq) == "WWCHHPPGGYYTTRRKKDDEEFFMMNN");
  CHECK(hpi_corpus_sequence(corpus.p, HPI_ROLE_HOST, "nobody", &seq) == HPI_ERR_DATA);
}

TEST_CASE("a corpus can load without an interaction table") {
  Fixture fx;
  hpi_corpus* raw = nullptr;
  REQUIRE(hpi_corpus_load(nullptr, fx.hosts_path.c_str(), fx.viruses_path.c_str(), &raw) == HPI_OK);
  CorpusHandle corpus{raw};
  size_t n = 99;
  REQUIRE(hpi_corpus_positive_count(corpus.p, &n) == HPI_OK);
  CHECK(n == 0);

  hpi_sampling_options options;
  hpi_sampling_options_init(&options);
  hpi_dataset* dataset = nullptr;
  CHECK(hpi_dataset_build(corpus.p, &options, &dataset) == HPI_ERR_DATA);  // no positives
}

TEST_CASE("feature export matches the library computation") {
  Fixture fx;
  CorpusHandle corpus{fx.load()};
  std::string path = fx.dir.file("features.tsv");
  REQUIRE(hpi_corpus_write_features(corpus.p, HPI_ROLE_PATHOGEN, path.c_str()) == HPI_OK);
  auto rows = hpi::read_features_tsv(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].first == "w1");
  CHECK(rows[0].second.size() == 343);
}

TEST_CASE("sampling options default to conservative negatives") {
  hpi_sampling_options options;
  hpi_sampling_options_init(&options);
  CHECK(options.mode == HPI_SAMPLING_DENOVO);
  CHECK(options.threshold == 0.7);
  CHECK(options.count_kind == HPI_COUNT_ALL);
  CHECK(options.seed == 0);
  CHECK(options.use_cache == 1);
}

TEST_CASE("dataset build, inspect, save, load") {
  Fixture fx;
  CorpusHandle corpus{fx.load()};
  DatasetHandle dataset{build_random_dataset(corpus.p)};

  size_t n = 0, pos = 0, neg = 0;
  REQUIRE(hpi_dataset_size(dataset.p, &n) == HPI_OK);
  CHECK(n == 8);  // 4 positives + (4*2 - 4) candidates
  REQUIRE(hpi_dataset_counts(dataset.p, &pos, &neg) == HPI_OK);
  CHECK(pos == 4);
  CHECK(neg == 4);

  const char* host = nullptr;
  const char* virus = nullptr;
  int label = 0, group = 0;
  double weight = 0.0;
  REQUIRE(hpi_dataset_example(dataset.p, 0, &host, &virus, &label, &weight, &group) == HPI_OK);
  CHECK(std::string(host) == "h1");
  CHECK(std::string(virus) == "w1");
  CHECK(label == 1);
  CHECK(weight == 1.0);
  CHECK(group == 1);
  CHECK(hpi_dataset_example(dataset.p, 8, &host, &virus, &label, &weight, &group) ==
        HPI_ERR_INVALID);

  std::string path = fx.dir.file("dataset.tsv");
  REQUIRE(hpi_dataset_save(dataset.p, path.c_str()) == HPI_OK);
  hpi_dataset* raw = nullptr;
  REQUIRE(hpi_dataset_load(path.c_str(), &raw) == HPI_OK);
  DatasetHandle loaded{raw};
  size_t n2 = 0;
  REQUIRE(hpi_dataset_size(loaded.p, &n2) == HPI_OK);
  CHECK(n2 == n);
  std::string again = fx.dir.file("dataset2.tsv");
  REQUIRE(hpi_dataset_save(loaded.p, again.c_str()) == HPI_OK);
  CHECK(read_text_file(again) == read_text_file(path));
}

TEST_CASE("training produces a usable model") {
  Fixture fx;
  CorpusHandle corpus{fx.load()};
  DatasetHandle dataset{build_random_dataset(corpus.p)};

  hpi_train_options options;
  hpi_train_options_init(&options);
  CHECK(options.cost == 10.0);
  CHECK(options.gamma == 0.1);
  CHECK(options.weighted == 0);

  hpi_train_stats stats{};
  hpi_model* raw = nullptr;
  REQUIRE(hpi_model_train(corpus.p, dataset.p, &options, &raw, &stats) == HPI_OK);
  ModelHandle model{raw};
  CHECK(stats.converged == 1);
  CHECK(stats.iterations > 0);
  CHECK(stats.n_support > 0);

  double gamma = 0.0, bias = 0.0, cost = 0.0;
  size_t dim = 0, n_sv = 0;
  const char* mode = nullptr;
  REQUIRE(hpi_model_gamma(model.p, &gamma) == HPI_OK);
  REQUIRE(hpi_model_bias(model.p, &bias) == HPI_OK);
  REQUIRE(hpi_model_dim(model.p, &dim) == HPI_OK);
  REQUIRE(hpi_model_n_sv(model.p, &n_sv) == HPI_OK);
  REQUIRE(hpi_model_cost(model.p, &cost) == HPI_OK);
  REQUIRE(hpi_model_mode(model.p, &mode) == HPI_OK);
  CHECK(gamma == 0.1);
  CHECK(dim == 686);
  CHECK(n_sv == stats.n_support);
  CHECK(cost == 10.0);
  CHECK(std::string(mode) == "unweighted");

  double score = 0.0;
  int label = 0;
  REQUIRE(hpi_model_predict(model.p, "MKVLWAALLVTFLAGCQAMKVLWAALL",
                            "MNKIALAIVTLAVSAGAMAQDSSSDSS", &score, &label) == HPI_OK);
  CHECK(std::isfinite(score));
  CHECK(label == (score > 0.0 ? 1 : -1));

  // Junk characters are dropped before scoring, exactly like FASTA input.
  double dirty = 0.0;
  REQUIRE(hpi_model_predict(model.p, "MKVLWAALLVTFLAGCQAMKVLWAALL",
                            "MNKIALAIVTLAVSAGAMAQ-DSS*SDSS 123", &dirty, nullptr) == HPI_OK);
  CHECK(dirty == score);

  CHECK(hpi_model_predict(model.p, "12345", "MKV", &score, &label) == HPI_ERR_INVALID);
}

TEST_CASE("an exhausted iteration budget is an error only in strict mode") {
  Fixture fx;
  CorpusHandle corpus{fx.load()};
  DatasetHandle dataset{build_random_dataset(corpus.p)};

  hpi_train_options options;
  hpi_train_options_init(&options);
  options.max_iter = 1;

  hpi_train_stats stats{};
  hpi_model* raw = nullptr;
  REQUIRE(hpi_model_train(corpus.p, dataset.p, &options, &raw, &stats) == HPI_OK);
  ModelHandle lax{raw};
  CHECK(stats.converged == 0);

  options.strict_convergence = 1;
  hpi_model* strict_raw = nullptr;
  CHECK(hpi_model_train(corpus.p, dataset.p, &options, &strict_raw, &stats) == HPI_ERR_DATA);
  CHECK(strict_raw == nullptr);
}

TEST_CASE("model files round trip through the C interface") {
  Fixture fx;
  CorpusHandle corpus{fx.load()};
  DatasetHandle dataset{build_random_dataset(corpus.p)};

  hpi_train_options options;
  hpi_train_options_init(&options);
  hpi_model* raw = nullptr;
  REQUIRE(hpi_model_train(corpus.p, dataset.p, &options, &raw, nullptr) == HPI_OK);
  ModelHandle model{raw};

  std::string path = fx.dir.file("model.hpm");
  REQUIRE(hpi_model_save(model.p, path.c_str()) == HPI_OK);
  hpi_model* loaded_raw = nullptr;
  REQUIRE(hpi_model_load(path.c_str(), &loaded_raw) == HPI_OK);
  ModelHandle loaded{loaded_raw};

  double a = 0.0, b = 0.0;
  REQUIRE(hpi_model_predict(model.p, "MKAAVLTLAVLFLTGSQARHGLDNYRG",
                            "WWCHHPPGGYYTTRRKKDDEEFFMMNN", &a, nullptr) == HPI_OK);
  REQUIRE(hpi_model_predict(loaded.p, "MKAAVLTLAVLFLTGSQARHGLDNYRG",
                            "WWCHHPPGGYYTTRRKKDDEEFFMMNN", &b, nullptr) == HPI_OK);
  CHECK(a == b);

  hpi_model* nope = nullptr;
  CHECK(hpi_model_load(fx.dir.file("absent.hpm").c_str(), &nope) == HPI_ERR_IO);
  std::string foreign = fx.dir.file("foreign.hpm");
  write_text_file(foreign, "version 2\n");
  CHECK(hpi_model_load(foreign.c_str(), &nope) == HPI_ERR_PARSE);
}

TEST_CASE("cross-validation with fixed hyperparameters writes both reports") {
  Fixture fx;
  CorpusHandle corpus{fx.load()};
  DatasetHandle dataset{build_random_dataset(corpus.p)};

  hpi_crossval_options options;
  hpi_crossval_options_init(&options);
  options.fixed = 1;
  options.cost = 10.0;
  options.gamma = 0.1;

  std::string tsv = fx.dir.file("report.tsv");
  std::string json = fx.dir.file("report.json");
  double auc_roc = -1.0, auc_pr = -1.0;
  REQUIRE(hpi_crossval(corpus.p, dataset.p, nullptr, &options, tsv.c_str(), json.c_str(),
                       &auc_roc, &auc_pr) == HPI_OK);
  CHECK(auc_roc >= 0.0);
  CHECK(auc_roc <= 1.0);
  CHECK(auc_pr >= 0.0);
  CHECK(auc_pr <= 1.0);

  std::string report = read_text_file(tsv);
  CHECK(report.substr(0, 34) == "group\tP\tN\tC\tgamma\tauc_roc\tauc_pr\n1");
  CHECK(report.find("weighted_average") != std::string::npos);
  CHECK(read_text_file(json).find("\"groups\"") != std::string::npos);

  // Report paths are optional.
  REQUIRE(hpi_crossval(corpus.p, dataset.p, nullptr, &options, nullptr, nullptr, &auc_roc,
                       &auc_pr) == HPI_OK);
}

TEST_CASE("cross-validation can search a caller-supplied grid") {
  Fixture fx;
  CorpusHandle corpus{fx.load()};
  DatasetHandle dataset{build_random_dataset(corpus.p)};

  hpi_crossval_options options;
  hpi_crossval_options_init(&options);
  const double costs[] = {1.0};
  const double gammas[] = {0.5};
  options.grid_cost = costs;
  options.n_grid_cost = 1;
  options.grid_gamma = gammas;
  options.n_grid_gamma = 1;

  double auc_roc = -1.0, auc_pr = -1.0;
  REQUIRE(hpi_crossval(corpus.p, dataset.p, nullptr, &options, nullptr, nullptr, &auc_roc,
                       &auc_pr) == HPI_OK);
  CHECK(auc_roc >= 0.0);
  CHECK(auc_roc <= 1.0);

  options.n_grid_cost = 0;  // declared grid with no entries
  CHECK(hpi_crossval(corpus.p, dataset.p, nullptr, &options, nullptr, nullptr, &auc_roc,
                     &auc_pr) == HPI_ERR_INVALID);
}

TEST_CASE("a held-out test dataset drives the folds") {
  Fixture fx;
  CorpusHandle corpus{fx.load()};
  DatasetHandle train{build_random_dataset(corpus.p)};

  hpi_sampling_options sampling;
  hpi_sampling_options_init(&sampling);
  sampling.mode = HPI_SAMPLING_RANDOM;
  sampling.seed = 5;
  hpi_dataset* test_raw = nullptr;
  REQUIRE(hpi_dataset_build(corpus.p, &sampling, &test_raw) == HPI_OK);
  DatasetHandle test{test_raw};

  hpi_crossval_options options;
  hpi_crossval_options_init(&options);
  options.fixed = 1;
  options.cost = 10.0;
  options.gamma = 0.1;
  double auc_roc = -1.0, auc_pr = -1.0;
  REQUIRE(hpi_crossval(corpus.p, train.p, test.p, &options, nullptr, nullptr, &auc_roc,
                       &auc_pr) == HPI_OK);
  CHECK(auc_roc >= 0.0);
  CHECK(auc_roc <= 1.0);
}
