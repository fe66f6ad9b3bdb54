#ifndef HPIPRED_H
#define HPIPRED_H

/* C interface to the host-pathogen interaction predictor. Every function
 * returns a status code; 0 means success. On failure, hpi_last_error() gives
 * a thread-local message describing what went wrong. Out-parameters are only
 * written on success. Handles are freed with the matching *_free function;
 * freeing NULL is a no-op. Returned strings stay owned by their handle and
 * remain valid until it is freed or mutated. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum hpi_status {
  HPI_OK = 0,
  HPI_ERR_IO = 1,       /* file missing or unreadable/unwritable */
  HPI_ERR_PARSE = 2,    /* malformed input file */
  HPI_ERR_INVALID = 3,  /* bad argument or option value */
  HPI_ERR_DATA = 4,     /* inputs are well-formed but inconsistent */
  HPI_ERR_INTERNAL = 5, /* unexpected failure */
};

/* Library version, e.g. "1.0.0". */
const char* hpi_version(void);

/* Message for the most recent failure on this thread ("" if none). */
const char* hpi_last_error(void);

typedef struct hpi_corpus hpi_corpus;
typedef struct hpi_dataset hpi_dataset;
typedef struct hpi_model hpi_model;

enum hpi_role { HPI_ROLE_HOST = 0, HPI_ROLE_PATHOGEN = 1 };

/* Load host and pathogen FASTA files plus an optional interaction table
 * (interactions_path may be NULL when only sequences are needed). Warnings
 * about skipped records go to stderr. */
int hpi_corpus_load(const char* interactions_path, const char* hosts_path,
                    const char* viruses_path, hpi_corpus** out);
void hpi_corpus_free(hpi_corpus* corpus);

int hpi_corpus_count(const hpi_corpus* corpus, int role, size_t* out);
int hpi_corpus_positive_count(const hpi_corpus* corpus, size_t* out);
int hpi_corpus_duplicate_count(const hpi_corpus* corpus, size_t* out);
/* Sanitized sequence of a protein, or an IO/DATA failure when absent. */
int hpi_corpus_sequence(const hpi_corpus* corpus, int role, const char* id, const char** out);
/* Write per-protein normalized triad features as TSV. */
int hpi_corpus_write_features(const hpi_corpus* corpus, int role, const char* path);

enum hpi_sampling_mode { HPI_SAMPLING_RANDOM = 0, HPI_SAMPLING_DENOVO = 1 };
enum hpi_count_kind { HPI_COUNT_ALL = 0, HPI_COUNT_ABSOLUTE = 1, HPI_COUNT_RATIO = 2 };

typedef struct hpi_sampling_options {
  int mode;                /* hpi_sampling_mode */
  double threshold;        /* dissimilarity cutoff for admissible negatives */
  int count_kind;          /* hpi_count_kind */
  size_t count_absolute;   /* used when count_kind == HPI_COUNT_ABSOLUTE */
  double count_ratio;      /* negatives per positive, when HPI_COUNT_RATIO */
  unsigned long long seed; /* drives negative subsampling */
  int use_cache;           /* reuse/write the dissimilarity matrix sidecar */
  int n_threads;           /* alignment threads; 0 = hardware concurrency */
} hpi_sampling_options;

void hpi_sampling_options_init(hpi_sampling_options* options);

/* Positives plus sampled negatives; see hpi_dataset_save for the layout. */
int hpi_dataset_build(const hpi_corpus* corpus, const hpi_sampling_options* options,
                      hpi_dataset** out);
int hpi_dataset_save(const hpi_dataset* dataset, const char* path);
int hpi_dataset_load(const char* path, hpi_dataset** out);
void hpi_dataset_free(hpi_dataset* dataset);

int hpi_dataset_size(const hpi_dataset* dataset, size_t* out);
int hpi_dataset_counts(const hpi_dataset* dataset, size_t* positives, size_t* negatives);
int hpi_dataset_example(const hpi_dataset* dataset, size_t index, const char** host_id,
                        const char** virus_id, int* label, double* weight, int* group);

typedef struct hpi_train_options {
  double cost;             /* soft-margin C */
  double gamma;            /* RBF width */
  int weighted;            /* scale each box bound by the example weight */
  double tolerance;        /* KKT violation stopping threshold */
  long long max_iter;      /* pair updates before giving up */
  int strict_convergence;  /* fail instead of returning a truncated model */
  unsigned long long cache_bytes; /* kernel row cache budget */
} hpi_train_options;

void hpi_train_options_init(hpi_train_options* options);

typedef struct hpi_train_stats {
  long long iterations;
  double dual_objective;
  size_t n_support;
  int converged;
} hpi_train_stats;

/* Train on every example of the dataset; features come from the corpus
 * sequences. stats may be NULL. */
int hpi_model_train(const hpi_corpus* corpus, const hpi_dataset* dataset,
                    const hpi_train_options* options, hpi_model** out, hpi_train_stats* stats);
int hpi_model_save(const hpi_model* model, const char* path);
int hpi_model_load(const char* path, hpi_model** out);
void hpi_model_free(hpi_model* model);

int hpi_model_gamma(const hpi_model* model, double* out);
int hpi_model_bias(const hpi_model* model, double* out);
int hpi_model_dim(const hpi_model* model, size_t* out);
int hpi_model_n_sv(const hpi_model* model, size_t* out);
int hpi_model_cost(const hpi_model* model, double* out);
int hpi_model_mode(const hpi_model* model, const char** out);

/* Score one raw sequence pair. Sequences are sanitized exactly like FASTA
 * input; label is +1 when the score is positive, else -1. label may be NULL. */
int hpi_model_predict(const hpi_model* model, const char* host_sequence,
                      const char* virus_sequence, double* score, int* label);

typedef struct hpi_crossval_options {
  int weighted;
  int fixed;               /* use cost/gamma below instead of the grid */
  double cost, gamma;      /* read when fixed != 0 */
  const double* grid_cost; /* NULL = default grid {0.1,1,10,100} */
  size_t n_grid_cost;
  const double* grid_gamma; /* NULL = default grid {0.01,0.1,1} */
  size_t n_grid_gamma;
  unsigned long long seed; /* inner-fold splits */
  double tolerance;
  long long max_iter;
  unsigned long long cache_bytes;
} hpi_crossval_options;

void hpi_crossval_options_init(hpi_crossval_options* options);

/* Leave-one-group-out cross-validation over the pathogen groups. When
 * test_dataset is non-NULL its rows define the held-out folds while training
 * rows always come from dataset. Either report path may be NULL; the averages
 * are weighted by test-fold size. */
int hpi_crossval(const hpi_corpus* corpus, const hpi_dataset* dataset,
                 const hpi_dataset* test_dataset, const hpi_crossval_options* options,
                 const char* report_tsv_path, const char* report_json_path,
                 double* weighted_auc_roc, double* weighted_auc_pr);

#ifdef __cplusplus
}
#endif

#endif /* HPIPRED_H */
