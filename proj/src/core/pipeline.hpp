#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/alignment.hpp"
#include "core/eval.hpp"
#include "core/sampling.hpp"
#include "core/seqio.hpp"

namespace hpi {

// Loaded inputs for one experiment: both protein sets plus the interaction
// table that references them.
struct Corpus {
  ProteinSet hosts;
  ProteinSet viruses;
  InteractionTable table;
  std::string hosts_path, viruses_path, interactions_path;
  std::uint64_t virus_digest = 0;  // FNV-1a of the virus FASTA bytes
};

Corpus load_corpus(const std::string& interactions_path, const std::string& hosts_path,
                   const std::string& viruses_path, std::ostream* warnings);

std::uint64_t fnv1a64_file(const std::string& path);

// Pathogen dissimilarities are the expensive part of dataset construction, so
// they are memoised next to the FASTA, keyed by its content digest.
std::string matrix_cache_path(const Corpus& corpus);
DissimilarityMatrix ensure_dissimilarity(const Corpus& corpus, bool use_cache, int n_threads,
                                         std::ostream* warnings);

enum class SamplingMode { random_uniform, denovo };

struct CountPolicy {
  enum class Kind { all, absolute, ratio };
  Kind kind = Kind::all;
  std::size_t absolute = 0;
  double ratio = 1.0;  // negatives per positive
};

struct SamplingOptions {
  SamplingMode mode = SamplingMode::denovo;
  double threshold = 0.7;
  CountPolicy count;
  std::uint64_t seed = 0;
  bool use_cache = true;
  int n_threads = 0;  // 0 = hardware concurrency
};

// Positives (weight 1) followed by sampled negatives, both sorted by
// (host, virus). Random mode gives negatives weight 1; denovo mode weights
// them by distance to the pathogen's nearest interacting relative.
std::vector<PairExample> build_dataset(const Corpus& corpus, const SamplingOptions& options,
                                       std::ostream* warnings);

// Expand pair examples into the numeric form used by training and CV. Features
// are computed once per distinct protein.
LabeledMatrix assemble_matrix(const Corpus& corpus, const std::vector<PairExample>& examples);

// One protein per line: id, tab, the 343 normalized triad frequencies.
// Proteins shorter than a triad window produce an all-zero row and a warning.
void write_features_tsv(const ProteinSet& proteins, const std::string& path,
                        std::ostream* warnings = nullptr);
std::vector<std::pair<std::string, std::vector<double>>> read_features_tsv(const std::string& path);

void write_report_tsv(const CvReport& report, const std::string& path);
std::string report_json(const CvReport& report);
void write_report_json(const CvReport& report, const std::string& path);

}  // namespace hpi
