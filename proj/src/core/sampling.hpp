#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/alignment.hpp"
#include "core/seqio.hpp"

namespace hpi {

struct PairExample {
  std::string host_id;
  std::string virus_id;
  int label = 1;        // +1 or -1
  double weight = 1.0;  // in (0, 1]
  int group = 0;        // inherited from the virus
};

using PairKey = std::pair<std::string, std::string>;  // (host_id, virus_id)

// Weights below this are lifted so every example keeps a nonzero box bound.
inline constexpr double kMinWeight = 1e-6;

// Full host x virus grid minus the positive set, sorted.
std::vector<PairKey> candidate_negatives_random(const ProteinSet& hosts, const ProteinSet& viruses,
                                                const InteractionTable& table);

// (h,v) is admissible iff it is not positive and no virus v' with a positive
// (h,v') has D[v][v'] < threshold. Sorted output.
std::vector<PairKey> candidate_negatives_denovo(const ProteinSet& hosts, const ProteinSet& viruses,
                                                const InteractionTable& table,
                                                const DissimilarityMatrix& dissimilarity,
                                                double threshold);

// count == nullopt keeps every candidate in sorted order; a numeric count is a
// uniform sample without replacement drawn by a seeded shuffle of the sorted
// list. count must not exceed the candidate count.
std::vector<PairKey> sample_negatives(std::vector<PairKey> candidates, std::optional<std::size_t> count,
                                      std::uint64_t seed);

// Weight of a negative (h,v): the least dissimilarity between v and any virus
// positively interacting with h; 1 when h has no positive partner. Pass a null
// matrix to assign weight 1 everywhere (random-mode datasets).
std::vector<PairExample> make_negative_examples(const std::vector<PairKey>& negatives,
                                                const InteractionTable& table,
                                                const DissimilarityMatrix* dissimilarity);

std::vector<PairExample> make_positive_examples(const InteractionTable& table);

// TSV `host<TAB>virus<TAB>label<TAB>weight<TAB>group`, weights with 6 decimals.
void write_dataset(std::ostream& out, const std::vector<PairExample>& examples);
void write_dataset_file(const std::string& path, const std::vector<PairExample>& examples);
std::vector<PairExample> read_dataset(std::istream& in);
std::vector<PairExample> read_dataset_file(const std::string& path);

}  // namespace hpi
