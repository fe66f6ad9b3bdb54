#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "core/seqio.hpp"

namespace hpi {

struct ScoringParams {
  // Indexed by residue_index() in kCanonicalResidues order. Must be symmetric
  // with positive diagonal.
  std::array<std::array<int, kNumResidues>, kNumResidues> substitution;
  int gap_penalty = 8;  // per gap position, linear
};

// Position of a canonical residue in kCanonicalResidues; throws otherwise.
int residue_index(char residue);

const ScoringParams& blosum62_params();

// Needleman-Wunsch optimal global alignment score, linear gap model.
long global_align_score(std::string_view a, std::string_view b, const ScoringParams& params);

// Sum of diagonal substitution entries; equals the optimal self-alignment
// score for diagonal-dominant matrices.
long self_align_score(std::string_view a, const ScoringParams& params);

// clamp(raw_ab, 0, inf) / min(self_a, self_b), clamped to [0,1].
double normalized_similarity(long raw_ab, long self_a, long self_b);

struct DissimilarityMatrix {
  std::vector<std::string> ids;
  std::vector<double> values;  // row-major, ids.size() x ids.size()
  std::unordered_map<std::string, std::size_t> index;

  std::size_t size() const { return ids.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
  // Throws when either id is missing.
  double at(const std::string& a, const std::string& b) const;
  std::size_t row_of(const std::string& id) const;
  void rebuild_index();
};

// D[i][j] = 1 - normalized similarity; exact zeros on the diagonal, each
// unordered pair computed once and mirrored.
DissimilarityMatrix dissimilarity_matrix(const ProteinSet& viruses, const ScoringParams& params,
                                         unsigned n_threads = 0);

// TSV: first row ids, then one row per id as `id<TAB>comma-separated reals`
// with 6 decimal places.
void save_dissimilarity_matrix(const DissimilarityMatrix& matrix, const std::string& path);
DissimilarityMatrix load_dissimilarity_matrix(const std::string& path);

}  // namespace hpi
