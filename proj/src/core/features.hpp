#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace hpi {

inline constexpr int kNumClusters = 7;
inline constexpr int kTriadDim = 343;  // 7^3
inline constexpr int kPairDim = 686;   // host block + virus block

// Physicochemical cluster of a canonical residue, in 1..7:
// {A,V,G}=1 {I,L,F,P}=2 {Y,M,T,S}=3 {H,N,Q,W}=4 {R,K}=5 {D,E}=6 {C}=7.
int residue_cluster(char residue);

// Sequence must be sanitized; order is preserved.
std::vector<std::uint8_t> map_to_clusters(std::string_view sequence);

// Sliding 3-mer counts over the cluster string. Triad (a,b,c) lands at index
// (a-1)*49 + (b-1)*7 + (c-1). Inputs shorter than 3 yield the zero vector.
std::vector<double> triad_counts(const std::vector<std::uint8_t>& clusters);

// Min-max over the vector's own entries; a constant vector maps to all zeros.
void normalize_minmax(std::vector<double>& values);

// map_to_clusters + triad_counts + normalize_minmax in one step.
std::vector<double> protein_feature(std::string_view sequence);

// Concatenation, host block first.
std::vector<double> pair_features(const std::vector<double>& host, const std::vector<double>& virus);

}  // namespace hpi
