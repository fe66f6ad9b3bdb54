#include "core/features.hpp"

#include <algorithm>
#include <string>

#include "core/error.hpp"

namespace hpi {

namespace {

struct ClusterTable {
  int map[256];
  ClusterTable() {
    std::fill(std::begin(map), std::end(map), 0);
    auto assign = [this](const char* members, int cluster) {
      for (const char* p = members; *p; ++p) map[static_cast<unsigned char>(*p)] = cluster;
    };
    assign("AVG", 1);
    assign("ILFP", 2);
    assign("YMTS", 3);
    assign("HNQW", 4);
    assign("RK", 5);
    assign("DE", 6);
    assign("C", 7);
  }
};

const ClusterTable kClusters;

}  // namespace

int residue_cluster(char residue) {
  int c = kClusters.map[static_cast<unsigned char>(residue)];
  if (c == 0) fail_internal(std::string("residue '") + residue + "' outside the canonical alphabet");
  return c;
}

std::vector<std::uint8_t> map_to_clusters(std::string_view sequence) {
  std::vector<std::uint8_t> clusters;
  clusters.reserve(sequence.size());
  for (char c : sequence) clusters.push_back(static_cast<std::uint8_t>(residue_cluster(c)));
  return clusters;
}

std::vector<double> triad_counts(const std::vector<std::uint8_t>& clusters) {
  std::vector<double> counts(kTriadDim, 0.0);
  if (clusters.size() < 3) return counts;
  for (std::size_t i = 0; i + 2 < clusters.size(); ++i) {
    int a = clusters[i], b = clusters[i + 1], c = clusters[i + 2];
    counts[(a - 1) * 49 + (b - 1) * 7 + (c - 1)] += 1.0;
  }
  return counts;
}

void normalize_minmax(std::vector<double>& values) {
  if (values.empty()) return;
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  if (hi == lo) {
    std::fill(values.begin(), values.end(), 0.0);
    return;
  }
  double span = hi - lo;
  for (double& v : values) v = (v - lo) / span;
}

std::vector<double> protein_feature(std::string_view sequence) {
  std::vector<double> v = triad_counts(map_to_clusters(sequence));
  normalize_minmax(v);
  return v;
}

std::vector<double> pair_features(const std::vector<double>& host, const std::vector<double>& virus) {
  if (host.size() != kTriadDim || virus.size() != kTriadDim)
    fail_invalid("pair_features expects two vectors of length " + std::to_string(kTriadDim));
  std::vector<double> pair;
  pair.reserve(kPairDim);
  pair.insert(pair.end(), host.begin(), host.end());
  pair.insert(pair.end(), virus.begin(), virus.end());
  return pair;
}

}  // namespace hpi
