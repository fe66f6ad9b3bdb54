#include "core/alignment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <thread>

#include "core/error.hpp"

namespace hpi {

namespace {

// BLOSUM62, rows and columns in ARNDCQEGHILKMFPSTWYV order.
constexpr int kBlosum62[20][20] = {
    /*A*/ {4, -1, -2, -2, 0, -1, -1, 0, -2, -1, -1, -1, -1, -2, -1, 1, 0, -3, -2, 0},
    /*R*/ {-1, 5, 0, -2, -3, 1, 0, -2, 0, -3, -2, 2, -1, -3, -2, -1, -1, -3, -2, -3},
    /*N*/ {-2, 0, 6, 1, -3, 0, 0, 0, 1, -3, -3, 0, -2, -3, -2, 1, 0, -4, -2, -3},
    /*D*/ {-2, -2, 1, 6, -3, 0, 2, -1, -1, -3, -4, -1, -3, -3, -1, 0, -1, -4, -3, -3},
    /*C*/ {0, -3, -3, -3, 9, -3, -4, -3, -3, -1, -1, -3, -1, -2, -3, -1, -1, -2, -2, -1},
    /*Q*/ {-1, 1, 0, 0, -3, 5, 2, -2, 0, -3, -2, 1, 0, -3, -1, 0, -1, -2, -1, -2},
    /*E*/ {-1, 0, 0, 2, -4, 2, 5, -2, 0, -3, -3, 1, -2, -3, -1, 0, -1, -3, -2, -2},
    /*G*/ {0, -2, 0, -1, -3, -2, -2, 6, -2, -4, -4, -2, -3, -3, -2, 0, -2, -2, -3, -3},
    /*H*/ {-2, 0, 1, -1, -3, 0, 0, -2, 8, -3, -3, -1, -2, -1, -2, -1, -2, -2, 2, -3},
    /*I*/ {-1, -3, -3, -3, -1, -3, -3, -4, -3, 4, 2, -3, 1, 0, -3, -2, -1, -3, -1, 3},
    /*L*/ {-1, -2, -3, -4, -1, -2, -3, -4, -3, 2, 4, -2, 2, 0, -3, -2, -1, -2, -1, 1},
    /*K*/ {-1, 2, 0, -1, -3, 1, 1, -2, -1, -3, -2, 5, -1, -3, -1, 0, -1, -3, -2, -2},
    /*M*/ {-1, -1, -2, -3, -1, 0, -2, -3, -2, 1, 2, -1, 5, 0, -2, -1, -1, -1, -1, 1},
    /*F*/ {-2, -3, -3, -3, -2, -3, -3, -3, -1, 0, 0, -3, 0, 6, -4, -2, -2, 1, 3, -1},
    /*P*/ {-1, -2, -2, -1, -3, -1, -1, -2, -2, -3, -3, -1, -2, -4, 7, -1, -1, -4, -3, -2},
    /*S*/ {1, -1, 1, 0, -1, 0, 0, 0, -1, -2, -2, 0, -1, -2, -1, 4, 1, -3, -2, -2},
    /*T*/ {0, -1, 0, -1, -1, -1, -1, -2, -2, -1, -1, -1, -1, -2, -1, 1, 5, -2, -2, 0},
    /*W*/ {-3, -3, -4, -4, -2, -2, -3, -2, -2, -3, -2, -3, -1, 1, -4, -3, -2, 11, 2, -3},
    /*Y*/ {-2, -2, -2, -3, -2, -1, -2, -3, 2, -1, -1, -2, -1, 3, -3, -2, -2, 2, 7, -2},
    /*V*/ {0, -3, -3, -3, -1, -2, -2, -3, -3, 3, 1, -2, 1, -1, -2, -2, 0, -3, -2, 4},
};

struct ResidueIndexTable {
  int map[256];
  ResidueIndexTable() {
    std::fill(std::begin(map), std::end(map), -1);
    for (int i = 0; i < kNumResidues; ++i)
      map[static_cast<unsigned char>(kCanonicalResidues[i])] = i;
  }
};

const ResidueIndexTable kResidueIndex;

std::vector<int> encode(std::string_view seq) {
  std::vector<int> out;
  out.reserve(seq.size());
  for (char c : seq) out.push_back(residue_index(c));
  return out;
}

}  // namespace

int residue_index(char residue) {
  int i = kResidueIndex.map[static_cast<unsigned char>(residue)];
  if (i < 0) fail_invalid(std::string("non-canonical residue '") + residue + "'");
  return i;
}

const ScoringParams& blosum62_params() {
  static const ScoringParams params = [] {
    ScoringParams p;
    for (int i = 0; i < kNumResidues; ++i)
      for (int j = 0; j < kNumResidues; ++j) p.substitution[i][j] = kBlosum62[i][j];
    p.gap_penalty = 8;
    return p;
  }();
  return params;
}

long global_align_score(std::string_view a, std::string_view b, const ScoringParams& params) {
  if (a.empty() || b.empty()) fail_invalid("global alignment requires non-empty sequences");
  const std::vector<int> ea = encode(a), eb = encode(b);
  const long gap = params.gap_penalty;
  const std::size_t n = eb.size();
  std::vector<long> prev(n + 1), curr(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = -gap * static_cast<long>(j);
  for (std::size_t i = 1; i <= ea.size(); ++i) {
    curr[0] = -gap * static_cast<long>(i);
    const auto& row = params.substitution[ea[i - 1]];
    for (std::size_t j = 1; j <= n; ++j) {
      long diag = prev[j - 1] + row[eb[j - 1]];
      long up = prev[j] - gap;
      long left = curr[j - 1] - gap;
      curr[j] = std::max(diag, std::max(up, left));
    }
    std::swap(prev, curr);
  }
  return prev[n];
}

long self_align_score(std::string_view a, const ScoringParams& params) {
  long score = 0;
  for (char c : a) {
    int i = residue_index(c);
    score += params.substitution[i][i];
  }
  return score;
}

double normalized_similarity(long raw_ab, long self_a, long self_b) {
  long denom = std::min(self_a, self_b);
  if (denom <= 0) fail_invalid("non-positive self-alignment score");
  if (raw_ab <= 0) return 0.0;
  double s = static_cast<double>(raw_ab) / static_cast<double>(denom);
  return std::min(s, 1.0);
}

double DissimilarityMatrix::at(const std::string& a, const std::string& b) const {
  return at(row_of(a), row_of(b));
}

std::size_t DissimilarityMatrix::row_of(const std::string& id) const {
  auto it = index.find(id);
  if (it == index.end()) fail_data("virus '" + id + "' missing from dissimilarity matrix");
  return it->second;
}

void DissimilarityMatrix::rebuild_index() {
  index.clear();
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
}

DissimilarityMatrix dissimilarity_matrix(const ProteinSet& viruses, const ScoringParams& params,
                                         unsigned n_threads) {
  if (viruses.records.empty()) fail_invalid("dissimilarity matrix needs at least one virus");
  const std::size_t n = viruses.records.size();
  DissimilarityMatrix m;
  m.ids.reserve(n);
  for (const ProteinRecord& r : viruses.records) m.ids.push_back(r.id);
  m.values.assign(n * n, 0.0);
  m.rebuild_index();

  std::vector<long> self(n);
  for (std::size_t i = 0; i < n; ++i) self[i] = self_align_score(viruses.records[i].sequence, params);

  // One task per unordered pair; each writes disjoint cells, mirrored at the end.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, std::max<std::size_t>(pairs.size(), 1));
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      auto [i, j] = pairs[k];
      long raw = global_align_score(viruses.records[i].sequence, viruses.records[j].sequence, params);
      double s = normalized_similarity(raw, self[i], self[j]);
      m.values[i * n + j] = 1.0 - s;
    }
  };
  if (n_threads <= 1 || pairs.size() < 2) {
    worker(0, pairs.size());
  } else {
    std::vector<std::thread> threads;
    std::size_t chunk = (pairs.size() + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      std::size_t begin = t * chunk;
      if (begin >= pairs.size()) break;
      threads.emplace_back(worker, begin, std::min(begin + chunk, pairs.size()));
    }
    for (auto& th : threads) th.join();
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m.values[j * n + i] = m.values[i * n + j];
  return m;
}

void save_dissimilarity_matrix(const DissimilarityMatrix& matrix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("cannot write matrix file '" + path + "'");
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i) out << (i ? "\t" : "") << matrix.ids[i];
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    out << matrix.ids[i];
    for (std::size_t j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%.6f", matrix.at(i, j));
      out << (j ? "," : "\t") << buf;
    }
    out << '\n';
  }
  if (!out) fail_io("error writing matrix file '" + path + "'");
}

DissimilarityMatrix load_dissimilarity_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open matrix file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) fail_parse("matrix file '" + path + "': empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  DissimilarityMatrix m;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    m.ids.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  const std::size_t n = m.ids.size();
  m.values.assign(n * n, 0.0);
  m.rebuild_index();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) fail_parse("matrix file '" + path + "': truncated");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.substr(0, tab) != m.ids[i])
      fail_parse("matrix file '" + path + "': row id mismatch at row " + std::to_string(i));
    const char* p = line.c_str() + tab + 1;
    for (std::size_t j = 0; j < n; ++j) {
      char* end = nullptr;
      double v = std::strtod(p, &end);
      if (end == p) fail_parse("matrix file '" + path + "': bad value at row " + std::to_string(i));
      m.values[i * n + j] = v;
      p = (*end == ',') ? end + 1 : end;
    }
  }
  return m;
}

}  // namespace hpi
