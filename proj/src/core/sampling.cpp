#include "core/sampling.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace hpi {

namespace {

// host id -> rows of its positive partner viruses in the matrix (or plain ids
// when no matrix is involved).
std::unordered_map<std::string, std::vector<std::string>> positives_by_host(const InteractionTable& table) {
  std::unordered_map<std::string, std::vector<std::string>> by_host;
  for (const Interaction& p : table.positives) by_host[p.host_id].push_back(p.virus_id);
  return by_host;
}


}  // namespace

std::vector<PairKey> candidate_negatives_random(const ProteinSet& hosts, const ProteinSet& viruses,
                                                const InteractionTable& table) {
  auto by_host = positives_by_host(table);
  std::vector<PairKey> out;
  out.reserve(hosts.size() * viruses.size());
  for (const ProteinRecord& h : hosts.records) {
    const std::vector<std::string>* partners = nullptr;
    if (auto it = by_host.find(h.id); it != by_host.end()) partners = &it->second;
    for (const ProteinRecord& v : viruses.records) {
      if (partners && std::find(partners->begin(), partners->end(), v.id) != partners->end()) continue;
      out.emplace_back(h.id, v.id);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PairKey> candidate_negatives_denovo(const ProteinSet& hosts, const ProteinSet& viruses,
                                                const InteractionTable& table,
                                                const DissimilarityMatrix& dissimilarity,
                                                double threshold) {
  auto by_host = positives_by_host(table);
  // Resolve matrix rows once per virus.
  std::unordered_map<std::string, std::size_t> row;
  row.reserve(viruses.size());
  for (const ProteinRecord& v : viruses.records) row[v.id] = dissimilarity.row_of(v.id);
  std::unordered_map<std::string, std::vector<std::size_t>> partner_rows;
  for (auto& [host_id, partners] : by_host) {
    auto& rows = partner_rows[host_id];
    for (const std::string& p : partners) rows.push_back(dissimilarity.row_of(p));
  }

  std::vector<PairKey> out;
  for (const ProteinRecord& h : hosts.records) {
    const std::vector<std::string>* partners = nullptr;
    const std::vector<std::size_t>* rows = nullptr;
    if (auto it = by_host.find(h.id); it != by_host.end()) {
      partners = &it->second;
      rows = &partner_rows[h.id];
    }
    for (const ProteinRecord& v : viruses.records) {
      if (partners && std::find(partners->begin(), partners->end(), v.id) != partners->end()) continue;
      bool excluded = false;
      if (rows) {
        std::size_t vrow = row[v.id];
        for (std::size_t prow : *rows) {
          if (dissimilarity.at(vrow, prow) < threshold) {
            excluded = true;
            break;
          }
        }
      }
      if (!excluded) out.emplace_back(h.id, v.id);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PairKey> sample_negatives(std::vector<PairKey> candidates, std::optional<std::size_t> count,
                                      std::uint64_t seed) {
  std::sort(candidates.begin(), candidates.end());
  if (!count) return candidates;
  if (*count > candidates.size())
    fail_invalid("requested " + std::to_string(*count) + " negatives but only " +
                 std::to_string(candidates.size()) + " candidates exist");
  std::mt19937_64 rng(seed);
  // Forward Fisher-Yates; the prefix after `count` steps matches a full shuffle.
  for (std::size_t i = 0; i < *count; ++i) {
    std::uint64_t j = i + uniform_index(rng, candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(*count);
  return candidates;
}

std::vector<PairExample> make_negative_examples(const std::vector<PairKey>& negatives,
                                                const InteractionTable& table,
                                                const DissimilarityMatrix* dissimilarity) {
  auto by_host = positives_by_host(table);
  std::vector<PairExample> out;
  out.reserve(negatives.size());
  for (const auto& [host_id, virus_id] : negatives) {
    double w = 1.0;
    if (dissimilarity) {
      if (auto it = by_host.find(host_id); it != by_host.end()) {
        std::size_t vrow = dissimilarity->row_of(virus_id);
        double least = 1.0;
        bool any = false;
        for (const std::string& partner : it->second) {
          double d = dissimilarity->at(vrow, dissimilarity->row_of(partner));
          if (!any || d < least) least = d;
          any = true;
        }
        if (any) w = least;
      }
    }
    w = std::max(w, kMinWeight);
    out.push_back({host_id, virus_id, -1, w, table.group_of(virus_id)});
  }
  return out;
}

std::vector<PairExample> make_positive_examples(const InteractionTable& table) {
  std::vector<PairExample> out;
  out.reserve(table.positives.size());
  for (const Interaction& p : table.positives) out.push_back({p.host_id, p.virus_id, 1, 1.0, p.group});
  return out;
}

void write_dataset(std::ostream& out, const std::vector<PairExample>& examples) {
  char buf[32];
  for (const PairExample& e : examples) {
    std::snprintf(buf, sizeof buf, "%.6f", e.weight);
    out << e.host_id << '\t' << e.virus_id << '\t' << (e.label > 0 ? "+1" : "-1") << '\t' << buf << '\t'
        << e.group << '\n';
  }
}

void write_dataset_file(const std::string& path, const std::vector<PairExample>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("cannot write dataset file '" + path + "'");
  write_dataset(out, examples);
  if (!out) fail_io("error writing dataset file '" + path + "'");
}

std::vector<PairExample> read_dataset(std::istream& in) {
  std::vector<PairExample> examples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    PairExample e;
    std::string label, weight, group;
    if (!std::getline(row, e.host_id, '\t') || !std::getline(row, e.virus_id, '\t') ||
        !std::getline(row, label, '\t') || !std::getline(row, weight, '\t') || !std::getline(row, group))
      fail_parse("dataset line " + std::to_string(line_no) + ": expected 5 tab-separated fields");
    if (label == "+1" || label == "1")
      e.label = 1;
    else if (label == "-1")
      e.label = -1;
    else
      fail_parse("dataset line " + std::to_string(line_no) + ": bad label '" + label + "'");
    try {
      std::size_t pos = 0;
      e.weight = std::stod(weight, &pos);
      if (pos != weight.size()) throw std::invalid_argument(weight);
      e.group = std::stoi(group, &pos);
      if (pos != group.size()) throw std::invalid_argument(group);
    } catch (const std::exception&) {
      fail_parse("dataset line " + std::to_string(line_no) + ": bad numeric field");
    }
    if (e.weight <= 0.0 || e.weight > 1.0)
      fail_parse("dataset line " + std::to_string(line_no) + ": weight outside (0,1]");
    examples.push_back(std::move(e));
  }
  return examples;
}

std::vector<PairExample> read_dataset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open dataset file '" + path + "'");
  return read_dataset(in);
}

}  // namespace hpi
