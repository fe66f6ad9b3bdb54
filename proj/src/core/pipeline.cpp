#include "core/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "core/error.hpp"
#include "core/features.hpp"
#include "core/format.hpp"

namespace hpi {

Corpus load_corpus(const std::string& interactions_path, const std::string& hosts_path,
                   const std::string& viruses_path, std::ostream* warnings) {
  Corpus corpus;
  corpus.hosts = load_protein_set(hosts_path, Role::host, warnings);
  corpus.viruses = load_protein_set(viruses_path, Role::pathogen, warnings);
  corpus.table = load_interactions_file(interactions_path, corpus.hosts, corpus.viruses);
  corpus.hosts_path = hosts_path;
  corpus.viruses_path = viruses_path;
  corpus.interactions_path = interactions_path;
  corpus.virus_digest = fnv1a64_file(viruses_path);
  if (warnings && corpus.table.duplicates > 0)
    *warnings << "warning: collapsed " << corpus.table.duplicates
              << " duplicate interaction rows\n";
  return corpus;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open '" + path + "'");
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ull;
    }
  }
  return hash;
}

std::string matrix_cache_path(const Corpus& corpus) {
  char digest[24];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(corpus.virus_digest));
  return corpus.viruses_path + "." + digest + ".dmat";
}

DissimilarityMatrix ensure_dissimilarity(const Corpus& corpus, bool use_cache, int n_threads,
                                         std::ostream* warnings) {
  std::string cache = matrix_cache_path(corpus);
  if (use_cache) {
    std::ifstream probe(cache);
    if (probe) {
      probe.close();
      try {
        DissimilarityMatrix matrix = load_dissimilarity_matrix(cache);
        if (matrix.size() == corpus.viruses.size()) return matrix;
        if (warnings) *warnings << "warning: ignoring stale matrix cache '" << cache << "'\n";
      } catch (const Error& e) {
        if (warnings)
          *warnings << "warning: could not reuse matrix cache '" << cache << "': " << e.what()
                    << "\n";
      }
    }
  }
  DissimilarityMatrix matrix = dissimilarity_matrix(corpus.viruses, blosum62_params(),
                                                    n_threads < 0 ? 0u
                                                                  : static_cast<unsigned>(n_threads));
  if (use_cache) {
    try {
      save_dissimilarity_matrix(matrix, cache);
    } catch (const Error& e) {
      if (warnings) *warnings << "warning: could not write matrix cache: " << e.what() << "\n";
    }
  }
  return matrix;
}

std::vector<PairExample> build_dataset(const Corpus& corpus, const SamplingOptions& options,
                                       std::ostream* warnings) {
  if (options.threshold < 0.0 || options.threshold > 1.0)
    fail_invalid("dissimilarity threshold must lie in [0,1]");
  std::vector<PairExample> positives = make_positive_examples(corpus.table);
  if (positives.empty()) fail_data("interaction table has no positive pairs");

  std::vector<PairKey> candidates;
  DissimilarityMatrix matrix;
  bool have_matrix = false;
  if (options.mode == SamplingMode::denovo) {
    matrix = ensure_dissimilarity(corpus, options.use_cache, options.n_threads, warnings);
    have_matrix = true;
    candidates = candidate_negatives_denovo(corpus.hosts, corpus.viruses, corpus.table, matrix,
                                            options.threshold);
  } else {
    candidates = candidate_negatives_random(corpus.hosts, corpus.viruses, corpus.table);
  }

  std::optional<std::size_t> count;
  switch (options.count.kind) {
    case CountPolicy::Kind::all:
      break;
    case CountPolicy::Kind::absolute:
      count = options.count.absolute;
      break;
    case CountPolicy::Kind::ratio: {
      if (options.count.ratio <= 0.0) fail_invalid("negative:positive ratio must be positive");
      double want = options.count.ratio * static_cast<double>(positives.size());
      count = static_cast<std::size_t>(std::llround(want));
      break;
    }
  }
  if (count && *count > candidates.size())
    fail_data("requested " + std::to_string(*count) + " negatives but only " +
              std::to_string(candidates.size()) + " admissible candidates exist");

  std::vector<PairKey> chosen = sample_negatives(std::move(candidates), count, options.seed);
  std::sort(chosen.begin(), chosen.end());
  std::vector<PairExample> negatives =
      make_negative_examples(chosen, corpus.table, have_matrix ? &matrix : nullptr);

  std::vector<PairExample> dataset = std::move(positives);
  dataset.insert(dataset.end(), negatives.begin(), negatives.end());
  if (warnings) {
    std::size_t ungrouped = 0;
    for (const PairExample& e : dataset)
      if (e.group == 0) ++ungrouped;
    if (ungrouped > 0)
      *warnings << "warning: " << ungrouped
                << " examples involve pathogens with no interaction row; they carry group 0\n";
  }
  return dataset;
}

LabeledMatrix assemble_matrix(const Corpus& corpus, const std::vector<PairExample>& examples) {
  LabeledMatrix data;
  data.dim = kPairDim;
  data.features.reserve(examples.size() * kPairDim);
  data.labels.reserve(examples.size());
  data.weights.reserve(examples.size());
  data.groups.reserve(examples.size());

  std::unordered_map<std::string, std::vector<double>> host_cache, virus_cache;
  auto feature_of = [](std::unordered_map<std::string, std::vector<double>>& cache,
                       const ProteinSet& set, const std::string& id,
                       const char* kind) -> const std::vector<double>& {
    auto it = cache.find(id);
    if (it != cache.end()) return it->second;
    const ProteinRecord* record = set.find(id);
    if (!record) fail_data(std::string(kind) + " '" + id + "' is not in the corpus");
    return cache.emplace(id, protein_feature(record->sequence)).first->second;
  };

  for (const PairExample& e : examples) {
    const std::vector<double>& h = feature_of(host_cache, corpus.hosts, e.host_id, "host");
    const std::vector<double>& v = feature_of(virus_cache, corpus.viruses, e.virus_id, "pathogen");
    data.features.insert(data.features.end(), h.begin(), h.end());
    data.features.insert(data.features.end(), v.begin(), v.end());
    data.labels.push_back(e.label);
    data.weights.push_back(e.weight);
    data.groups.push_back(e.group);
  }
  return data;
}

void write_features_tsv(const ProteinSet& proteins, const std::string& path,
                        std::ostream* warnings) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("cannot write '" + path + "'");
  for (const ProteinRecord& record : proteins.records) {
    if (record.sequence.size() < 3 && warnings)
      *warnings << "warning: protein '" << record.id
                << "' is shorter than a triad window; its features are all zero\n";
    std::vector<double> feature = protein_feature(record.sequence);
    out << record.id;
    for (std::size_t d = 0; d < feature.size(); ++d)
      out << (d ? "," : "\t") << format_real(feature[d]);
    out << '\n';
  }
  if (!out) fail_io("error writing '" + path + "'");
}

std::vector<std::pair<std::string, std::vector<double>>> read_features_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      fail_parse("'" + path + "' line " + std::to_string(line_no) + ": expected id<TAB>values");
    std::vector<double> values;
    values.reserve(kTriadDim);
    const char* p = line.c_str() + tab + 1;
    while (*p) {
      char* end = nullptr;
      double v = std::strtod(p, &end);
      if (end == p)
        fail_parse("'" + path + "' line " + std::to_string(line_no) + ": bad real value");
      values.push_back(v);
      p = end;
      if (*p == ',') ++p;
      else if (*p != '\0')
        fail_parse("'" + path + "' line " + std::to_string(line_no) + ": bad separator");
    }
    if (values.size() != kTriadDim)
      fail_parse("'" + path + "' line " + std::to_string(line_no) + ": expected " +
                 std::to_string(kTriadDim) + " values, got " + std::to_string(values.size()));
    rows.emplace_back(line.substr(0, tab), std::move(values));
  }
  return rows;
}

namespace {

std::string format_param(double v, bool defined) {
  if (!defined) return "-";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void write_report_tsv(const CvReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("cannot write '" + path + "'");
  out << "group\tP\tN\tC\tgamma\tauc_roc\tauc_pr\n";
  for (const GroupResult& row : report.rows) {
    bool params_known = row.cost > 0.0;
    out << row.group << '\t' << row.p_test << '\t' << row.n_test << '\t'
        << format_param(row.cost, params_known) << '\t' << format_param(row.gamma, params_known)
        << '\t' << (row.defined ? format_fixed6(row.auc_roc) : "undefined") << '\t'
        << (row.defined ? format_fixed6(row.auc_pr) : "undefined") << '\n';
  }
  out << "weighted_average\t" << report.total_p << '\t' << report.total_n << "\t-\t-\t"
      << format_fixed6(report.weighted_auc_roc) << '\t' << format_fixed6(report.weighted_auc_pr)
      << '\n';
  if (!out) fail_io("error writing '" + path + "'");
}

std::string report_json(const CvReport& report) {
  nlohmann::json doc;
  doc["groups"] = nlohmann::json::array();
  for (const GroupResult& row : report.rows) {
    nlohmann::json entry;
    entry["group"] = row.group;
    entry["p"] = row.p_test;
    entry["n"] = row.n_test;
    if (row.cost > 0.0) {
      entry["C"] = row.cost;
      entry["gamma"] = row.gamma;
    } else {
      entry["C"] = nullptr;
      entry["gamma"] = nullptr;
    }
    if (row.defined) {
      entry["auc_roc"] = row.auc_roc;
      entry["auc_pr"] = row.auc_pr;
    } else {
      entry["auc_roc"] = nullptr;
      entry["auc_pr"] = nullptr;
    }
    doc["groups"].push_back(entry);
  }
  doc["weighted_average"] = {{"p", report.total_p},
                             {"n", report.total_n},
                             {"auc_roc", report.weighted_auc_roc},
                             {"auc_pr", report.weighted_auc_pr}};
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

void write_report_json(const CvReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("cannot write '" + path + "'");
  out << report_json(report);
  if (!out) fail_io("error writing '" + path + "'");
}

}  // namespace hpi
