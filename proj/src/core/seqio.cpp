#include "core/seqio.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "core/error.hpp"

namespace hpi {

namespace {

bool canonical_table_init(bool table[256]) {
  for (int i = 0; i < 256; ++i) table[i] = false;
  for (const char* p = kCanonicalResidues; *p; ++p) table[static_cast<unsigned char>(*p)] = true;
  return true;
}

const bool* canonical_table() {
  static bool table[256];
  static bool once = canonical_table_init(table);
  (void)once;
  return table;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string first_token(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_first_of(" \t", b);
  return s.substr(b, e == std::string::npos ? std::string::npos : e - b);
}

}  // namespace

bool is_canonical_residue(char c) { return canonical_table()[static_cast<unsigned char>(c)]; }

std::vector<FastaEntry> parse_fasta(std::istream& in) {
  std::vector<FastaEntry> entries;
  std::set<std::string> seen;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    if (line[0] == '>') {
      std::string id = first_token(line.substr(1));
      if (id.empty()) fail_parse("FASTA line " + std::to_string(line_no) + ": header without id");
      if (!seen.insert(id).second)
        fail_parse("FASTA line " + std::to_string(line_no) + ": duplicate id '" + id + "'");
      entries.push_back({id, ""});
      have_header = true;
    } else {
      if (!have_header)
        fail_parse("FASTA line " + std::to_string(line_no) + ": sequence data before first header");
      std::string& seq = entries.back().sequence;
      for (char c : line) seq.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  if (entries.empty()) fail_parse("empty FASTA input");
  return entries;
}

std::vector<FastaEntry> parse_fasta_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open FASTA file '" + path + "'");
  return parse_fasta(in);
}

void write_fasta(std::ostream& out, const std::vector<FastaEntry>& entries) {
  for (const FastaEntry& e : entries) out << '>' << e.id << '\n' << e.sequence << '\n';
}

SanitizedSequence sanitize_sequence(const std::string& raw) {
  SanitizedSequence result;
  result.clean.reserve(raw.size());
  for (char c : raw) {
    if (is_canonical_residue(c))
      result.clean.push_back(c);
    else
      ++result.dropped;
  }
  if (result.clean.empty()) fail_data("no canonical residues in sequence");
  return result;
}

const ProteinRecord* ProteinSet::find(const std::string& id) const {
  auto it = index.find(id);
  return it == index.end() ? nullptr : &records[it->second];
}

ProteinSet load_protein_set(std::istream& in, Role role, std::ostream* warnings) {
  ProteinSet set;
  set.role = role;
  std::size_t dropped_total = 0;
  for (FastaEntry& e : parse_fasta(in)) {
    try {
      SanitizedSequence s = sanitize_sequence(e.sequence);
      dropped_total += s.dropped;
      set.index.emplace(e.id, set.records.size());
      set.records.push_back({e.id, role, 0, std::move(s.clean)});
    } catch (const Error&) {
      if (warnings) *warnings << "warning: skipping '" << e.id << "': no canonical residues\n";
    }
  }
  if (warnings && dropped_total > 0)
    *warnings << "warning: dropped " << dropped_total << " non-canonical residues\n";
  if (set.records.empty()) fail_data("no usable protein records");
  return set;
}

ProteinSet load_protein_set(const std::string& path, Role role, std::ostream* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open FASTA file '" + path + "'");
  return load_protein_set(in, role, warnings);
}

bool InteractionTable::is_positive(const std::string& host_id, const std::string& virus_id) const {
  Interaction probe{host_id, virus_id, 0};
  auto cmp = [](const Interaction& a, const Interaction& b) {
    if (a.host_id != b.host_id) return a.host_id < b.host_id;
    return a.virus_id < b.virus_id;
  };
  auto it = std::lower_bound(positives.begin(), positives.end(), probe, cmp);
  return it != positives.end() && it->host_id == host_id && it->virus_id == virus_id;
}

int InteractionTable::group_of(const std::string& virus_id) const {
  auto it = virus_group.find(virus_id);
  return it == virus_group.end() ? 0 : it->second;
}

namespace {

bool parse_integer_field(const std::string& field, long* out) {
  if (field.empty()) return false;
  std::size_t pos = 0;
  try {
    *out = std::stol(field, &pos);
    return pos == field.size();
  } catch (...) {
    return false;
  }
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace

InteractionTable load_interactions(std::istream& in, const ProteinSet& hosts, const ProteinSet& viruses) {
  InteractionTable table;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 3)
      fail_parse("interactions line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
    long group_value = 0;
    if (!parse_integer_field(fields[2], &group_value)) {
      if (first_row) {  // header row
        first_row = false;
        continue;
      }
      fail_parse("interactions line " + std::to_string(line_no) + ": bad group field '" + fields[2] + "'");
    }
    first_row = false;
    if (group_value < 1)
      fail_parse("interactions line " + std::to_string(line_no) + ": group must be a positive integer, got '" +
                 fields[2] + "'");
    int group = static_cast<int>(group_value);
    const std::string& host_id = fields[0];
    const std::string& virus_id = fields[1];
    if (!hosts.find(host_id))
      fail_data("interactions line " + std::to_string(line_no) + ": unknown host id '" + host_id + "'");
    if (!viruses.find(virus_id))
      fail_data("interactions line " + std::to_string(line_no) + ": unknown virus id '" + virus_id + "'");
    auto [it, inserted] = table.virus_group.emplace(virus_id, group);
    if (!inserted && it->second != group)
      fail_data("inconsistent group for virus '" + virus_id + "': " + std::to_string(it->second) +
                " vs " + std::to_string(group));
    if (!seen.emplace(host_id, virus_id).second) {
      ++table.duplicates;
      continue;
    }
    table.positives.push_back({host_id, virus_id, group});
  }
  std::sort(table.positives.begin(), table.positives.end(), [](const Interaction& a, const Interaction& b) {
    if (a.host_id != b.host_id) return a.host_id < b.host_id;
    return a.virus_id < b.virus_id;
  });
  return table;
}

InteractionTable load_interactions_file(const std::string& path, const ProteinSet& hosts,
                                        const ProteinSet& viruses) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open interactions file '" + path + "'");
  return load_interactions(in, hosts, viruses);
}

}  // namespace hpi
