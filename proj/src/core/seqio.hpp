#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hpi {

// The 20 canonical amino-acid letters, in the row/column order used by the
// substitution matrix.
inline constexpr char kCanonicalResidues[] = "ARNDCQEGHILKMFPSTWYV";
inline constexpr int kNumResidues = 20;

enum class Role { host, pathogen };

struct ProteinRecord {
  std::string id;
  Role role = Role::host;
  int family_group = 0;  // 0 = no family annotation
  std::string sequence;  // sanitized: canonical residues only, non-empty
};

struct FastaEntry {
  std::string id;
  std::string sequence;  // uppercased, line breaks removed, otherwise raw
};

bool is_canonical_residue(char c);

// Header lines start with '>'; the id is the first whitespace-delimited token
// after it. Rejects empty input, sequence data before the first header, and
// duplicate ids.
std::vector<FastaEntry> parse_fasta(std::istream& in);
std::vector<FastaEntry> parse_fasta_file(const std::string& path);

// Canonical single-line form: ">id\nSEQ\n" per record.
void write_fasta(std::ostream& out, const std::vector<FastaEntry>& entries);

struct SanitizedSequence {
  std::string clean;
  std::size_t dropped = 0;
};

// Deletes every character outside the canonical alphabet. Input must already
// be uppercased. Throws if nothing canonical remains.
SanitizedSequence sanitize_sequence(const std::string& raw);

struct ProteinSet {
  Role role = Role::host;
  std::vector<ProteinRecord> records;  // file order
  std::unordered_map<std::string, std::size_t> index;

  const ProteinRecord* find(const std::string& id) const;
  std::size_t size() const { return records.size(); }
};

// Parses and sanitizes a FASTA file. Records whose sequence is empty after
// sanitization are skipped with a warning; the run continues.
ProteinSet load_protein_set(const std::string& path, Role role, std::ostream* warnings = nullptr);
ProteinSet load_protein_set(std::istream& in, Role role, std::ostream* warnings = nullptr);

struct Interaction {
  std::string host_id;
  std::string virus_id;
  int group = 0;
};

struct InteractionTable {
  std::vector<Interaction> positives;  // deduplicated, sorted by (host, virus)
  std::unordered_map<std::string, int> virus_group;  // viruses seen in rows
  std::size_t duplicates = 0;

  bool is_positive(const std::string& host_id, const std::string& virus_id) const;
  // Group of a virus, 0 when it never appears in an interaction row.
  int group_of(const std::string& virus_id) const;
};

// TSV columns host_id, virus_id, group; a header row is detected by a
// non-numeric third field. Every id must resolve against the given sets and
// each virus must carry a single consistent group.
InteractionTable load_interactions(std::istream& in, const ProteinSet& hosts, const ProteinSet& viruses);
InteractionTable load_interactions_file(const std::string& path, const ProteinSet& hosts,
                                        const ProteinSet& viruses);

}  // namespace hpi
