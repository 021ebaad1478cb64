/*
Copyright 2026, the didea contributors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef DIDEA_CHEM_H
#define DIDEA_CHEM_H

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace didea {

using WarningSink = std::function<void(const std::string&)>;

// Prints "warning: <msg>" to stderr.
void warn_stderr(const std::string& msg);

inline constexpr int kWaterMass = 18;
inline constexpr int kMaxPeptideLength = 50;

bool is_standard_residue(char c);

// Integer (whole Dalton) residue masses plus static modifications.
class ResidueMassTable {
public:
  // Monoisotopic masses rounded to the nearest Dalton, with
  // carbamidomethyl cysteine (+57) applied.
  static ResidueMassTable standard();
  // Same masses without any static modification.
  static ResidueMassTable unmodified();

  // Throws InvalidInput for anything outside the 20 standard letters.
  int mass(char residue) const;

  void set_static_mod(char residue, int offset);
  const std::map<char, int>& static_mods() const { return mods_; }

private:
  std::array<int, 26> base_{};
  std::map<char, int> mods_;
};

// Prefix masses N_0..N_n and suffix masses C_0..C_n of the b/y ladders.
struct Peptide {
  std::string sequence;
  std::vector<int> prefix_masses;
  std::vector<int> suffix_masses;

  std::size_t length() const { return sequence.size(); }
  int residue_mass() const { return prefix_masses.back(); }
  // Residue sum plus water.
  int neutral_mass() const { return residue_mass() + kWaterMass; }
};

// Throws InvalidInput on an empty or over-long sequence or an unknown letter.
Peptide build_ladders(std::string_view sequence, const ResidueMassTable& table);

int residue_mass(char residue, const ResidueMassTable& table);
int neutral_peptide_mass(const Peptide& p);

struct DigestRules {
  int missed_cleavages = 0;
  std::size_t min_length = 1;
  std::size_t max_length = kMaxPeptideLength;
};

// Fully tryptic: cleave after K or R unless the next residue is P.
std::vector<std::string> digest(std::string_view protein, const DigestRules& rules = {});

struct Protein {
  std::string name;
  std::string sequence;
};

// '>' headers, sequence lines, whitespace ignored, letters uppercased.
// Proteins with '*' or non-standard letters are skipped with a warning.
// Sequence data before the first header is a ParseError.
std::vector<Protein> parse_fasta(std::istream& in, const std::string& source_name,
                                 const WarningSink& warn = warn_stderr);
std::vector<Protein> read_fasta(const std::string& path, const WarningSink& warn = warn_stderr);

enum class Provenance { target, decoy };

class PeptideDatabase {
public:
  PeptideDatabase() = default;
  // Deduplicates and sorts by (neutral mass, sequence).
  PeptideDatabase(std::vector<Peptide> peptides, Provenance provenance, std::uint64_t seed = 0);

  std::span<const Peptide> peptides() const { return peptides_; }
  std::size_t size() const { return peptides_.size(); }
  bool empty() const { return peptides_.empty(); }
  Provenance provenance() const { return provenance_; }
  std::uint64_t decoy_seed() const { return seed_; }

  bool contains(std::string_view sequence) const;

  // Peptides whose neutral mass m satisfies lo < m < hi.
  std::span<const Peptide> mass_range_open(double lo, double hi) const;
  // Peptides whose neutral mass m satisfies lo <= m <= hi.
  std::span<const Peptide> mass_range_closed(double lo, double hi) const;

private:
  std::vector<Peptide> peptides_;
  std::vector<std::size_t> by_sequence_;  // indices sorted by sequence
  Provenance provenance_ = Provenance::target;
  std::uint64_t seed_ = 0;
};

PeptideDatabase build_database(std::span<const Protein> proteins, const ResidueMassTable& table,
                               const DigestRules& rules);
PeptideDatabase build_database(const std::string& fasta_path, const ResidueMassTable& table,
                               const DigestRules& rules, const WarningSink& warn = warn_stderr);

// Per-protein Fisher-Yates shuffle driven by one seeded stream.
std::vector<Protein> shuffle_proteome(std::span<const Protein> proteins, std::uint64_t seed);

// Digest of the shuffled proteome with every sequence found in `target` removed.
PeptideDatabase generate_decoys(std::span<const Protein> proteins, std::uint64_t seed,
                                const ResidueMassTable& table, const DigestRules& rules,
                                const PeptideDatabase& target);
PeptideDatabase generate_decoys(const std::string& fasta_path, std::uint64_t seed,
                                const ResidueMassTable& table, const DigestRules& rules,
                                const PeptideDatabase& target, const WarningSink& warn = warn_stderr);

// "peptide\tneutral_mass" rows with a header line.
void write_peptide_table(std::ostream& out, const PeptideDatabase& db);

}  // namespace didea

#endif
