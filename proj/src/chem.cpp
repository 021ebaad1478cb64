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

#include "didea/chem.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "didea/error.h"
#include "didea/rng.h"

namespace didea {

void warn_stderr(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

namespace {

constexpr std::string_view kResidues = "ACDEFGHIKLMNPQRSTVWY";

struct MonoisotopicResidue {
  char letter;
  double mass;
};

constexpr MonoisotopicResidue kMonoisotopic[] = {
    {'G', 57.02146},  {'A', 71.03711},  {'S', 87.03203},  {'P', 97.05276},
    {'V', 99.06841},  {'T', 101.04768}, {'C', 103.00919}, {'L', 113.08406},
    {'I', 113.08406}, {'N', 114.04293}, {'D', 115.02694}, {'Q', 128.05858},
    {'K', 128.09496}, {'E', 129.04259}, {'M', 131.04049}, {'H', 137.05891},
    {'F', 147.06841}, {'R', 156.10111}, {'Y', 163.06333}, {'W', 186.07931},
};

constexpr double kCarbamidomethyl = 57.02146;

}  // namespace

bool is_standard_residue(char c) { return kResidues.find(c) != std::string_view::npos; }

ResidueMassTable ResidueMassTable::unmodified() {
  ResidueMassTable t;
  for (const auto& r : kMonoisotopic)
    t.base_[static_cast<std::size_t>(r.letter - 'A')] = static_cast<int>(std::lround(r.mass));
  return t;
}

ResidueMassTable ResidueMassTable::standard() {
  auto t = unmodified();
  t.set_static_mod('C', static_cast<int>(std::lround(kCarbamidomethyl)));
  return t;
}

void ResidueMassTable::set_static_mod(char residue, int offset) {
  if (!is_standard_residue(residue))
    throw InvalidInput(std::string("static modification on unknown residue '") + residue + "'");
  if (base_[static_cast<std::size_t>(residue - 'A')] + offset <= 0)
    throw InvalidInput("static modification makes residue mass non-positive");
  mods_[residue] = offset;
}

int ResidueMassTable::mass(char residue) const {
  if (!is_standard_residue(residue))
    throw InvalidInput(std::string("unknown amino acid '") + residue + "'");
  int m = base_[static_cast<std::size_t>(residue - 'A')];
  if (auto it = mods_.find(residue); it != mods_.end()) m += it->second;
  return m;
}

int residue_mass(char residue, const ResidueMassTable& table) { return table.mass(residue); }

Peptide build_ladders(std::string_view sequence, const ResidueMassTable& table) {
  const std::size_t n = sequence.size();
  if (n == 0) throw InvalidInput("empty peptide sequence");
  if (n > static_cast<std::size_t>(kMaxPeptideLength))
    throw InvalidInput("peptide longer than " + std::to_string(kMaxPeptideLength) + " residues");

  Peptide p;
  p.sequence = std::string(sequence);
  p.prefix_masses.assign(n + 1, 0);
  p.suffix_masses.assign(n + 1, 0);
  for (std::size_t t = 1; t <= n; ++t)
    p.prefix_masses[t] = p.prefix_masses[t - 1] + table.mass(sequence[t - 1]);
  for (std::size_t t = n; t-- > 0;)
    p.suffix_masses[t] = p.suffix_masses[t + 1] + table.mass(sequence[t]);
  return p;
}

int neutral_peptide_mass(const Peptide& p) {
  if (p.sequence.empty() || p.prefix_masses.empty()) throw InvalidInput("empty peptide");
  return p.neutral_mass();
}

std::vector<std::string> digest(std::string_view protein, const DigestRules& rules) {
  std::vector<std::string> out;
  if (protein.empty()) return out;

  // Fragment boundaries: [cuts[i], cuts[i+1]).
  std::vector<std::size_t> cuts{0};
  for (std::size_t i = 0; i + 1 < protein.size(); ++i) {
    const char c = protein[i];
    if ((c == 'K' || c == 'R') && protein[i + 1] != 'P') cuts.push_back(i + 1);
  }
  cuts.push_back(protein.size());

  const std::size_t fragments = cuts.size() - 1;
  const auto missed = static_cast<std::size_t>(std::max(0, rules.missed_cleavages));
  for (std::size_t i = 0; i < fragments; ++i) {
    for (std::size_t k = 0; k <= missed && i + k < fragments; ++k) {
      const std::size_t begin = cuts[i];
      const std::size_t len = cuts[i + k + 1] - begin;
      if (len < rules.min_length || len > rules.max_length) continue;
      out.emplace_back(protein.substr(begin, len));
    }
  }
  return out;
}

std::vector<Protein> parse_fasta(std::istream& in, const std::string& source_name,
                                 const WarningSink& warn) {
  std::vector<Protein> proteins;
  bool have_header = false;
  bool invalid = false;
  char bad_letter = 0;
  Protein current;

  auto flush = [&] {
    if (!have_header) return;
    if (invalid) {
      if (warn)
        warn(source_name + ": skipping protein '" + current.name + "' (invalid residue '" +
             bad_letter + "')");
    } else {
      proteins.push_back(std::move(current));
    }
    current = Protein{};
    invalid = false;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '>') {
      flush();
      have_header = true;
      current.name = line.substr(1);
      continue;
    }
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      if (!have_header)
        throw ParseError(source_name + ":" + std::to_string(line_no) +
                         ": sequence data before the first '>' header");
      const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (!is_standard_residue(u)) {
        if (!invalid) bad_letter = u;
        invalid = true;
        continue;
      }
      current.sequence.push_back(u);
    }
  }
  flush();
  return proteins;
}

std::vector<Protein> read_fasta(const std::string& path, const WarningSink& warn) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open FASTA file '" + path + "'");
  return parse_fasta(in, path, warn);
}

PeptideDatabase::PeptideDatabase(std::vector<Peptide> peptides, Provenance provenance,
                                 std::uint64_t seed)
    : peptides_(std::move(peptides)), provenance_(provenance), seed_(seed) {
  std::sort(peptides_.begin(), peptides_.end(), [](const Peptide& a, const Peptide& b) {
    if (a.neutral_mass() != b.neutral_mass()) return a.neutral_mass() < b.neutral_mass();
    return a.sequence < b.sequence;
  });
  peptides_.erase(std::unique(peptides_.begin(), peptides_.end(),
                              [](const Peptide& a, const Peptide& b) {
                                return a.sequence == b.sequence;
                              }),
                  peptides_.end());
  by_sequence_.resize(peptides_.size());
  for (std::size_t i = 0; i < peptides_.size(); ++i) by_sequence_[i] = i;
  std::sort(by_sequence_.begin(), by_sequence_.end(), [this](std::size_t a, std::size_t b) {
    return peptides_[a].sequence < peptides_[b].sequence;
  });
}

bool PeptideDatabase::contains(std::string_view sequence) const {
  auto it = std::lower_bound(by_sequence_.begin(), by_sequence_.end(), sequence,
                             [this](std::size_t i, std::string_view s) {
                               return std::string_view(peptides_[i].sequence) < s;
                             });
  return it != by_sequence_.end() && peptides_[*it].sequence == sequence;
}

std::span<const Peptide> PeptideDatabase::mass_range_open(double lo, double hi) const {
  auto first = std::partition_point(peptides_.begin(), peptides_.end(),
                                    [lo](const Peptide& p) { return p.neutral_mass() <= lo; });
  auto last = std::partition_point(first, peptides_.end(),
                                   [hi](const Peptide& p) { return p.neutral_mass() < hi; });
  return {first, last};
}

std::span<const Peptide> PeptideDatabase::mass_range_closed(double lo, double hi) const {
  auto first = std::partition_point(peptides_.begin(), peptides_.end(),
                                    [lo](const Peptide& p) { return p.neutral_mass() < lo; });
  auto last = std::partition_point(first, peptides_.end(),
                                   [hi](const Peptide& p) { return p.neutral_mass() <= hi; });
  return {first, last};
}

namespace {

std::vector<Peptide> digest_all(std::span<const Protein> proteins, const ResidueMassTable& table,
                                const DigestRules& rules) {
  std::vector<Peptide> out;
  for (const auto& protein : proteins)
    for (const auto& seq : digest(protein.sequence, rules)) {
      if (seq.size() > static_cast<std::size_t>(kMaxPeptideLength)) continue;
      out.push_back(build_ladders(seq, table));
    }
  return out;
}

}  // namespace

PeptideDatabase build_database(std::span<const Protein> proteins, const ResidueMassTable& table,
                               const DigestRules& rules) {
  return PeptideDatabase(digest_all(proteins, table, rules), Provenance::target);
}

PeptideDatabase build_database(const std::string& fasta_path, const ResidueMassTable& table,
                               const DigestRules& rules, const WarningSink& warn) {
  const auto proteins = read_fasta(fasta_path, warn);
  return build_database(proteins, table, rules);
}

std::vector<Protein> shuffle_proteome(std::span<const Protein> proteins, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Protein> out(proteins.begin(), proteins.end());
  for (auto& p : out) rng.shuffle(p.sequence.begin(), p.sequence.end());
  return out;
}

PeptideDatabase generate_decoys(std::span<const Protein> proteins, std::uint64_t seed,
                                const ResidueMassTable& table, const DigestRules& rules,
                                const PeptideDatabase& target) {
  const auto shuffled = shuffle_proteome(proteins, seed);
  auto peptides = digest_all(shuffled, table, rules);
  std::erase_if(peptides, [&](const Peptide& p) { return target.contains(p.sequence); });
  return PeptideDatabase(std::move(peptides), Provenance::decoy, seed);
}

PeptideDatabase generate_decoys(const std::string& fasta_path, std::uint64_t seed,
                                const ResidueMassTable& table, const DigestRules& rules,
                                const PeptideDatabase& target, const WarningSink& warn) {
  const auto proteins = read_fasta(fasta_path, warn);
  return generate_decoys(proteins, seed, table, rules, target);
}

void write_peptide_table(std::ostream& out, const PeptideDatabase& db) {
  out << "peptide\tneutral_mass\n";
  for (const auto& p : db.peptides()) out << p.sequence << '\t' << p.neutral_mass() << '\n';
}

}  // namespace didea
