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

#ifndef DIDEA_SEARCH_H
#define DIDEA_SEARCH_H

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "didea/chem.h"
#include "didea/scoring.h"
#include "didea/spectra.h"

namespace didea {

enum class Scorer { didea, xcorr };

std::string to_string(Scorer s);
Scorer parse_scorer(const std::string& s);

struct SearchConfig {
  ScoringConfig scoring;
  Scorer scorer = Scorer::didea;
  double delta = 3.0;
  std::size_t top_k = 1;
  unsigned threads = 1;

  void validate() const;
};

struct PSM {
  std::string spectrum_id;
  std::string peptide;
  double score = 0.0;
  Scorer scorer = Scorer::didea;
  std::string charge_model;  // "+1", "+2", "+3", "mixture" or "max_over_charges"
  bool is_decoy = false;
  std::size_t candidate_count = 0;
};

// Peptides of length >= 2 with |m(p) - neutral_mass| < delta.
std::vector<const Peptide*> select_candidates(const PeptideDatabase& db, double neutral_mass,
                                              double delta);

// Scoring config and model tag actually applied to a spectrum. Empty when the
// spectrum cannot be scored under the configured mode (fixed charge absent).
struct ResolvedModel {
  ScoringConfig scoring;
  std::vector<int> window_charges;  // precursor charges whose mass windows are searched
  std::string tag;
};
std::optional<ResolvedModel> resolve_model(const ProcessedSpectrum& spectrum,
                                           const SearchConfig& cfg);

// Union of the candidate windows over the resolved charges, ordered by sequence.
std::vector<const Peptide*> spectrum_candidates(const ProcessedSpectrum& spectrum,
                                                const PeptideDatabase& db,
                                                const ResolvedModel& model, double delta);

double score_candidate(const Peptide& peptide, const ProcessedSpectrum& spectrum,
                       const ResolvedModel& model, Scorer scorer);

// Best k matches, score descending then sequence ascending.
std::vector<PSM> search_spectrum_top(const ProcessedSpectrum& spectrum, const PeptideDatabase& db,
                                     const SearchConfig& cfg, std::size_t k);
std::optional<PSM> search_spectrum(const ProcessedSpectrum& spectrum, const PeptideDatabase& db,
                                   const SearchConfig& cfg);

struct SearchResults {
  // One entry per input spectrum, in input order; empty when unmatched.
  std::vector<std::vector<PSM>> target;
  std::vector<std::vector<PSM>> decoy;
};

// Throws ConfigError when a spectrum was preprocessed with a different lambda
// or bin count than cfg.scoring.
SearchResults run_search(std::span<const ProcessedSpectrum> spectra, const PeptideDatabase& target,
                         const PeptideDatabase& decoy, const SearchConfig& cfg);

// Tab-separated with header. Each comment line is written as "# <line>" first.
void write_psms(std::ostream& out, std::span<const std::vector<PSM>> psms,
                std::span<const std::string> comments = {});
std::vector<PSM> read_psms(std::istream& in, const std::string& source_name);

}  // namespace didea

#endif
