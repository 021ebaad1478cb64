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

#ifndef DIDEA_SCORING_H
#define DIDEA_SCORING_H

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "didea/chem.h"
#include "didea/spectra.h"

namespace didea {

enum class ChargeMode { fixed, mixture, max_over_charges };

// Charge of the y-ion when the b-ion carries xi protons under the +3 model.
// conserve: 3 - xi. literal: xi.
enum class YChargeRule { conserve, literal };

enum class IonType { b, y };

// +1, +2 and +3 are single-charge models; mixture marginalizes {+2,+3}.
enum class ChargeModel { plus1, plus2, plus3, mixture };

std::string to_string(ChargeMode m);
std::string to_string(YChargeRule r);
std::string to_string(ChargeModel m);
ChargeMode parse_charge_mode(const std::string& s);
YChargeRule parse_y_charge_rule(const std::string& s);

struct ScoringConfig {
  int max_shift = 37;
  int num_bins = kDefaultBins;
  double lambda = kDefaultLambda;
  YChargeRule y_charge_rule = YChargeRule::conserve;
  ChargeMode charge_mode = ChargeMode::mixture;
  int fixed_charge = 2;  // used when charge_mode == fixed

  // Throws ConfigError unless 1 <= max_shift <= num_bins, lambda > 0 and
  // fixed_charge is 1, 2 or 3.
  void validate() const;
};

// Log-likelihood per shift: a[tau + M] = sum over frames of the log frame factor.
struct ShiftProfile {
  std::vector<double> a;
  int max_shift = 0;
  ChargeModel model = ChargeModel::plus2;

  double at(int tau) const { return a[static_cast<std::size_t>(tau + max_shift)]; }
};

// Stable log(sum(exp(x))). -inf for an empty range.
double logsumexp(std::span<const double> x);
double logaddexp(double x, double y);

// b: round((mass + z) / z), y: round((mass + 18 + z) / z), clamped to [1, B].
int ion_bin(int fragment_mass, int fragment_charge, IonType type, int num_bins);

// Log factor of cleavage frame t (1 <= t <= n-1) at shift tau under a single
// precursor charge z. Shifted bins are clamped to [1, B].
double frame_log_factor(const Peptide& peptide, std::size_t t, int tau, int z,
                        const ProcessedSpectrum& spectrum, const ScoringConfig& cfg);

// Throws InvalidInput for peptides shorter than 2 residues.
ShiftProfile shift_profile(const Peptide& peptide, const ProcessedSpectrum& spectrum, int z,
                           const ScoringConfig& cfg);

// a[tau] = ln(0.5 e^{a2[tau]} + 0.5 e^{a3[tau]}).
ShiftProfile mixture_profile(const ShiftProfile& plus2, const ShiftProfile& plus3);

// log p(tau_0 = 0 | p, s) for a profile: a[0] - logsumexp(a).
double profile_score(const ShiftProfile& profile);

// Score under cfg.charge_mode. Fixed mode needs cfg.fixed_charge in the
// spectrum's charge set; mixture and max_over_charges need {+2,+3}.
double didea_score(const Peptide& peptide, const ProcessedSpectrum& spectrum,
                   const ScoringConfig& cfg);

struct ChargePosterior {
  double plus2 = 0.5;
  double plus3 = 0.5;
};

// Posterior over precursor charge {+2,+3}, marginalizing the shift.
ChargePosterior charge_posterior(const Peptide& peptide, const ProcessedSpectrum& spectrum,
                                 const ScoringConfig& cfg);

struct TheoreticalSpectrum {
  std::vector<double> phi;  // phi[i] is bin i+1
  std::vector<int> peak_bins;  // ascending, distinct
};

// Unit peaks at the charge +1 b/y bins, plus charge +2 bins when z == 3.
TheoreticalSpectrum theoretical_spectrum(const Peptide& peptide, int z, int num_bins);

// <s, phi> - (1/150) sum_{0<|tau|<=75} <s, phi_tau> on the rank-normalized bins.
double xcorr_score(const Peptide& peptide, const ProcessedSpectrum& spectrum, int z,
                   const ScoringConfig& cfg);
// Fixed mode scores at cfg.fixed_charge; the other modes take the max over
// the spectrum's declared charges.
double xcorr_score(const Peptide& peptide, const ProcessedSpectrum& spectrum,
                   const ScoringConfig& cfg);

inline constexpr std::size_t kOracleMaxLength = 6;

struct OracleResult {
  double theta = 0.0;
  std::optional<ChargePosterior> charge;  // mixture model only
};

// Exhaustive enumeration of (tau_0, per-frame ion charges, kappa) in linear
// space. Independent of the shift-profile recursion. Peptide length 2..6.
OracleResult brute_force_posterior(const Peptide& peptide, const ProcessedSpectrum& spectrum,
                                   ChargeModel model, const ScoringConfig& cfg);

}  // namespace didea

#endif
