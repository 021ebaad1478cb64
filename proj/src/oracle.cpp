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

// Brute-force posterior by explicit enumeration of every hidden assignment.
// Deliberately shares nothing with the shift-profile code beyond the inputs:
// ion positions, weights and the joint are all recomputed here in linear space.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "didea/error.h"
#include "didea/scoring.h"

namespace didea {

namespace {

double weight(const ProcessedSpectrum& s, double bin, double lambda) {
  const int nb = s.num_bins();
  const int i = static_cast<int>(std::clamp(bin, 1.0, static_cast<double>(nb)));
  const double v = s.intensity(i);
  return 1.0 - lambda * std::exp(-lambda) + lambda * std::exp(-lambda * (1.0 - v));
}

double b_position(int prefix_mass, int charge, int num_bins) {
  const double m = std::round(static_cast<double>(prefix_mass + charge) / charge);
  return std::clamp(m, 1.0, static_cast<double>(num_bins));
}

double y_position(int suffix_mass, int charge, int num_bins) {
  const double m = std::round(static_cast<double>(suffix_mass + 18 + charge) / charge);
  return std::clamp(m, 1.0, static_cast<double>(num_bins));
}

// Probability-weighted factor of frame t with hidden state `state` (0 or 1)
// under precursor charge z. Returns {prior, factor}.
std::pair<double, double> frame_term(const Peptide& p, std::size_t t, int state, int z, int tau,
                                     const ProcessedSpectrum& s, const ScoringConfig& cfg) {
  const int nb = s.num_bins();
  const double lam = cfg.lambda;
  const int n_t = p.prefix_masses[t];
  const int c_t = p.suffix_masses[t];
  if (z == 2) {
    // Both product ions take one proton; the hidden state is degenerate.
    if (state == 1) return {0.0, 0.0};
    return {1.0, weight(s, b_position(n_t, 1, nb) + tau, lam) *
                     weight(s, y_position(c_t, 1, nb) + tau, lam)};
  }
  if (z == 1) {
    // state 0: b-ion carries the proton, y-ion neutral (undetected); state 1: reverse.
    const double w = state == 0 ? weight(s, b_position(n_t, 1, nb) + tau, lam)
                                : weight(s, y_position(c_t, 1, nb) + tau, lam);
    return {0.5, w};
  }
  const int xi = state + 1;
  const int y_charge = cfg.y_charge_rule == YChargeRule::conserve ? 3 - xi : xi;
  return {0.5, weight(s, b_position(n_t, xi, nb) + tau, lam) *
                   weight(s, y_position(c_t, y_charge, nb) + tau, lam)};
}

}  // namespace

OracleResult brute_force_posterior(const Peptide& peptide, const ProcessedSpectrum& spectrum,
                                   ChargeModel model, const ScoringConfig& cfg) {
  const std::size_t n = peptide.length();
  if (n < 2) throw InvalidInput("oracle needs a peptide with at least one cleavage site");
  if (n > kOracleMaxLength) throw InvalidInput("peptide too long for exhaustive enumeration");
  cfg.validate();

  std::vector<int> kappas;
  switch (model) {
    case ChargeModel::plus1: kappas = {1}; break;
    case ChargeModel::plus2: kappas = {2}; break;
    case ChargeModel::plus3: kappas = {3}; break;
    case ChargeModel::mixture: kappas = {2, 3}; break;
  }
  const double p_kappa = 1.0 / static_cast<double>(kappas.size());
  const double p_tau = 1.0 / static_cast<double>(2 * cfg.max_shift + 1);
  const std::size_t frames = n - 1;
  const std::uint32_t assignments = 1u << frames;

  double total = 0.0;
  double at_zero = 0.0;
  double kappa2 = 0.0;
  for (int tau = -cfg.max_shift; tau <= cfg.max_shift; ++tau) {
    for (int kappa : kappas) {
      for (std::uint32_t mask = 0; mask < assignments; ++mask) {
        double joint = p_tau * p_kappa;
        for (std::size_t f = 0; f < frames; ++f) {
          const int state = static_cast<int>((mask >> f) & 1u);
          const auto [prior, factor] = frame_term(peptide, f + 1, state, kappa, tau, spectrum, cfg);
          joint *= prior * factor;
        }
        total += joint;
        if (tau == 0) at_zero += joint;
        if (kappa == 2) kappa2 += joint;
      }
    }
  }

  OracleResult r;
  r.theta = std::log(at_zero / total);
  if (model == ChargeModel::mixture) {
    ChargePosterior cp;
    cp.plus2 = kappa2 / total;
    cp.plus3 = 1.0 - cp.plus2;
    r.charge = cp;
  }
  return r;
}

}  // namespace didea
