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

#include "didea/scoring.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "didea/error.h"

namespace didea {

std::string to_string(ChargeMode m) {
  switch (m) {
    case ChargeMode::fixed: return "fixed";
    case ChargeMode::mixture: return "mixture";
    case ChargeMode::max_over_charges: return "max_over_charges";
  }
  return "?";
}

std::string to_string(YChargeRule r) { return r == YChargeRule::conserve ? "conserve" : "literal"; }

std::string to_string(ChargeModel m) {
  switch (m) {
    case ChargeModel::plus1: return "+1";
    case ChargeModel::plus2: return "+2";
    case ChargeModel::plus3: return "+3";
    case ChargeModel::mixture: return "mixture";
  }
  return "?";
}

ChargeMode parse_charge_mode(const std::string& s) {
  if (s == "fixed") return ChargeMode::fixed;
  if (s == "mixture") return ChargeMode::mixture;
  if (s == "max_over_charges" || s == "max-over-charges" || s == "max") return ChargeMode::max_over_charges;
  throw ConfigError("unknown charge mode '" + s + "'");
}

YChargeRule parse_y_charge_rule(const std::string& s) {
  if (s == "conserve") return YChargeRule::conserve;
  if (s == "literal") return YChargeRule::literal;
  throw ConfigError("unknown y charge rule '" + s + "'");
}

void ScoringConfig::validate() const {
  if (num_bins < 1) throw ConfigError("bin count must be at least 1");
  if (max_shift < 1 || max_shift > num_bins)
    throw ConfigError("max shift must lie in [1, bins] (got " + std::to_string(max_shift) + ")");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  if (fixed_charge < 1 || fixed_charge > 3) throw ConfigError("fixed charge must be 1, 2 or 3");
}

double logsumexp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - m);
  return m + std::log(sum);
}

double logaddexp(double x, double y) {
  if (x < y) std::swap(x, y);
  if (y == -std::numeric_limits<double>::infinity()) return x;
  return x + std::log1p(std::exp(y - x));
}

int ion_bin(int fragment_mass, int fragment_charge, IonType type, int num_bins) {
  if (fragment_charge < 1) throw InvalidInput("ion charge must be at least 1");
  const int z = fragment_charge;
  const long num = static_cast<long>(fragment_mass) + (type == IonType::y ? kWaterMass : 0) + z;
  // round(num / z), halves away from zero; num > 0 for any real fragment.
  long bin = (2 * num + z) / (2L * z);
  return static_cast<int>(std::clamp<long>(bin, 1, num_bins));
}

namespace {

constexpr double kLogHalf = -0.69314718055994530942;

int clamp_bin(int bin, int num_bins) { return std::clamp(bin, 1, num_bins); }

// Ion bins of one cleavage frame for every charge the models consult.
struct FrameIons {
  int b1, b2, y1, y2;
};

FrameIons frame_ions(const Peptide& p, std::size_t t, int num_bins) {
  const int n_t = p.prefix_masses[t];
  const int c_t = p.suffix_masses[t];
  return {ion_bin(n_t, 1, IonType::b, num_bins), ion_bin(n_t, 2, IonType::b, num_bins),
          ion_bin(c_t, 1, IonType::y, num_bins), ion_bin(c_t, 2, IonType::y, num_bins)};
}

double frame_factor(const FrameIons& ions, int tau, int z, const ProcessedSpectrum& s,
                    YChargeRule rule) {
  const int nb = s.num_bins();
  auto lw = [&](int bin) { return s.log_weight(clamp_bin(bin + tau, nb)); };
  switch (z) {
    case 1:
      return kLogHalf + logaddexp(lw(ions.b1), lw(ions.y1));
    case 2:
      return lw(ions.b1) + lw(ions.y1);
    case 3: {
      // xi = 1 and xi = 2 for the b-ion; y-ion charge from the rule.
      const int y_for_b1 = rule == YChargeRule::conserve ? ions.y2 : ions.y1;
      const int y_for_b2 = rule == YChargeRule::conserve ? ions.y1 : ions.y2;
      return kLogHalf + logaddexp(lw(ions.b1) + lw(y_for_b1), lw(ions.b2) + lw(y_for_b2));
    }
    default:
      throw InvalidInput("unsupported precursor charge " + std::to_string(z));
  }
}

void check_scorable(const Peptide& p) {
  if (p.length() < 2)
    throw InvalidInput("peptide '" + p.sequence + "' has no cleavage site and cannot be scored");
}

void check_spectrum(const ProcessedSpectrum& s, const ScoringConfig& cfg) {
  if (s.num_bins() != cfg.num_bins)
    throw ConfigError("spectrum has " + std::to_string(s.num_bins()) + " bins, config expects " +
                      std::to_string(cfg.num_bins));
}

void require_charge(const ProcessedSpectrum& s, int z) {
  if (!s.charges().contains(z))
    throw ConfigError("spectrum '" + s.id() + "' does not declare charge +" + std::to_string(z));
}

void require_plus2_plus3(const ProcessedSpectrum& s) {
  const auto cs = s.charges();
  if (!cs.contains(2) || !cs.contains(3))
    throw ConfigError("spectrum '" + s.id() + "' is not multiply charged {+2,+3}");
}

ChargeModel model_for(int z) {
  switch (z) {
    case 1: return ChargeModel::plus1;
    case 2: return ChargeModel::plus2;
    case 3: return ChargeModel::plus3;
  }
  throw InvalidInput("unsupported precursor charge " + std::to_string(z));
}

}  // namespace

double frame_log_factor(const Peptide& peptide, std::size_t t, int tau, int z,
                        const ProcessedSpectrum& spectrum, const ScoringConfig& cfg) {
  if (t < 1 || t + 1 > peptide.length())
    throw InvalidInput("frame index " + std::to_string(t) + " outside [1, n-1]");
  if (tau < -cfg.max_shift || tau > cfg.max_shift) throw InvalidInput("shift outside [-M, M]");
  return frame_factor(frame_ions(peptide, t, spectrum.num_bins()), tau, z, spectrum,
                      cfg.y_charge_rule);
}

ShiftProfile shift_profile(const Peptide& peptide, const ProcessedSpectrum& spectrum, int z,
                           const ScoringConfig& cfg) {
  check_scorable(peptide);
  cfg.validate();
  check_spectrum(spectrum, cfg);
  ShiftProfile prof;
  prof.max_shift = cfg.max_shift;
  prof.model = model_for(z);
  prof.a.assign(static_cast<std::size_t>(2 * cfg.max_shift + 1), 0.0);

  const std::size_t n = peptide.length();
  for (std::size_t t = 1; t < n; ++t) {
    const FrameIons ions = frame_ions(peptide, t, spectrum.num_bins());
    for (int tau = -cfg.max_shift; tau <= cfg.max_shift; ++tau)
      prof.a[static_cast<std::size_t>(tau + cfg.max_shift)] +=
          frame_factor(ions, tau, z, spectrum, cfg.y_charge_rule);
  }
  return prof;
}

ShiftProfile mixture_profile(const ShiftProfile& plus2, const ShiftProfile& plus3) {
  if (plus2.a.size() != plus3.a.size() || plus2.max_shift != plus3.max_shift)
    throw InvalidInput("mixture of profiles with different shift ranges");
  ShiftProfile mix;
  mix.max_shift = plus2.max_shift;
  mix.model = ChargeModel::mixture;
  mix.a.resize(plus2.a.size());
  for (std::size_t i = 0; i < mix.a.size(); ++i)
    mix.a[i] = kLogHalf + logaddexp(plus2.a[i], plus3.a[i]);
  return mix;
}

double profile_score(const ShiftProfile& profile) {
  return profile.at(0) - logsumexp(profile.a);
}

double didea_score(const Peptide& peptide, const ProcessedSpectrum& spectrum,
                   const ScoringConfig& cfg) {
  switch (cfg.charge_mode) {
    case ChargeMode::fixed:
      require_charge(spectrum, cfg.fixed_charge);
      return profile_score(shift_profile(peptide, spectrum, cfg.fixed_charge, cfg));
    case ChargeMode::mixture: {
      require_plus2_plus3(spectrum);
      return profile_score(mixture_profile(shift_profile(peptide, spectrum, 2, cfg),
                                           shift_profile(peptide, spectrum, 3, cfg)));
    }
    case ChargeMode::max_over_charges: {
      require_plus2_plus3(spectrum);
      return std::max(profile_score(shift_profile(peptide, spectrum, 2, cfg)),
                      profile_score(shift_profile(peptide, spectrum, 3, cfg)));
    }
  }
  throw ConfigError("unknown charge mode");
}

ChargePosterior charge_posterior(const Peptide& peptide, const ProcessedSpectrum& spectrum,
                                 const ScoringConfig& cfg) {
  const auto cs = spectrum.charges();
  if (!cs.contains(2) || !cs.contains(3))
    throw InvalidInput("charge posterior needs a {+2,+3} spectrum");
  const double l2 = logsumexp(shift_profile(peptide, spectrum, 2, cfg).a);
  const double l3 = logsumexp(shift_profile(peptide, spectrum, 3, cfg).a);
  ChargePosterior post;
  post.plus2 = std::exp(l2 - logaddexp(l2, l3));
  post.plus3 = 1.0 - post.plus2;
  return post;
}

TheoreticalSpectrum theoretical_spectrum(const Peptide& peptide, int z, int num_bins) {
  check_scorable(peptide);
  if (z < 1 || z > 3) throw InvalidInput("unsupported precursor charge " + std::to_string(z));
  TheoreticalSpectrum th;
  th.phi.assign(static_cast<std::size_t>(num_bins), 0.0);
  const int max_ion_charge = z == 3 ? 2 : 1;
  for (std::size_t t = 1; t < peptide.length(); ++t) {
    for (int c = 1; c <= max_ion_charge; ++c) {
      th.phi[static_cast<std::size_t>(ion_bin(peptide.prefix_masses[t], c, IonType::b, num_bins) - 1)] = 1.0;
      th.phi[static_cast<std::size_t>(ion_bin(peptide.suffix_masses[t], c, IonType::y, num_bins) - 1)] = 1.0;
    }
  }
  for (int i = 0; i < num_bins; ++i)
    if (th.phi[static_cast<std::size_t>(i)] != 0.0) th.peak_bins.push_back(i + 1);
  return th;
}

double xcorr_score(const Peptide& peptide, const ProcessedSpectrum& spectrum, int z,
                   const ScoringConfig& cfg) {
  check_spectrum(spectrum, cfg);
  constexpr int kXcorrShift = 75;
  const int nb = spectrum.num_bins();
  const auto th = theoretical_spectrum(peptide, z, nb);

  double alpha = 0.0;
  for (int j : th.peak_bins) alpha += spectrum.intensity(j);

  double background = 0.0;
  for (int tau = -kXcorrShift; tau <= kXcorrShift; ++tau) {
    if (tau == 0) continue;
    for (int j : th.peak_bins) {
      const int i = j + tau;
      if (i >= 1 && i <= nb) background += spectrum.intensity(i);
    }
  }
  return alpha - background / (2.0 * kXcorrShift);
}

double xcorr_score(const Peptide& peptide, const ProcessedSpectrum& spectrum,
                   const ScoringConfig& cfg) {
  if (cfg.charge_mode == ChargeMode::fixed) {
    require_charge(spectrum, cfg.fixed_charge);
    return xcorr_score(peptide, spectrum, cfg.fixed_charge, cfg);
  }
  const auto charges = spectrum.charges().charges();
  if (charges.empty()) throw ConfigError("spectrum '" + spectrum.id() + "' declares no charge");
  double best = -std::numeric_limits<double>::infinity();
  for (int z : charges) best = std::max(best, xcorr_score(peptide, spectrum, z, cfg));
  return best;
}

}  // namespace didea
