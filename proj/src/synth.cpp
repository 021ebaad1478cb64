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

#include "didea/synth.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "didea/error.h"
#include "didea/rng.h"

namespace didea {

std::string to_string(IntensityModel m) {
  return m == IntensityModel::uniform ? "uniform" : "rank-biased";
}

IntensityModel parse_intensity_model(const std::string& s) {
  if (s == "uniform") return IntensityModel::uniform;
  if (s == "rank-biased" || s == "rank_biased") return IntensityModel::rank_biased;
  throw ConfigError("unknown intensity model '" + s + "'");
}

void SynthParams::validate() const {
  if (!(signal_fraction >= 0.0 && signal_fraction <= 1.0))
    throw ConfigError("signal fraction must lie in [0, 1]");
  if (noise_peaks < 0) throw ConfigError("noise peak count must be non-negative");
  if (!(mz_jitter_sd >= 0.0) || !std::isfinite(mz_jitter_sd))
    throw ConfigError("m/z jitter must be non-negative");
  if (charge < 1 || charge > 3) throw ConfigError("synthetic charge must be 1, 2 or 3");
  if (multiply_charged && charge == 1) throw ConfigError("a +1 precursor cannot be multiply charged");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (num_bins < 1) throw ConfigError("bin count must be positive");
}

RawSpectrum synthesize_spectrum(const Peptide& peptide, const SynthParams& params,
                                const std::string& id) {
  params.validate();
  if (peptide.length() < 2)
    throw InvalidInput("cannot synthesize a spectrum for single-residue peptide '" +
                       peptide.sequence + "'");
  Rng rng(params.seed);
  RawSpectrum s;
  s.id = id;

  const bool biased = params.intensity_model == IntensityModel::rank_biased;
  auto signal_intensity = [&] { return biased ? 0.5 + 0.5 * rng.uniform_open_closed() : rng.uniform_open_closed(); };
  auto noise_intensity = [&] { return biased ? 0.5 * rng.uniform_open_closed() : rng.uniform_open_closed(); };

  const int max_ion_charge = params.charge == 3 ? 2 : 1;
  auto emit = [&](double mz) {
    if (!rng.bernoulli(params.signal_fraction)) return;
    if (params.mz_jitter_sd > 0.0) mz = rng.normal(mz, params.mz_jitter_sd);
    const double intensity = signal_intensity();
    if (mz > 0.0) s.peaks.push_back({mz, intensity});
  };
  for (std::size_t t = 1; t < peptide.length(); ++t) {
    for (int c = 1; c <= max_ion_charge; ++c) {
      emit(static_cast<double>(peptide.prefix_masses[t] + c) / c);
      emit(static_cast<double>(peptide.suffix_masses[t] + kWaterMass + c) / c);
    }
  }
  for (int i = 0; i < params.noise_peaks; ++i) {
    const double mz = rng.uniform(1.0, static_cast<double>(params.num_bins));
    s.peaks.push_back({mz, noise_intensity()});
  }
  std::sort(s.peaks.begin(), s.peaks.end(),
            [](const Peak& a, const Peak& b) { return a.mz < b.mz; });

  const double neutral =
      peptide.neutral_mass() + rng.uniform(-params.delta / 2.0, params.delta / 2.0);
  if (params.multiply_charged) {
    const int z = params.charge;
    const double pepmass = (neutral + z * kProtonMass) / z;
    for (int c : {2, 3}) s.precursors.push_back({c, c * pepmass - c * kProtonMass});
  } else {
    s.precursors.push_back({params.charge, neutral});
  }
  return s;
}

SynthBatch synthesize_batch(std::span<const Peptide> peptides, const SynthParams& params) {
  SynthBatch batch;
  for (std::size_t i = 0; i < peptides.size(); ++i) {
    SynthParams p = params;
    p.seed = params.seed ^ static_cast<std::uint64_t>(i);
    batch.spectra.push_back(synthesize_spectrum(peptides[i], p, "synth_" + std::to_string(i)));
    batch.truth.push_back(peptides[i].sequence);
  }
  return batch;
}

void write_key(std::ostream& out, const SynthBatch& batch) {
  out << "spectrum_id\ttrue_peptide\n";
  for (std::size_t i = 0; i < batch.spectra.size(); ++i)
    out << batch.spectra[i].id << '\t' << batch.truth[i] << '\n';
}

}  // namespace didea
