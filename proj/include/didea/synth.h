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

#ifndef DIDEA_SYNTH_H
#define DIDEA_SYNTH_H

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "didea/chem.h"
#include "didea/spectra.h"

namespace didea {

enum class IntensityModel {
  uniform,      // signal and noise both on (0, 1]
  rank_biased,  // signal on (0.5, 1], noise on (0, 0.5]
};

std::string to_string(IntensityModel m);
IntensityModel parse_intensity_model(const std::string& s);

struct SynthParams {
  std::uint64_t seed = 1;
  double signal_fraction = 1.0;
  int noise_peaks = 0;
  double mz_jitter_sd = 0.0;
  IntensityModel intensity_model = IntensityModel::rank_biased;
  int charge = 2;
  // Declare {+2,+3} instead of the true charge alone (charge must be 2 or 3).
  bool multiply_charged = false;
  // Precursor mass noise is uniform on (-delta/2, delta/2).
  double delta = 3.0;
  int num_bins = kDefaultBins;

  void validate() const;
};

// b/y ions at the charges the precursor charge allows, each kept with
// probability signal_fraction and jittered; plus uniform noise peaks on
// [1, num_bins]. Throws InvalidInput for peptides shorter than 2.
RawSpectrum synthesize_spectrum(const Peptide& peptide, const SynthParams& params,
                                const std::string& id = "synth");

struct SynthBatch {
  std::vector<RawSpectrum> spectra;
  std::vector<std::string> truth;  // true peptide per spectrum
};

// Spectrum i uses seed (params.seed XOR i) and id "synth_<i>".
SynthBatch synthesize_batch(std::span<const Peptide> peptides, const SynthParams& params);

// "spectrum_id\ttrue_peptide" rows with a header.
void write_key(std::ostream& out, const SynthBatch& batch);

}  // namespace didea

#endif
