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

#ifndef DIDEA_TESTS_SUPPORT_H
#define DIDEA_TESTS_SUPPORT_H

#include <cstdint>
#include <string>
#include <vector>

#include "didea/chem.h"
#include "didea/rng.h"
#include "didea/spectra.h"

namespace didea::testing {

inline const std::string kAlphabet = "ACDEFGHIKLMNPQRSTVWY";

inline std::string random_sequence(Rng& rng, std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(kAlphabet[rng.below(kAlphabet.size())]);
  return s;
}

inline std::vector<Precursor> precursors_for(ChargeSet cs, double neutral = 1000.0) {
  std::vector<Precursor> out;
  for (int z : cs.charges()) out.push_back({z, neutral});
  return out;
}

// Every bin equal to `value`.
inline ProcessedSpectrum uniform_spectrum(double value, ChargeSet cs, double lambda = 0.5,
                                          int bins = kDefaultBins) {
  return ProcessedSpectrum("uniform", std::vector<double>(static_cast<std::size_t>(bins), value),
                           precursors_for(cs), lambda);
}

inline ProcessedSpectrum empty_spectrum(ChargeSet cs, double lambda = 0.5, int bins = kDefaultBins) {
  return uniform_spectrum(0.0, cs, lambda, bins);
}

// Dense random peaks below `max_mz`, run through the normal preprocessing.
inline ProcessedSpectrum random_spectrum(Rng& rng, ChargeSet cs, int peaks = 300,
                                         double max_mz = 800.0, double lambda = 0.5) {
  RawSpectrum raw;
  raw.id = "random";
  for (int i = 0; i < peaks; ++i) raw.peaks.push_back({rng.uniform(1.0, max_mz), rng.uniform_open_closed()});
  raw.precursors = precursors_for(cs);
  return preprocess(raw, lambda);
}

}  // namespace didea::testing

#endif
