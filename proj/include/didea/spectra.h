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

#ifndef DIDEA_SPECTRA_H
#define DIDEA_SPECTRA_H

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "didea/chem.h"

namespace didea {

inline constexpr double kProtonMass = 1.00728;
inline constexpr int kDefaultBins = 2000;
inline constexpr double kDefaultLambda = 0.5;

// Subset of {+1, +2, +3}.
class ChargeSet {
public:
  ChargeSet() = default;
  ChargeSet(std::initializer_list<int> charges);

  void insert(int charge);
  bool contains(int charge) const { return charge >= 1 && charge <= 3 && (bits_ >> charge) & 1u; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  std::vector<int> charges() const;
  // {+1}, {+2}, {+3} or {+2,+3}.
  bool is_supported() const;
  bool multiply_charged() const { return size() > 1; }

  friend bool operator==(ChargeSet, ChargeSet) = default;

private:
  std::uint8_t bits_ = 0;
};

struct Peak {
  double mz = 0.0;
  double intensity = 0.0;
};

struct Precursor {
  int charge = 0;
  double neutral_mass = 0.0;
};

struct RawSpectrum {
  std::string id;
  std::vector<Peak> peaks;
  std::vector<Precursor> precursors;  // one per declared charge, ascending

  ChargeSet charges() const;
  // Neutral mass under the given declared charge; throws InvalidInput otherwise.
  double neutral_mass(int charge) const;
};

class ProcessedSpectrum {
public:
  ProcessedSpectrum() = default;
  // bins[i] holds the intensity of bin i+1. Entries must lie in [0,1].
  ProcessedSpectrum(std::string id, std::vector<double> bins, std::vector<Precursor> precursors,
                    double lambda);

  const std::string& id() const { return id_; }
  int num_bins() const { return static_cast<int>(bins_.size()); }
  double lambda() const { return lambda_; }
  const std::vector<Precursor>& precursors() const { return precursors_; }
  ChargeSet charges() const;
  double neutral_mass(int charge) const;

  // 1-based bin access.
  double intensity(int bin) const { return bins_[static_cast<std::size_t>(bin - 1)]; }
  double log_weight(int bin) const { return log_weights_[static_cast<std::size_t>(bin - 1)]; }

  std::span<const double> bins() const { return bins_; }
  std::span<const double> log_weights() const { return log_weights_; }

private:
  std::string id_;
  std::vector<double> bins_;
  std::vector<double> log_weights_;
  std::vector<Precursor> precursors_;
  double lambda_ = kDefaultLambda;
};

enum class SpectrumFormat { mgf, ms2 };

// Picks the format from the file extension; throws ConfigError when unknown.
SpectrumFormat format_from_path(const std::string& path);

std::vector<RawSpectrum> parse_mgf(std::istream& in, const std::string& source_name,
                                   const WarningSink& warn = warn_stderr);
std::vector<RawSpectrum> parse_ms2(std::istream& in, const std::string& source_name,
                                   const WarningSink& warn = warn_stderr);
std::vector<RawSpectrum> parse_spectra(const std::string& path, SpectrumFormat format,
                                       const WarningSink& warn = warn_stderr);

// Writes BEGIN IONS blocks. PEPMASS is derived from the first precursor.
void write_mgf(std::ostream& out, std::span<const RawSpectrum> spectra);

// Peaks ranked by increasing intensity (ties by increasing m/z) get i/|s|.
// Output keeps the input order. Throws InvalidInput on an empty list.
std::vector<Peak> rank_normalize(std::span<const Peak> peaks);

// Max normalized intensity per bin; bin = clamp(round(mz), 1, B).
std::vector<double> bin_spectrum(std::span<const Peak> normalized, int num_bins = kDefaultBins);

// 1 - l*e^-l + l*e^(-l(1-s)), evaluated so that f(0) == 1 exactly.
double f_lambda(double s, double lambda);
double log_f_lambda(double s, double lambda);

// ln f_lambda of every bin. Throws ConfigError when lambda <= 0.
std::vector<double> weight_transform(std::span<const double> bins, double lambda);

// Rank-normalize, bin and weight. Spectra with no peaks give all-zero bins.
ProcessedSpectrum preprocess(const RawSpectrum& raw, double lambda = kDefaultLambda,
                             int num_bins = kDefaultBins);

// clamp(round(mz), 1, B)
inline int mz_to_bin(double mz, int num_bins) {
  const double r = std::round(mz);
  if (r < 1.0) return 1;
  if (r > static_cast<double>(num_bins)) return num_bins;
  return static_cast<int>(r);
}

}  // namespace didea

#endif
