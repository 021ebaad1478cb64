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

#include "didea/spectra.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "didea/error.h"

namespace didea {

ChargeSet::ChargeSet(std::initializer_list<int> charges) {
  for (int c : charges) insert(c);
}

void ChargeSet::insert(int charge) {
  if (charge < 1 || charge > 3) throw InvalidInput("unsupported charge " + std::to_string(charge));
  bits_ = static_cast<std::uint8_t>(bits_ | (1u << charge));
}

std::size_t ChargeSet::size() const {
  return static_cast<std::size_t>(contains(1)) + contains(2) + contains(3);
}

std::vector<int> ChargeSet::charges() const {
  std::vector<int> out;
  for (int c = 1; c <= 3; ++c)
    if (contains(c)) out.push_back(c);
  return out;
}

bool ChargeSet::is_supported() const {
  return *this == ChargeSet{1} || *this == ChargeSet{2} || *this == ChargeSet{3} ||
         *this == ChargeSet{2, 3};
}

namespace {

ChargeSet charges_of(const std::vector<Precursor>& precursors) {
  ChargeSet cs;
  for (const auto& p : precursors) cs.insert(p.charge);
  return cs;
}

double neutral_mass_of(const std::vector<Precursor>& precursors, int charge) {
  for (const auto& p : precursors)
    if (p.charge == charge) return p.neutral_mass;
  throw InvalidInput("spectrum has no precursor at charge " + std::to_string(charge));
}

}  // namespace

ChargeSet RawSpectrum::charges() const { return charges_of(precursors); }
double RawSpectrum::neutral_mass(int charge) const { return neutral_mass_of(precursors, charge); }

ProcessedSpectrum::ProcessedSpectrum(std::string id, std::vector<double> bins,
                                     std::vector<Precursor> precursors, double lambda)
    : id_(std::move(id)),
      bins_(std::move(bins)),
      log_weights_(weight_transform(bins_, lambda)),
      precursors_(std::move(precursors)),
      lambda_(lambda) {
  if (bins_.empty()) throw InvalidInput("processed spectrum needs at least one bin");
}

ChargeSet ProcessedSpectrum::charges() const { return charges_of(precursors_); }
double ProcessedSpectrum::neutral_mass(int charge) const {
  return neutral_mass_of(precursors_, charge);
}

SpectrumFormat format_from_path(const std::string& path) {
  auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == "mgf") return SpectrumFormat::mgf;
  if (ext == "ms2") return SpectrumFormat::ms2;
  throw ConfigError("cannot infer spectrum format of '" + path + "' (expected .mgf or .ms2)");
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(std::string_view text, double& out) {
  std::string s = trim(text);
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

// "<mz> <intensity>" with optional trailing columns.
bool parse_peak(const std::string& line, Peak& peak) {
  std::istringstream ls(line);
  std::string a, b;
  if (!(ls >> a >> b)) return false;
  return parse_double(a, peak.mz) && parse_double(b, peak.intensity) && peak.mz > 0.0 &&
         peak.intensity >= 0.0;
}

// "2+", "3", "2+ and 3+", "2+,3+".
bool parse_charge_list(std::string text, std::vector<int>& out) {
  for (std::size_t pos; (pos = text.find(" and ")) != std::string::npos;)
    text.replace(pos, 5, ",");
  std::istringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    int sign = 1;
    if (tok.back() == '+') tok.pop_back();
    else if (tok.back() == '-') {
      tok.pop_back();
      sign = -1;
    }
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) return false;
    out.push_back(sign * std::stoi(tok));
  }
  return !out.empty();
}

std::string where(const std::string& source, std::size_t line, const std::string& scan) {
  return source + ":" + std::to_string(line) + ": scan '" + scan + "': ";
}

// Shared finishing step: validates the charge set and orders precursors.
bool finish_record(RawSpectrum& s, const std::string& source, const WarningSink& warn) {
  if (s.precursors.empty()) {
    if (warn) warn(source + ": scan '" + s.id + "' has no charge; skipped");
    return false;
  }
  std::sort(s.precursors.begin(), s.precursors.end(),
            [](const Precursor& a, const Precursor& b) { return a.charge < b.charge; });
  for (const auto& p : s.precursors) {
    if (p.charge < 1 || p.charge > 3) {
      if (warn)
        warn(source + ": scan '" + s.id + "' has unsupported charge " + std::to_string(p.charge) +
             "; skipped");
      return false;
    }
  }
  ChargeSet cs;
  for (const auto& p : s.precursors) cs.insert(p.charge);
  if (cs.size() != s.precursors.size() || !cs.is_supported()) {
    if (warn) warn(source + ": scan '" + s.id + "' has an unsupported charge set; skipped");
    return false;
  }
  return true;
}

}  // namespace

std::vector<RawSpectrum> parse_mgf(std::istream& in, const std::string& source,
                                   const WarningSink& warn) {
  std::vector<RawSpectrum> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t record = 0;
  bool inside = false;
  RawSpectrum cur;
  double pepmass = 0.0;
  bool have_pepmass = false;
  std::vector<int> charges;
  std::size_t begin_line = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';' || t[0] == '!') continue;
    if (!inside) {
      if (t == "BEGIN IONS") {
        inside = true;
        ++record;
        cur = RawSpectrum{};
        cur.id = "scan_" + std::to_string(record);
        have_pepmass = false;
        charges.clear();
        begin_line = line_no;
      }
      // Global parameters outside blocks are ignored.
      continue;
    }
    if (t == "END IONS") {
      inside = false;
      if (!have_pepmass) throw ParseError(where(source, begin_line, cur.id) + "missing PEPMASS");
      for (int z : charges) cur.precursors.push_back({z, z * pepmass - z * kProtonMass});
      if (finish_record(cur, source, warn)) out.push_back(std::move(cur));
      continue;
    }
    if (t == "BEGIN IONS")
      throw ParseError(where(source, line_no, cur.id) + "nested BEGIN IONS");
    if (auto eq = t.find('='); eq != std::string::npos && std::isalpha(static_cast<unsigned char>(t[0]))) {
      const std::string key = t.substr(0, eq);
      const std::string value = t.substr(eq + 1);
      if (key == "TITLE") {
        cur.id = trim(value);
      } else if (key == "PEPMASS") {
        std::istringstream vs(value);
        std::string first;
        vs >> first;
        if (!parse_double(first, pepmass) || pepmass <= 0.0)
          throw ParseError(where(source, line_no, cur.id) + "bad PEPMASS '" + value + "'");
        have_pepmass = true;
      } else if (key == "CHARGE") {
        if (!parse_charge_list(value, charges))
          throw ParseError(where(source, line_no, cur.id) + "bad CHARGE '" + value + "'");
      }
      continue;
    }
    Peak peak;
    if (!parse_peak(t, peak))
      throw ParseError(where(source, line_no, cur.id) + "malformed peak line '" + t + "'");
    cur.peaks.push_back(peak);
  }
  if (inside) throw ParseError(where(source, begin_line, cur.id) + "missing END IONS");
  return out;
}

std::vector<RawSpectrum> parse_ms2(std::istream& in, const std::string& source,
                                   const WarningSink& warn) {
  std::vector<RawSpectrum> out;
  std::string line;
  std::size_t line_no = 0;
  bool inside = false;
  RawSpectrum cur;

  auto flush = [&] {
    if (inside && finish_record(cur, source, warn)) out.push_back(std::move(cur));
    cur = RawSpectrum{};
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream ls(t);
    switch (t[0]) {
      case 'H':
      case 'I':
      case 'D':
        continue;
      case 'S': {
        flush();
        inside = true;
        std::string tag, first;
        ls >> tag >> first;
        if (first.empty()) throw ParseError(source + ":" + std::to_string(line_no) + ": bad S line");
        cur.id = first;
        continue;
      }
      case 'Z': {
        if (!inside) throw ParseError(source + ":" + std::to_string(line_no) + ": Z line before S line");
        std::string tag, z_text, mh_text;
        ls >> tag >> z_text >> mh_text;
        double z = 0.0, mh = 0.0;
        if (!parse_double(z_text, z) || !parse_double(mh_text, mh) || z != std::floor(z))
          throw ParseError(where(source, line_no, cur.id) + "bad Z line '" + t + "'");
        cur.precursors.push_back({static_cast<int>(z), mh - kProtonMass});
        continue;
      }
      default:
        break;
    }
    if (!inside) throw ParseError(source + ":" + std::to_string(line_no) + ": peak before S line");
    Peak peak;
    if (!parse_peak(t, peak))
      throw ParseError(where(source, line_no, cur.id) + "malformed peak line '" + t + "'");
    cur.peaks.push_back(peak);
  }
  flush();
  return out;
}

std::vector<RawSpectrum> parse_spectra(const std::string& path, SpectrumFormat format,
                                       const WarningSink& warn) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spectrum file '" + path + "'");
  return format == SpectrumFormat::mgf ? parse_mgf(in, path, warn) : parse_ms2(in, path, warn);
}

void write_mgf(std::ostream& out, std::span<const RawSpectrum> spectra) {
  char buf[64];
  for (const auto& s : spectra) {
    if (s.precursors.empty()) throw InvalidInput("spectrum '" + s.id + "' has no precursor");
    const auto& first = s.precursors.front();
    const double pepmass = (first.neutral_mass + first.charge * kProtonMass) / first.charge;
    out << "BEGIN IONS\nTITLE=" << s.id << '\n';
    std::snprintf(buf, sizeof buf, "%.6f", pepmass);
    out << "PEPMASS=" << buf << "\nCHARGE=";
    for (std::size_t i = 0; i < s.precursors.size(); ++i)
      out << (i ? " and " : "") << s.precursors[i].charge << '+';
    out << '\n';
    for (const auto& p : s.peaks) {
      std::snprintf(buf, sizeof buf, "%.6f %.6f", p.mz, p.intensity);
      out << buf << '\n';
    }
    out << "END IONS\n";
  }
}

std::vector<Peak> rank_normalize(std::span<const Peak> peaks) {
  if (peaks.empty()) throw InvalidInput("rank normalization of an empty peak list");
  std::vector<std::size_t> order(peaks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (peaks[a].intensity != peaks[b].intensity) return peaks[a].intensity < peaks[b].intensity;
    return peaks[a].mz < peaks[b].mz;
  });
  const double n = static_cast<double>(peaks.size());
  std::vector<Peak> out(peaks.begin(), peaks.end());
  for (std::size_t r = 0; r < order.size(); ++r)
    out[order[r]].intensity = static_cast<double>(r + 1) / n;
  return out;
}

std::vector<double> bin_spectrum(std::span<const Peak> normalized, int num_bins) {
  if (num_bins < 1) throw ConfigError("bin count must be positive");
  std::vector<double> bins(static_cast<std::size_t>(num_bins), 0.0);
  for (const auto& p : normalized) {
    auto& b = bins[static_cast<std::size_t>(mz_to_bin(p.mz, num_bins) - 1)];
    b = std::max(b, p.intensity);
  }
  return bins;
}

double f_lambda(double s, double lambda) {
  return 1.0 + lambda * (std::exp(-lambda * (1.0 - s)) - std::exp(-lambda));
}

double log_f_lambda(double s, double lambda) {
  return std::log1p(lambda * (std::exp(-lambda * (1.0 - s)) - std::exp(-lambda)));
}

std::vector<double> weight_transform(std::span<const double> bins, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ConfigError("lambda must be positive (got " + std::to_string(lambda) + ")");
  std::vector<double> out(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const double s = bins[i];
    if (!(s >= 0.0 && s <= 1.0)) throw InvalidInput("bin intensity outside [0,1]");
    out[i] = log_f_lambda(s, lambda);
  }
  return out;
}

ProcessedSpectrum preprocess(const RawSpectrum& raw, double lambda, int num_bins) {
  if (num_bins < 1) throw ConfigError("bin count must be positive");
  std::vector<double> bins = raw.peaks.empty()
                                 ? std::vector<double>(static_cast<std::size_t>(num_bins), 0.0)
                                 : bin_spectrum(rank_normalize(raw.peaks), num_bins);
  return ProcessedSpectrum(raw.id, std::move(bins), raw.precursors, lambda);
}

}  // namespace didea
