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

#include "didea/search.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "didea/error.h"

namespace didea {

std::string to_string(Scorer s) { return s == Scorer::didea ? "didea" : "xcorr"; }

Scorer parse_scorer(const std::string& s) {
  if (s == "didea") return Scorer::didea;
  if (s == "xcorr") return Scorer::xcorr;
  throw ConfigError("unknown scorer '" + s + "'");
}

void SearchConfig::validate() const {
  scoring.validate();
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be positive");
  if (top_k < 1) throw ConfigError("top-k must be at least 1");
  if (threads < 1) throw ConfigError("thread count must be at least 1");
}

std::vector<const Peptide*> select_candidates(const PeptideDatabase& db, double neutral_mass,
                                              double delta) {
  std::vector<const Peptide*> out;
  for (const auto& p : db.mass_range_open(neutral_mass - delta, neutral_mass + delta)) {
    // The index window is open; recheck the exact predicate on the difference.
    if (p.length() < 2 || !(std::abs(p.neutral_mass() - neutral_mass) < delta)) continue;
    out.push_back(&p);
  }
  return out;
}

std::optional<ResolvedModel> resolve_model(const ProcessedSpectrum& spectrum,
                                           const SearchConfig& cfg) {
  const ChargeSet cs = spectrum.charges();
  ResolvedModel m;
  m.scoring = cfg.scoring;
  if (cfg.scoring.charge_mode == ChargeMode::fixed) {
    if (!cs.contains(cfg.scoring.fixed_charge)) return std::nullopt;
    m.window_charges = {cfg.scoring.fixed_charge};
    m.tag = "+" + std::to_string(cfg.scoring.fixed_charge);
    return m;
  }
  if (cs.size() == 1) {
    m.scoring.charge_mode = ChargeMode::fixed;
    m.scoring.fixed_charge = cs.charges().front();
    m.window_charges = cs.charges();
    m.tag = "+" + std::to_string(m.scoring.fixed_charge);
    return m;
  }
  if (!cs.contains(2) || !cs.contains(3)) return std::nullopt;
  m.window_charges = {2, 3};
  m.tag = to_string(cfg.scoring.charge_mode);
  return m;
}

std::vector<const Peptide*> spectrum_candidates(const ProcessedSpectrum& spectrum,
                                                const PeptideDatabase& db,
                                                const ResolvedModel& model, double delta) {
  std::vector<const Peptide*> out;
  for (int z : model.window_charges) {
    auto part = select_candidates(db, spectrum.neutral_mass(z), delta);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end(),
            [](const Peptide* a, const Peptide* b) { return a->sequence < b->sequence; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double score_candidate(const Peptide& peptide, const ProcessedSpectrum& spectrum,
                       const ResolvedModel& model, Scorer scorer) {
  return scorer == Scorer::didea ? didea_score(peptide, spectrum, model.scoring)
                                 : xcorr_score(peptide, spectrum, model.scoring);
}

namespace {

void check_preprocessing(const ProcessedSpectrum& s, const ScoringConfig& cfg) {
  if (s.lambda() != cfg.lambda)
    throw ConfigError("spectrum '" + s.id() + "' was preprocessed with lambda " +
                      std::to_string(s.lambda()) + " but scoring uses " +
                      std::to_string(cfg.lambda));
  if (s.num_bins() != cfg.num_bins)
    throw ConfigError("spectrum '" + s.id() + "' has " + std::to_string(s.num_bins()) +
                      " bins but scoring uses " + std::to_string(cfg.num_bins));
}

}  // namespace

std::vector<PSM> search_spectrum_top(const ProcessedSpectrum& spectrum, const PeptideDatabase& db,
                                     const SearchConfig& cfg, std::size_t k) {
  check_preprocessing(spectrum, cfg.scoring);
  const auto model = resolve_model(spectrum, cfg);
  if (!model) return {};
  const auto candidates = spectrum_candidates(spectrum, db, *model, cfg.delta);
  if (candidates.empty()) return {};

  std::vector<PSM> scored;
  scored.reserve(candidates.size());
  for (const Peptide* p : candidates) {
    PSM psm;
    psm.spectrum_id = spectrum.id();
    psm.peptide = p->sequence;
    psm.score = score_candidate(*p, spectrum, *model, cfg.scorer);
    psm.scorer = cfg.scorer;
    psm.charge_model = model->tag;
    psm.is_decoy = db.provenance() == Provenance::decoy;
    psm.candidate_count = candidates.size();
    scored.push_back(std::move(psm));
  }
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                    [](const PSM& a, const PSM& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.peptide < b.peptide;
                    });
  scored.resize(keep);
  return scored;
}

std::optional<PSM> search_spectrum(const ProcessedSpectrum& spectrum, const PeptideDatabase& db,
                                   const SearchConfig& cfg) {
  auto top = search_spectrum_top(spectrum, db, cfg, 1);
  if (top.empty()) return std::nullopt;
  return std::move(top.front());
}

SearchResults run_search(std::span<const ProcessedSpectrum> spectra, const PeptideDatabase& target,
                         const PeptideDatabase& decoy, const SearchConfig& cfg) {
  cfg.validate();
  for (const auto& s : spectra) check_preprocessing(s, cfg.scoring);

  SearchResults res;
  res.target.resize(spectra.size());
  res.decoy.resize(spectra.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i; !failed && (i = next.fetch_add(1)) < spectra.size();) {
      try {
        res.target[i] = search_spectrum_top(spectra[i], target, cfg, cfg.top_k);
        res.decoy[i] = search_spectrum_top(spectra[i], decoy, cfg, cfg.top_k);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(cfg.threads, std::max<std::size_t>(spectra.size(), 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return res;
}

void write_psms(std::ostream& out, std::span<const std::vector<PSM>> psms,
                std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "spectrum_id\tpeptide\tscore\tscorer\tcharge_model\tis_decoy\tcandidate_count\n";
  char buf[64];
  for (const auto& per_spectrum : psms)
    for (const auto& p : per_spectrum) {
      std::snprintf(buf, sizeof buf, "%.6f", p.score);
      out << p.spectrum_id << '\t' << p.peptide << '\t' << buf << '\t' << to_string(p.scorer)
          << '\t' << p.charge_model << '\t' << (p.is_decoy ? 1 : 0) << '\t' << p.candidate_count
          << '\n';
    }
}

std::vector<PSM> read_psms(std::istream& in, const std::string& source) {
  std::vector<PSM> out;
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;
      if (line.rfind("spectrum_id\t", 0) == 0) continue;
    }
    std::vector<std::string> cols;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, '\t');) cols.push_back(c);
    auto fail = [&](const std::string& why) {
      return ParseError(source + ":" + std::to_string(line_no) + ": " + why);
    };
    if (cols.size() != 7) throw fail("expected 7 tab-separated columns");
    PSM p;
    p.spectrum_id = cols[0];
    p.peptide = cols[1];
    char* end = nullptr;
    p.score = std::strtod(cols[2].c_str(), &end);
    if (end != cols[2].c_str() + cols[2].size() || !std::isfinite(p.score))
      throw fail("bad score '" + cols[2] + "'");
    try {
      p.scorer = parse_scorer(cols[3]);
    } catch (const ConfigError& e) {
      throw fail(e.what());
    }
    p.charge_model = cols[4];
    if (cols[5] != "0" && cols[5] != "1") throw fail("bad is_decoy '" + cols[5] + "'");
    p.is_decoy = cols[5] == "1";
    try {
      p.candidate_count = std::stoul(cols[6]);
    } catch (...) {
      throw fail("bad candidate_count '" + cols[6] + "'");
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace didea
