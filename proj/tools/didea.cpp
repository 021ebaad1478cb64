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

// didea: command-line driver for digestion, search, evaluation, synthetic
// spectra and single-PSM diagnostics.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "didea/chem.h"
#include "didea/config.h"
#include "didea/error.h"
#include "didea/evaluate.h"
#include "didea/scoring.h"
#include "didea/search.h"
#include "didea/spectra.h"
#include "didea/synth.h"

namespace {

using namespace didea;

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitConfig = 4;

// RunConfig flags are captured as raw strings and applied on top of the
// config file, so flags > file > defaults and parsing lives in one place.
class RunConfigFlags {
public:
  void add_to(CLI::App* cmd, std::initializer_list<const char*> keys) {
    cmd->add_option("--config", config_path_, "Config file of 'key = value' lines");
    for (const char* key : keys) {
      auto* opt = cmd->add_option(std::string("--") + key, values_[key], help(key));
      options_.emplace_back(key, opt);
    }
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path_.empty()) cfg = load_config(config_path_, cfg);
    for (const auto& [key, opt] : options_)
      if (opt->count() > 0) set_config_value(cfg, key, values_.at(key));
    cfg.validate();
    return cfg;
  }

private:
  static std::string help(const std::string& key) {
    static const std::map<std::string, std::string> h = {
        {"delta", "Precursor mass tolerance in Da (default 3.0)"},
        {"lambda", "Peak weight parameter (default 0.5)"},
        {"shift-max", "Largest spectrum shift M (default 37)"},
        {"bins", "Number of 1 Da bins (default 2000)"},
        {"scorer", "didea | xcorr"},
        {"charge-mode", "mixture | fixed | max_over_charges"},
        {"fixed-charge", "Charge used by --charge-mode fixed"},
        {"y-charge-rule", "conserve | literal"},
        {"decoy-seed", "Seed of the shuffled decoy proteome"},
        {"threads", "Worker threads for search"},
        {"missed-cleavages", "Allowed missed tryptic cleavages"},
        {"min-length", "Minimum peptide length"},
        {"max-length", "Maximum peptide length"},
        {"top-k", "PSMs reported per spectrum"},
    };
    auto it = h.find(key);
    return it == h.end() ? "" : it->second;
  }

  std::string config_path_;
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  return out;
}

void print_config(std::ostream& os, const RunConfig& cfg) {
  std::istringstream lines(to_text(cfg));
  for (std::string l; std::getline(lines, l);) os << "# " << l << '\n';
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int cmd_digest(const std::string& fasta, const std::string& out_path, bool decoys,
               const RunConfig& cfg) {
  const auto table = ResidueMassTable::standard();
  const auto proteins = read_fasta(fasta);
  auto db = build_database(proteins, table, cfg.digest_rules());
  if (decoys) db = generate_decoys(proteins, cfg.decoy_seed, table, cfg.digest_rules(), db);
  auto out = open_out(out_path);
  for (const auto& line : config_header(cfg)) out << "# " << line << '\n';
  write_peptide_table(out, db);
  std::cerr << db.size() << (decoys ? " decoy" : " target") << " peptides written to " << out_path
            << '\n';
  return 0;
}

int cmd_search(const std::string& spectra_path, const std::string& fasta,
               const std::string& prefix, const RunConfig& cfg) {
  print_config(std::cout, cfg);
  const auto table = ResidueMassTable::standard();
  const auto proteins = read_fasta(fasta);
  const auto target = build_database(proteins, table, cfg.digest_rules());
  const auto decoy = generate_decoys(proteins, cfg.decoy_seed, table, cfg.digest_rules(), target);

  const auto raw = parse_spectra(spectra_path, format_from_path(spectra_path));
  std::vector<ProcessedSpectrum> spectra;
  spectra.reserve(raw.size());
  for (const auto& r : raw) spectra.push_back(preprocess(r, cfg.lambda, cfg.bins));

  const auto res = run_search(spectra, target, decoy, cfg.search_config());
  const auto header = config_header(cfg);
  {
    auto out = open_out(prefix + ".target.tsv");
    write_psms(out, res.target, header);
  }
  {
    auto out = open_out(prefix + ".decoy.tsv");
    write_psms(out, res.decoy, header);
  }
  std::size_t matched = 0;
  for (const auto& v : res.target) matched += !v.empty();
  std::cerr << spectra.size() << " spectra, " << matched << " matched; " << target.size()
            << " target / " << decoy.size() << " decoy peptides\n";
  return 0;
}

std::vector<PSM> load_psms(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open PSM file '" + path + "'");
  return read_psms(in, path);
}

int cmd_evaluate(const std::string& target_path, const std::string& decoy_path,
                 const std::string& prefix, bool smoothed, double pi0) {
  EvalOptions opts;
  opts.p_value_mode = smoothed ? PValueMode::smoothed : PValueMode::strict;
  opts.pi0 = pi0;
  const auto targets = load_psms(target_path);
  const auto decoys = load_psms(decoy_path);
  const auto table = evaluate_psms(targets, decoys, opts);
  const std::vector<std::string> header = {
      "targets = " + target_path, "decoys = " + decoy_path,
      std::string("p-values = ") + (smoothed ? "smoothed" : "strict"), "pi0 = " + fmt(pi0)};
  {
    auto out = open_out(prefix + ".psms.tsv");
    write_eval_rows(out, table, header);
  }
  {
    auto out = open_out(prefix + ".curve.csv");
    write_curve(out, table, header);
  }
  for (const auto& p : table.curve)
    if (p.q_threshold == 0.01)
      std::cerr << p.accepted << " PSMs accepted at q <= 0.01\n";
  return 0;
}

std::vector<Peptide> read_peptide_list(const std::string& path, const ResidueMassTable& table) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open peptide list '" + path + "'");
  std::vector<Peptide> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string seq;
    if (!(ls >> seq) || seq[0] == '#' || seq == "peptide") continue;
    try {
      out.push_back(build_ladders(seq, table));
    } catch (const InvalidInput& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

int cmd_synth(const std::string& peptide_list, const std::string& prefix,
              const SynthParams& params) {
  params.validate();
  const auto table = ResidueMassTable::standard();
  const auto peptides = read_peptide_list(peptide_list, table);
  const auto batch = synthesize_batch(peptides, params);
  const std::vector<std::string> header = {
      "seed = " + std::to_string(params.seed),
      "signal-fraction = " + fmt(params.signal_fraction),
      "noise-peaks = " + std::to_string(params.noise_peaks),
      "jitter = " + fmt(params.mz_jitter_sd),
      "intensity-model = " + to_string(params.intensity_model),
      "charge = " + std::to_string(params.charge),
      "multiply-charged = " + std::string(params.multiply_charged ? "true" : "false"),
      "delta = " + fmt(params.delta)};
  {
    auto out = open_out(prefix + ".mgf");
    for (const auto& h : header) out << "# " << h << '\n';
    write_mgf(out, batch.spectra);
  }
  {
    auto out = open_out(prefix + ".key.tsv");
    for (const auto& h : header) out << "# " << h << '\n';
    write_key(out, batch);
  }
  std::cerr << batch.spectra.size() << " spectra written to " << prefix << ".mgf\n";
  return 0;
}

int cmd_score(const std::string& sequence, const std::string& spectrum_path,
              const std::string& spectrum_id, bool oracle, const RunConfig& cfg) {
  const auto table = ResidueMassTable::standard();
  const auto peptide = build_ladders(sequence, table);
  const auto raw = parse_spectra(spectrum_path, format_from_path(spectrum_path));
  const RawSpectrum* chosen = nullptr;
  for (const auto& r : raw)
    if (spectrum_id.empty() || r.id == spectrum_id) {
      chosen = &r;
      break;
    }
  if (!chosen) throw InvalidInput("spectrum '" + spectrum_id + "' not found in " + spectrum_path);

  const auto spectrum = preprocess(*chosen, cfg.lambda, cfg.bins);
  const auto scfg = cfg.search_config();
  const auto model = resolve_model(spectrum, scfg);
  if (!model) throw ConfigError("spectrum charges are incompatible with the charge mode");

  auto& os = std::cout;
  print_config(os, cfg);
  os << "spectrum\t" << spectrum.id() << "\npeptide\t" << peptide.sequence << "\nmodel\t"
     << model->tag << '\n';
  if (cfg.scorer == Scorer::xcorr) {
    os << "xcorr\t" << fmt(score_candidate(peptide, spectrum, *model, Scorer::xcorr)) << '\n';
    return 0;
  }

  const auto& sc = model->scoring;
  os << "theta\t" << fmt(didea_score(peptide, spectrum, sc)) << '\n';
  std::vector<ShiftProfile> profiles;
  std::vector<std::string> names;
  if (sc.charge_mode == ChargeMode::fixed) {
    profiles.push_back(shift_profile(peptide, spectrum, sc.fixed_charge, sc));
    names.push_back("a");
  } else {
    auto p2 = shift_profile(peptide, spectrum, 2, sc);
    auto p3 = shift_profile(peptide, spectrum, 3, sc);
    if (sc.charge_mode == ChargeMode::mixture) {
      profiles.push_back(mixture_profile(p2, p3));
      names.push_back("a_mixture");
    }
    profiles.push_back(std::move(p2));
    profiles.push_back(std::move(p3));
    names.push_back("a_plus2");
    names.push_back("a_plus3");
    const auto post = charge_posterior(peptide, spectrum, sc);
    os << "charge_posterior\t+2=" << fmt(post.plus2) << "\t+3=" << fmt(post.plus3) << '\n';
  }

  if (oracle) {
    if (peptide.length() > kOracleMaxLength) {
      os << "oracle\tskipped (peptide longer than " << kOracleMaxLength << ")\n";
    } else if (sc.charge_mode == ChargeMode::max_over_charges) {
      const double t2 = brute_force_posterior(peptide, spectrum, ChargeModel::plus2, sc).theta;
      const double t3 = brute_force_posterior(peptide, spectrum, ChargeModel::plus3, sc).theta;
      os << "oracle_theta\t" << fmt(std::max(t2, t3)) << '\n';
    } else {
      const ChargeModel cm = sc.charge_mode == ChargeMode::mixture ? ChargeModel::mixture
                             : sc.fixed_charge == 1                ? ChargeModel::plus1
                             : sc.fixed_charge == 2                ? ChargeModel::plus2
                                                                   : ChargeModel::plus3;
      const auto r = brute_force_posterior(peptide, spectrum, cm, sc);
      os << "oracle_theta\t" << fmt(r.theta) << '\n';
      if (r.charge)
        os << "oracle_charge_posterior\t+2=" << fmt(r.charge->plus2) << "\t+3="
           << fmt(r.charge->plus3) << '\n';
    }
  }

  os << "tau";
  for (const auto& n : names) os << '\t' << n;
  os << '\n';
  for (int tau = -sc.max_shift; tau <= sc.max_shift; ++tau) {
    os << tau;
    for (const auto& p : profiles) os << '\t' << fmt(p.at(tau));
    os << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peptide-spectrum match scoring and target-decoy search"};
  app.require_subcommand(1);

  auto* digest = app.add_subcommand("digest", "Tryptic digest of a FASTA file to a peptide table");
  std::string digest_fasta, digest_out;
  bool digest_decoys = false;
  RunConfigFlags digest_flags;
  digest->add_option("fasta", digest_fasta, "Protein FASTA")->required();
  digest->add_option("-o,--out", digest_out, "Output TSV")->required();
  digest->add_flag("--decoys", digest_decoys, "Write the shuffled decoy database instead");
  digest_flags.add_to(digest, {"missed-cleavages", "min-length", "max-length", "decoy-seed"});

  auto* search = app.add_subcommand("search", "Search spectra against target and decoy databases");
  std::string search_spectra, search_fasta, search_out;
  RunConfigFlags search_flags;
  search->add_option("spectra", search_spectra, "MGF or MS2 file")->required();
  search->add_option("fasta", search_fasta, "Protein FASTA")->required();
  search->add_option("-o,--out", search_out, "Output prefix (<prefix>.target.tsv, <prefix>.decoy.tsv)")
      ->required();
  search_flags.add_to(search, {"delta", "lambda", "shift-max", "bins", "scorer", "charge-mode",
                               "fixed-charge", "y-charge-rule", "decoy-seed", "threads",
                               "missed-cleavages", "min-length", "max-length", "top-k"});

  auto* evaluate = app.add_subcommand("evaluate", "p-values, q-values and ranking curve");
  std::string eval_targets, eval_decoys, eval_out;
  bool eval_smoothed = false;
  double eval_pi0 = 1.0;
  evaluate->add_option("targets", eval_targets, "Target PSM TSV")->required();
  evaluate->add_option("decoys", eval_decoys, "Decoy PSM TSV")->required();
  evaluate->add_option("-o,--out", eval_out, "Output prefix (<prefix>.psms.tsv, <prefix>.curve.csv)")
      ->required();
  evaluate->add_flag("--smoothed-pvalues", eval_smoothed, "Use (1 + exceed) / (1 + n)");
  evaluate->add_option("--pi0", eval_pi0, "Fraction of incorrect targets (default 1)");

  auto* synth = app.add_subcommand("synth", "Synthesize spectra from a peptide list");
  std::string synth_list, synth_out, synth_model = "rank-biased";
  SynthParams sp;
  synth->add_option("peptides", synth_list, "One peptide per line (first column)")->required();
  synth->add_option("-o,--out", synth_out, "Output prefix (<prefix>.mgf, <prefix>.key.tsv)")->required();
  synth->add_option("--seed", sp.seed, "Random seed");
  synth->add_option("--signal-fraction", sp.signal_fraction, "Fraction of b/y ions emitted");
  synth->add_option("--noise-peaks", sp.noise_peaks, "Uniform noise peaks per spectrum");
  synth->add_option("--jitter", sp.mz_jitter_sd, "Gaussian m/z jitter (sd, Da)");
  synth->add_option("--intensity-model", synth_model, "uniform | rank-biased");
  synth->add_option("--charge", sp.charge, "Precursor charge 1, 2 or 3");
  synth->add_flag("--multiply-charged", sp.multiply_charged, "Declare charges {+2,+3}");
  synth->add_option("--delta", sp.delta, "Precursor noise is uniform on (-delta/2, delta/2)");

  auto* score = app.add_subcommand("score", "Score one peptide against one spectrum");
  std::string score_peptide, score_file, score_id;
  bool score_oracle = false;
  RunConfigFlags score_flags;
  score->add_option("--peptide", score_peptide, "Peptide sequence")->required();
  score->add_option("spectra", score_file, "MGF or MS2 file")->required();
  score->add_option("--spectrum-id", score_id, "Spectrum to score (default: first)");
  score->add_flag("--oracle", score_oracle, "Also run the brute-force enumeration");
  score_flags.add_to(score, {"lambda", "shift-max", "bins", "scorer", "charge-mode",
                             "fixed-charge", "y-charge-rule"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*digest) return cmd_digest(digest_fasta, digest_out, digest_decoys, digest_flags.resolve());
    if (*search) return cmd_search(search_spectra, search_fasta, search_out, search_flags.resolve());
    if (*evaluate) return cmd_evaluate(eval_targets, eval_decoys, eval_out, eval_smoothed, eval_pi0);
    if (*synth) {
      sp.intensity_model = parse_intensity_model(synth_model);
      return cmd_synth(synth_list, synth_out, sp);
    }
    if (*score) return cmd_score(score_peptide, score_file, score_id, score_oracle, score_flags.resolve());
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
