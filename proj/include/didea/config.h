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

#ifndef DIDEA_CONFIG_H
#define DIDEA_CONFIG_H

#include <cstdint>
#include <string>
#include <vector>

#include "didea/chem.h"
#include "didea/search.h"

namespace didea {

// Everything a pipeline run depends on. Text form is one "key = value" per
// line with kebab-case keys matching the command-line flags; '#' starts a
// comment.
struct RunConfig {
  double delta = 3.0;
  double lambda = kDefaultLambda;
  int shift_max = 37;
  int bins = kDefaultBins;
  Scorer scorer = Scorer::didea;
  ChargeMode charge_mode = ChargeMode::mixture;
  int fixed_charge = 2;
  YChargeRule y_charge_rule = YChargeRule::conserve;
  std::uint64_t decoy_seed = 1;
  unsigned threads = 1;
  int missed_cleavages = 0;
  std::size_t min_length = 1;
  std::size_t max_length = kMaxPeptideLength;
  std::size_t top_k = 1;

  SearchConfig search_config() const;
  ScoringConfig scoring_config() const;
  DigestRules digest_rules() const;
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Keys in a fixed order. Doubles use round-trip precision.
std::string to_text(const RunConfig& cfg);
// Throws ConfigError on unknown keys or unparsable values. Keys not present
// keep the values already in `base`.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// Applies one "key = value" setting.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Lines for the comment header of output files. The thread count is left out
// since it cannot change any result.
std::vector<std::string> config_header(const RunConfig& cfg);

}  // namespace didea

#endif
