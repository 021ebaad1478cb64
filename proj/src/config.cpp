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

#include "didea/config.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "didea/error.h"

namespace didea {

SearchConfig RunConfig::search_config() const {
  SearchConfig s;
  s.scoring = scoring_config();
  s.scorer = scorer;
  s.delta = delta;
  s.top_k = top_k;
  s.threads = threads;
  return s;
}

ScoringConfig RunConfig::scoring_config() const {
  ScoringConfig c;
  c.max_shift = shift_max;
  c.num_bins = bins;
  c.lambda = lambda;
  c.y_charge_rule = y_charge_rule;
  c.charge_mode = charge_mode;
  c.fixed_charge = fixed_charge;
  return c;
}

DigestRules RunConfig::digest_rules() const {
  return {missed_cleavages, min_length, max_length};
}

void RunConfig::validate() const {
  search_config().validate();
  if (missed_cleavages < 0) throw ConfigError("missed cleavages must be non-negative");
  if (min_length < 1 || min_length > max_length || max_length > static_cast<std::size_t>(kMaxPeptideLength))
    throw ConfigError("length bounds must satisfy 1 <= min <= max <= 50");
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("bad value for " + key + ": '" + v + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out))
    throw ConfigError("bad value for " + key + ": '" + v + "'");
  return out;
}

std::vector<std::pair<std::string, std::string>> entries(const RunConfig& c, bool with_threads) {
  std::vector<std::pair<std::string, std::string>> e = {
      {"delta", fmt_double(c.delta)},
      {"lambda", fmt_double(c.lambda)},
      {"shift-max", std::to_string(c.shift_max)},
      {"bins", std::to_string(c.bins)},
      {"scorer", to_string(c.scorer)},
      {"charge-mode", to_string(c.charge_mode)},
      {"fixed-charge", std::to_string(c.fixed_charge)},
      {"y-charge-rule", to_string(c.y_charge_rule)},
      {"decoy-seed", std::to_string(c.decoy_seed)},
      {"missed-cleavages", std::to_string(c.missed_cleavages)},
      {"min-length", std::to_string(c.min_length)},
      {"max-length", std::to_string(c.max_length)},
      {"top-k", std::to_string(c.top_k)},
  };
  if (with_threads) e.emplace_back("threads", std::to_string(c.threads));
  return e;
}

}  // namespace

void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "delta") c.delta = parse_real(key, v);
  else if (key == "lambda") c.lambda = parse_real(key, v);
  else if (key == "shift-max") c.shift_max = parse_integer<int>(key, v);
  else if (key == "bins") c.bins = parse_integer<int>(key, v);
  else if (key == "scorer") c.scorer = parse_scorer(v);
  else if (key == "charge-mode") c.charge_mode = parse_charge_mode(v);
  else if (key == "fixed-charge") c.fixed_charge = parse_integer<int>(key, v);
  else if (key == "y-charge-rule") c.y_charge_rule = parse_y_charge_rule(v);
  else if (key == "decoy-seed") c.decoy_seed = parse_integer<std::uint64_t>(key, v);
  else if (key == "threads") c.threads = parse_integer<unsigned>(key, v);
  else if (key == "missed-cleavages") c.missed_cleavages = parse_integer<int>(key, v);
  else if (key == "min-length") c.min_length = parse_integer<std::size_t>(key, v);
  else if (key == "max-length") c.max_length = parse_integer<std::size_t>(key, v);
  else if (key == "top-k") c.top_k = parse_integer<std::size_t>(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

std::string to_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : entries(cfg, true)) out += k + " = " + v + "\n";
  return out;
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::vector<std::string> config_header(const RunConfig& cfg) {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries(cfg, false)) out.push_back(k + " = " + v);
  return out;
}

}  // namespace didea
