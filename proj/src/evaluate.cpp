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

#include "didea/evaluate.h"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "didea/error.h"

namespace didea {

std::vector<double> empirical_pvalues(std::span<const double> targets,
                                      std::span<const double> decoys, PValueMode mode) {
  if (decoys.empty()) throw InvalidInput("p-values need at least one decoy score");
  std::vector<double> sorted(decoys.begin(), decoys.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> out;
  out.reserve(targets.size());
  for (double v : targets) {
    const auto exceed =
        static_cast<double>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), v));
    out.push_back(mode == PValueMode::strict ? exceed / n : (1.0 + exceed) / (1.0 + n));
  }
  return out;
}

std::vector<double> qvalues(std::span<const double> targets, std::span<const double> decoys,
                            double pi0) {
  if (targets.empty()) throw InvalidInput("q-values need at least one target score");
  if (decoys.empty()) throw InvalidInput("q-values need at least one decoy score");
  if (!(pi0 > 0.0 && pi0 <= 1.0)) throw ConfigError("pi0 must lie in (0, 1]");

  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return targets[a] > targets[b]; });
  std::vector<double> dec(decoys.begin(), decoys.end());
  std::sort(dec.begin(), dec.end(), std::greater<>());

  // Raw FDR at each target threshold, walking scores downward.
  std::vector<double> fdr(targets.size());
  std::size_t d = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double c = targets[order[i]];
    std::size_t j = i;
    while (j < order.size() && targets[order[j]] == c) ++j;
    while (d < dec.size() && dec[d] >= c) ++d;
    const double ratio =
        std::min(1.0, pi0 * static_cast<double>(d) / static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) fdr[order[k]] = ratio;
    i = j;
  }

  std::vector<double> q(targets.size());
  double running = 1.0;
  for (std::size_t i = order.size(); i-- > 0;) {
    running = std::min(running, fdr[order[i]]);
    q[order[i]] = running;
  }
  return q;
}

std::vector<CurvePoint> ranking_curve(std::span<const double> q_values,
                                      std::span<const double> grid) {
  std::vector<double> sorted(q_values.begin(), q_values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const auto n = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), t) -
                                            sorted.begin());
    out.push_back({t, n});
  }
  return out;
}

std::vector<double> default_curve_grid() {
  std::vector<double> g(101);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<double>(i) / 1000.0;
  return g;
}

namespace {

// Best PSM per spectrum id, first-appearance order.
std::vector<PSM> best_per_spectrum(std::span<const PSM> psms) {
  std::vector<PSM> out;
  std::unordered_map<std::string, std::size_t> where;
  for (const auto& p : psms) {
    auto [it, inserted] = where.try_emplace(p.spectrum_id, out.size());
    if (inserted) {
      out.push_back(p);
    } else if (p.score > out[it->second].score) {
      out[it->second] = p;
    }
  }
  return out;
}

}  // namespace

EvalTable evaluate_psms(std::span<const PSM> targets, std::span<const PSM> decoys,
                        const EvalOptions& opts) {
  const auto best_t = best_per_spectrum(targets);
  const auto best_d = best_per_spectrum(decoys);
  if (best_d.empty()) throw InvalidInput("no decoy PSMs to estimate the null distribution");
  if (best_t.empty()) throw InvalidInput("no target PSMs to evaluate");

  std::vector<double> ts, ds;
  for (const auto& p : best_t) ts.push_back(p.score);
  for (const auto& p : best_d) ds.push_back(p.score);

  const auto pv = empirical_pvalues(ts, ds, opts.p_value_mode);
  const auto qv = qvalues(ts, ds, opts.pi0);

  EvalTable table;
  for (std::size_t i = 0; i < best_t.size(); ++i)
    table.rows.push_back({best_t[i].spectrum_id, ts[i], pv[i], qv[i]});
  table.curve = ranking_curve(qv, opts.grid);
  return table;
}

void write_eval_rows(std::ostream& out, const EvalTable& table,
                     std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "spectrum_id\tscore\tp_value\tq_value\n";
  char buf[96];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%.6f\t%.6f\t%.6f", r.score, r.p_value, r.q_value);
    out << r.spectrum_id << '\t' << buf << '\n';
  }
}

void write_curve(std::ostream& out, const EvalTable& table, std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "q_threshold,accepted_count\n";
  char buf[64];
  for (const auto& p : table.curve) {
    std::snprintf(buf, sizeof buf, "%.6f,%zu", p.q_threshold, p.accepted);
    out << buf << '\n';
  }
}

}  // namespace didea
