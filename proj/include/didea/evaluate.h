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

#ifndef DIDEA_EVALUATE_H
#define DIDEA_EVALUATE_H

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "didea/search.h"

namespace didea {

enum class PValueMode {
  strict,    // #{decoy > v} / n
  smoothed,  // (1 + #{decoy > v}) / (1 + n)
};

// Throws InvalidInput when decoys is empty.
std::vector<double> empirical_pvalues(std::span<const double> targets,
                                      std::span<const double> decoys,
                                      PValueMode mode = PValueMode::strict);

// FDR(c) = min(1, pi0 * #{decoys >= c} / #{targets >= c}) at every target
// score c; q(v) = min over c <= v of FDR(c). Throws InvalidInput on empty input.
std::vector<double> qvalues(std::span<const double> targets, std::span<const double> decoys,
                            double pi0 = 1.0);

struct CurvePoint {
  double q_threshold = 0.0;
  std::size_t accepted = 0;
};

// Count of q-values <= each grid threshold.
std::vector<CurvePoint> ranking_curve(std::span<const double> q_values,
                                      std::span<const double> grid);

// 101 evenly spaced thresholds on [0, 0.1].
std::vector<double> default_curve_grid();

struct EvalRow {
  std::string spectrum_id;
  double score = 0.0;
  double p_value = 0.0;
  double q_value = 0.0;
};

struct EvalTable {
  std::vector<EvalRow> rows;
  std::vector<CurvePoint> curve;
};

struct EvalOptions {
  PValueMode p_value_mode = PValueMode::strict;
  double pi0 = 1.0;
  std::vector<double> grid = default_curve_grid();
};

// Keeps the best-scoring PSM per spectrum on each side, then pools decoy
// scores as the null sample. Target rows keep first-appearance order.
EvalTable evaluate_psms(std::span<const PSM> targets, std::span<const PSM> decoys,
                        const EvalOptions& opts = {});

void write_eval_rows(std::ostream& out, const EvalTable& table,
                     std::span<const std::string> comments = {});
void write_curve(std::ostream& out, const EvalTable& table,
                 std::span<const std::string> comments = {});

}  // namespace didea

#endif
