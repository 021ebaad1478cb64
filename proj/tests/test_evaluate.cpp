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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "didea/error.h"
#include "didea/evaluate.h"
#include "didea/rng.h"

using namespace didea;

namespace {

double ks_uniform(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - p[i]));
    d = std::max(d, std::abs(p[i] - static_cast<double>(i) / n));
  }
  return d;
}

// Unmonotonized FDR at each target's own threshold.
double raw_fdr(double c, const std::vector<double>& t, const std::vector<double>& d) {
  const double nd = static_cast<double>(std::count_if(d.begin(), d.end(), [&](double x) { return x >= c; }));
  const double nt = static_cast<double>(std::count_if(t.begin(), t.end(), [&](double x) { return x >= c; }));
  return std::min(1.0, nd / nt);
}

}  // namespace

TEST_CASE("empirical p-values") {
  const std::vector<double> decoys = {1, 2, 3, 4};
  const std::vector<double> targets = {3.5, 5.0, 0.0, 3.0};
  const auto p = empirical_pvalues(targets, decoys);
  CHECK(p[0] == 0.25);
  CHECK(p[1] == 0.0);
  CHECK(p[2] == 1.0);
  CHECK(p[3] == 0.25);  // ties are not counted
  const auto ps = empirical_pvalues(targets, decoys, PValueMode::smoothed);
  CHECK(ps[0] == doctest::Approx(2.0 / 5.0));
  CHECK(ps[1] == doctest::Approx(1.0 / 5.0));
  CHECK_THROWS_AS(empirical_pvalues(targets, std::vector<double>{}), InvalidInput);
  CHECK(empirical_pvalues(std::vector<double>{}, decoys).empty());
}

TEST_CASE("q-values") {
  SUBCASE("fixture") {
    const auto q = qvalues(std::vector<double>{10, 8, 6, 4}, std::vector<double>{9, 5, 3, 1});
    REQUIRE(q.size() == 4);
    CHECK(q[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(q[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(q[3] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("decoys all below targets") {
    for (double v : qvalues(std::vector<double>{10, 11, 12}, std::vector<double>{1, 2}))
      CHECK(v == 0.0);
  }
  SUBCASE("identical multisets") {
    const std::vector<double> xs = {1, 2, 3, 4, 5};
    const auto q = qvalues(xs, xs);
    CHECK(q[0] == 1.0);
  }
  SUBCASE("pi0 scales the estimate") {
    const auto q = qvalues(std::vector<double>{10, 8, 6, 4}, std::vector<double>{9, 5, 3, 1}, 0.5);
    CHECK(q[3] == doctest::Approx(0.25));
    CHECK_THROWS_AS(qvalues(std::vector<double>{1}, std::vector<double>{1}, 0.0), ConfigError);
    CHECK_THROWS_AS(qvalues(std::vector<double>{1}, std::vector<double>{1}, 1.5), ConfigError);
  }
  SUBCASE("random properties") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> t(1 + rng.below(60)), d(1 + rng.below(60));
      for (auto& x : t) x = std::round(rng.normal(1.0, 1.0) * 4.0) / 4.0;  // force ties
      for (auto& x : d) x = std::round(rng.normal(0.0, 1.0) * 4.0) / 4.0;
      const auto q = qvalues(t, d);
      std::vector<double> t2 = t, d2 = d;
      for (auto& x : t2) x = 2.0 * x + 7.0;
      for (auto& x : d2) x = 2.0 * x + 7.0;
      REQUIRE(qvalues(t2, d2) == q);
      for (std::size_t i = 0; i < t.size(); ++i) {
        REQUIRE(q[i] >= 0.0);
        REQUIRE(q[i] <= 1.0);
        REQUIRE(q[i] <= raw_fdr(t[i], t, d) + 1e-15);
        for (std::size_t j = 0; j < t.size(); ++j)
          if (t[i] >= t[j]) REQUIRE(q[i] <= q[j]);
      }
    }
  }
}

TEST_CASE("ranking curve") {
  CHECK(ranking_curve(std::vector<double>{0.0, 0.5}, std::vector<double>{0.05}).size() == 1);
  const auto c = ranking_curve(std::vector<double>{0.0, 0.5}, std::vector<double>{0.05});
  CHECK(c[0].q_threshold == 0.05);
  CHECK(c[0].accepted == 1);
  CHECK(ranking_curve(std::vector<double>{0.0, 0.5}, std::vector<double>{1.0})[0].accepted == 2);
  const auto empty = ranking_curve(std::vector<double>{}, std::vector<double>{0.01, 0.1});
  CHECK(empty.size() == 2);
  CHECK(empty[1].accepted == 0);

  const auto grid = default_curve_grid();
  REQUIRE(grid.size() == 101);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(0.1));

  Rng rng(9);
  std::vector<double> q(500);
  for (auto& x : q) x = rng.uniform();
  const auto curve = ranking_curve(q, grid);
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].accepted >= curve[i - 1].accepted);
}

TEST_CASE("p-values are uniform under the null") {
  Rng rng(2024);
  std::vector<double> t(1000), d(5000);
  for (auto& x : t) x = rng.normal(0.0, 1.0);
  for (auto& x : d) x = rng.normal(0.0, 1.0);
  CHECK(ks_uniform(empirical_pvalues(t, d)) < 0.1);
}

TEST_CASE("evaluate PSM tables") {
  auto psm = [](std::string id, double score, bool decoy) {
    PSM p;
    p.spectrum_id = std::move(id);
    p.peptide = "EAK";
    p.score = score;
    p.is_decoy = decoy;
    p.charge_model = "+2";
    p.candidate_count = 1;
    return p;
  };
  const std::vector<PSM> targets = {psm("a", 10, false), psm("b", 8, false), psm("c", 6, false),
                                    psm("d", 4, false)};
  const std::vector<PSM> decoys = {psm("a", 9, true), psm("b", 5, true), psm("c", 3, true),
                                   psm("d", 1, true)};
  const auto table = evaluate_psms(targets, decoys);
  REQUIRE(table.rows.size() == 4);
  CHECK(table.rows[1].spectrum_id == "b");
  CHECK(table.rows[1].q_value == doctest::Approx(1.0 / 3.0));
  CHECK(table.rows[0].p_value == 0.0);
  CHECK(table.rows[3].p_value == 0.5);
  CHECK_THROWS_AS(evaluate_psms(targets, std::vector<PSM>{}), InvalidInput);

  std::ostringstream rows, curve;
  write_eval_rows(rows, table);
  write_curve(curve, table);
  CHECK(rows.str().rfind("spectrum_id\tscore\tp_value\tq_value\n", 0) == 0);
  CHECK(curve.str().rfind("q_threshold,accepted_count\n", 0) == 0);
}
