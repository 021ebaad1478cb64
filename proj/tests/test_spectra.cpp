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

#include <cmath>
#include <sstream>

#include "didea/error.h"
#include "didea/spectra.h"
#include "support.h"

using namespace didea;

namespace {

std::vector<std::string> warnings;
void collect(const std::string& w) { warnings.push_back(w); }

}  // namespace

TEST_CASE("MGF precursor neutral mass") {
  std::istringstream in(
      "BEGIN IONS\nTITLE=s1\nPEPMASS=500.0\nCHARGE=2+\n100.0 10\n200.5 20\nEND IONS\n");
  const auto spectra = parse_mgf(in, "mem");
  REQUIRE(spectra.size() == 1);
  CHECK(spectra[0].id == "s1");
  CHECK(spectra[0].charges() == ChargeSet{2});
  CHECK(spectra[0].neutral_mass(2) == doctest::Approx(997.98544).epsilon(1e-12));
  REQUIRE(spectra[0].peaks.size() == 2);
  CHECK(spectra[0].peaks[1].mz == 200.5);
}

TEST_CASE("MGF charge sets keep one neutral mass per charge") {
  std::istringstream in("BEGIN IONS\nPEPMASS=400.0 1234.5\nCHARGE=2+ and 3+\n150 1\nEND IONS\n");
  const auto s = parse_mgf(in, "mem");
  REQUIRE(s.size() == 1);
  CHECK(s[0].id == "scan_1");
  CHECK(s[0].charges() == ChargeSet{2, 3});
  CHECK(s[0].neutral_mass(2) == doctest::Approx(2 * 400.0 - 2 * 1.00728));
  CHECK(s[0].neutral_mass(3) == doctest::Approx(3 * 400.0 - 3 * 1.00728));
}

TEST_CASE("MS2 Z lines form the charge set") {
  std::istringstream in(
      "H\tCreationDate\tnow\nS\t7\t7\t450.5\nI\tRTime\t1.0\nZ\t2\t900.0\nZ\t3\t1349.5\n"
      "120.1 5\n130.2 6\nS\t8\t8\t300\nZ\t1\t300.0\n99 1\n");
  const auto s = parse_ms2(in, "mem");
  REQUIRE(s.size() == 2);
  CHECK(s[0].id == "7");
  CHECK(s[0].charges() == ChargeSet{2, 3});
  CHECK(s[0].neutral_mass(2) == doctest::Approx(900.0 - 1.00728));
  CHECK(s[0].neutral_mass(3) == doctest::Approx(1349.5 - 1.00728));
  CHECK(s[0].peaks.size() == 2);
  CHECK(s[1].charges() == ChargeSet{1});
}

TEST_CASE("empty spectrum files give no spectra") {
  std::istringstream a(""), b("");
  CHECK(parse_mgf(a, "mem").empty());
  CHECK(parse_ms2(b, "mem").empty());
}

TEST_CASE("records without a charge are skipped with a warning") {
  warnings.clear();
  std::istringstream in(
      "BEGIN IONS\nTITLE=nocharge\nPEPMASS=500\n100 1\nEND IONS\n"
      "BEGIN IONS\nTITLE=ok\nPEPMASS=500\nCHARGE=1+\n100 1\nEND IONS\n"
      "BEGIN IONS\nTITLE=toohigh\nPEPMASS=500\nCHARGE=4+\n100 1\nEND IONS\n");
  const auto s = parse_mgf(in, "mem", collect);
  REQUIRE(s.size() == 1);
  CHECK(s[0].id == "ok");
  REQUIRE(warnings.size() == 2);
  CHECK(warnings[0].find("nocharge") != std::string::npos);
}

TEST_CASE("malformed records are parse errors naming the scan") {
  std::istringstream bad_peak("BEGIN IONS\nTITLE=broken\nPEPMASS=500\nCHARGE=2+\n100 abc\nEND IONS\n");
  try {
    parse_mgf(bad_peak, "f.mgf");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("broken") != std::string::npos);
    CHECK(msg.find("f.mgf:5") != std::string::npos);
  }
  std::istringstream no_end("BEGIN IONS\nPEPMASS=500\nCHARGE=2+\n");
  CHECK_THROWS_AS(parse_mgf(no_end, "f.mgf"), ParseError);
  std::istringstream no_mass("BEGIN IONS\nCHARGE=2+\nEND IONS\n");
  CHECK_THROWS_AS(parse_mgf(no_mass, "f.mgf"), ParseError);
  std::istringstream ms2("S 1 1 100\nZ two 100\n");
  CHECK_THROWS_AS(parse_ms2(ms2, "f.ms2"), ParseError);
}

TEST_CASE("MGF written by the engine parses back") {
  Rng rng(17);
  std::vector<RawSpectrum> spectra;
  for (int i = 0; i < 20; ++i) {
    RawSpectrum s;
    s.id = "s" + std::to_string(i);
    for (int k = 0; k < 30; ++k) s.peaks.push_back({rng.uniform(1.0, 2000.0), rng.uniform(0.0, 1e4)});
    const double neutral = rng.uniform(500.0, 4000.0);
    if (i % 2) {
      const double pepmass = (neutral + 2 * kProtonMass) / 2;
      for (int z : {2, 3}) s.precursors.push_back({z, z * pepmass - z * kProtonMass});
    } else {
      s.precursors.push_back({1 + i % 3, neutral});
    }
    spectra.push_back(s);
  }
  std::stringstream io;
  write_mgf(io, spectra);
  const auto back = parse_mgf(io, "mem");
  REQUIRE(back.size() == spectra.size());
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    CHECK(back[i].id == spectra[i].id);
    CHECK(back[i].charges() == spectra[i].charges());
    for (const auto& p : spectra[i].precursors)
      CHECK(back[i].neutral_mass(p.charge) == doctest::Approx(p.neutral_mass).epsilon(1e-8));
    REQUIRE(back[i].peaks.size() == spectra[i].peaks.size());
    for (std::size_t k = 0; k < back[i].peaks.size(); ++k)
      CHECK(back[i].peaks[k].mz == doctest::Approx(spectra[i].peaks[k].mz).epsilon(1e-6));
  }
}

TEST_CASE("rank normalization") {
  SUBCASE("ranks by intensity") {
    const std::vector<Peak> peaks = {{100, 50}, {200, 10}, {300, 70}};
    const auto r = rank_normalize(peaks);
    CHECK(r[0].intensity == 2.0 / 3.0);
    CHECK(r[1].intensity == 1.0 / 3.0);
    CHECK(r[2].intensity == 1.0);
    CHECK(r[0].mz == 100);
  }
  SUBCASE("single peak") {
    const std::vector<Peak> peaks = {{123.4, 9}};
    CHECK(rank_normalize(peaks)[0].intensity == 1.0);
  }
  SUBCASE("ties broken by increasing m/z") {
    const std::vector<Peak> peaks = {{200, 5}, {100, 5}};
    const auto r = rank_normalize(peaks);
    CHECK(r[1].intensity == 0.5);
    CHECK(r[0].intensity == 1.0);
  }
  SUBCASE("empty list rejected") {
    CHECK_THROWS_AS(rank_normalize(std::vector<Peak>{}), InvalidInput);
  }
}

TEST_CASE("rank normalization ignores intensity scale") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Peak> peaks;
    for (int k = 0; k < 100; ++k) peaks.push_back({rng.uniform(1, 2000), std::floor(rng.uniform(0, 20))});
    const double c = rng.uniform(1e-3, 1e3);
    auto scaled = peaks;
    for (auto& p : scaled) p.intensity *= c;
    const auto a = rank_normalize(peaks), b = rank_normalize(scaled);
    for (std::size_t k = 0; k < a.size(); ++k) REQUIRE(a[k].intensity == b[k].intensity);
  }
}

TEST_CASE("binning") {
  const std::vector<Peak> peaks = {{100.2, 0.4}, {99.6, 0.9}, {2500.0, 0.3}, {0.2, 0.1}};
  const auto bins = bin_spectrum(peaks, 2000);
  REQUIRE(bins.size() == 2000);
  CHECK(bins[100 - 1] == 0.9);
  CHECK(bins[2000 - 1] == 0.3);
  CHECK(bins[1 - 1] == 0.1);
  CHECK(bins[500 - 1] == 0.0);
  CHECK(mz_to_bin(100.2, 2000) == 100);
  CHECK(mz_to_bin(100.5, 2000) == 101);
}

TEST_CASE("re-binning bin centers reproduces the bins") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = testing::random_spectrum(rng, ChargeSet{2}, 200, 2100.0);
    std::vector<Peak> centers;
    for (int i = 1; i <= s.num_bins(); ++i)
      if (s.intensity(i) > 0) centers.push_back({static_cast<double>(i), s.intensity(i)});
    const auto again = bin_spectrum(centers, s.num_bins());
    REQUIRE(std::equal(again.begin(), again.end(), s.bins().begin()));
  }
}

TEST_CASE("peak weight function") {
  CHECK(f_lambda(0.0, 0.5) == 1.0);
  CHECK(log_f_lambda(0.0, 0.5) == 0.0);
  CHECK(f_lambda(1.0, 0.5) == doctest::Approx(1.196735).epsilon(1e-6));
  CHECK(f_lambda(0.5, 0.5) == doctest::Approx(1.086135).epsilon(1e-6));

  // Written-out form of the weight, evaluated independently.
  for (double lam : {0.1, 0.5, 1.0, 3.0})
    for (int i = 0; i <= 100; ++i) {
      const double s = i / 100.0;
      const double literal = 1.0 - lam * std::exp(-lam) + lam * std::exp(-lam * (1.0 - s));
      REQUIRE(f_lambda(s, lam) == doctest::Approx(literal).epsilon(1e-14));
      REQUIRE(log_f_lambda(s, lam) == doctest::Approx(std::log(literal)).epsilon(1e-12));
    }

  double prev = f_lambda(0.0, 0.5);
  for (int i = 1; i <= 1000; ++i) {
    const double cur = f_lambda(i / 1000.0, 0.5);
    REQUIRE(cur > prev);
    prev = cur;
  }
}

TEST_CASE("weight transform") {
  const std::vector<double> bins = {0.0, 0.25, 1.0, 0.0};
  const auto lw = weight_transform(bins, 0.5);
  CHECK(lw[0] == 0.0);
  CHECK(lw[3] == 0.0);
  CHECK(lw[1] > 0.0);
  CHECK(lw[2] == doctest::Approx(std::log(1.196735)).epsilon(1e-6));
  CHECK_THROWS_AS(weight_transform(bins, 0.0), ConfigError);
  CHECK_THROWS_AS(weight_transform(bins, -1.0), ConfigError);
}

TEST_CASE("preprocessing invariants") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = testing::random_spectrum(rng, ChargeSet{2, 3}, 1 + static_cast<int>(rng.below(400)), 2500.0);
    double mx = 0.0;
    for (int i = 1; i <= s.num_bins(); ++i) {
      const double v = s.intensity(i);
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
      REQUIRE(s.log_weight(i) >= 0.0);
      REQUIRE((s.log_weight(i) == 0.0) == (v == 0.0));
      mx = std::max(mx, v);
    }
    CHECK(mx == 1.0);
  }
  RawSpectrum empty;
  empty.precursors = {{2, 1000.0}};
  const auto e = preprocess(empty);
  CHECK(e.num_bins() == 2000);
  for (double v : e.bins()) REQUIRE(v == 0.0);
}

TEST_CASE("spectrum format from extension") {
  CHECK(format_from_path("a/b.mgf") == SpectrumFormat::mgf);
  CHECK(format_from_path("x.MS2") == SpectrumFormat::ms2);
  CHECK_THROWS_AS(format_from_path("x.mzML"), ConfigError);
}
