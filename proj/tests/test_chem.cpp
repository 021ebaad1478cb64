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

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "didea/chem.h"
#include "didea/error.h"
#include "support.h"

using namespace didea;

namespace {

std::string write_temp(const std::string& name, const std::string& contents) {
  auto path = std::filesystem::temp_directory_path() / ("didea_chem_" + name);
  std::ofstream(path) << contents;
  return path.string();
}

std::vector<std::string> sequences(const PeptideDatabase& db) {
  std::vector<std::string> out;
  for (const auto& p : db.peptides()) out.push_back(p.sequence);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("residue masses are rounded monoisotopic values") {
  const auto table = ResidueMassTable::standard();
  // Rounded from a public monoisotopic residue table.
  const std::map<char, int> expected = {
      {'G', 57},  {'A', 71},  {'S', 87},  {'P', 97},  {'V', 99},  {'T', 101}, {'C', 160},
      {'L', 113}, {'I', 113}, {'N', 114}, {'D', 115}, {'Q', 128}, {'K', 128}, {'E', 129},
      {'M', 131}, {'H', 137}, {'F', 147}, {'R', 156}, {'Y', 163}, {'W', 186}};
  for (auto [letter, mass] : expected) {
    CAPTURE(letter);
    CHECK(residue_mass(letter, table) == mass);
  }
  CHECK(ResidueMassTable::unmodified().mass('C') == 103);
  CHECK(table.static_mods().at('C') == 57);
}

TEST_CASE("unknown residues are rejected") {
  const auto table = ResidueMassTable::standard();
  CHECK_THROWS_AS(table.mass('X'), InvalidInput);
  CHECK_THROWS_AS(table.mass('B'), InvalidInput);
  CHECK_THROWS_AS(table.mass('a'), InvalidInput);
  CHECK_THROWS_AS(build_ladders("EAXM", table), InvalidInput);
  CHECK_THROWS_AS(build_ladders("", table), InvalidInput);
  CHECK_THROWS_AS(build_ladders(std::string(51, 'A'), table), InvalidInput);
}

TEST_CASE("neutral peptide mass adds water") {
  const auto table = ResidueMassTable::standard();
  CHECK(neutral_peptide_mass(build_ladders("G", table)) == 75);
  CHECK(neutral_peptide_mass(build_ladders("EA", table)) == 218);
  CHECK(neutral_peptide_mass(build_ladders("EAM", table)) == 349);
  CHECK_THROWS_AS(neutral_peptide_mass(Peptide{}), InvalidInput);
}

TEST_CASE("prefix and suffix ladders") {
  const auto table = ResidueMassTable::standard();
  const auto eam = build_ladders("EAM", table);
  CHECK(eam.prefix_masses == std::vector<int>{0, 129, 200, 331});
  CHECK(eam.suffix_masses == std::vector<int>{331, 202, 131, 0});

  const auto g = build_ladders("G", table);
  CHECK(g.prefix_masses == std::vector<int>{0, 57});
  CHECK(g.suffix_masses == std::vector<int>{57, 0});
}

TEST_CASE("ladders conserve mass across every cleavage site") {
  const auto table = ResidueMassTable::standard();
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = build_ladders(testing::random_sequence(rng, 1 + rng.below(50)), table);
    const std::size_t n = p.length();
    REQUIRE(p.prefix_masses[0] == 0);
    REQUIRE(p.suffix_masses[n] == 0);
    REQUIRE(p.prefix_masses[n] == p.suffix_masses[0]);
    for (std::size_t t = 0; t <= n; ++t) REQUIRE(p.prefix_masses[t] + p.suffix_masses[t] == p.residue_mass());
  }
}

TEST_CASE("tryptic digest") {
  CHECK(digest("AKRG") == std::vector<std::string>{"AK", "R", "G"});
  CHECK(digest("AKPG") == std::vector<std::string>{"AKPG"});
  CHECK(digest("").empty());
  CHECK(digest("K") == std::vector<std::string>{"K"});
  CHECK(digest("AAK") == std::vector<std::string>{"AAK"});

  SUBCASE("missed cleavages") {
    DigestRules rules;
    rules.missed_cleavages = 1;
    CHECK(digest("AKRG", rules) == std::vector<std::string>{"AK", "AKR", "R", "RG", "G"});
  }
  SUBCASE("length bounds") {
    DigestRules rules;
    rules.min_length = 2;
    rules.max_length = 3;
    CHECK(digest("AKRGGGGK", rules) == std::vector<std::string>{"AK"});
  }
}

TEST_CASE("digest without missed cleavages or length filter tiles the protein") {
  Rng rng(11);
  DigestRules all{0, 1, 100000};
  for (int trial = 0; trial < 200; ++trial) {
    const auto protein = testing::random_sequence(rng, rng.below(300));
    const auto parts = digest(protein, all);
    const std::string joined = std::accumulate(parts.begin(), parts.end(), std::string{});
    REQUIRE(joined == protein);
  }
}

TEST_CASE("FASTA parsing") {
  std::istringstream in(">p1 first\nak rg\n\n>p2\nMK*\n>p3\r\nakpg\r\n");
  std::vector<std::string> warnings;
  const auto proteins = parse_fasta(in, "mem", [&](const std::string& w) { warnings.push_back(w); });
  REQUIRE(proteins.size() == 2);
  CHECK(proteins[0].name == "p1 first");
  CHECK(proteins[0].sequence == "AKRG");
  CHECK(proteins[1].sequence == "AKPG");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("p2") != std::string::npos);

  std::istringstream bad("\n\nACDE\n>p\nAK\n");
  try {
    parse_fasta(bad, "bad.fasta", nullptr);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("bad.fasta:3") != std::string::npos);
  }
}

TEST_CASE("database construction") {
  const auto table = ResidueMassTable::standard();
  SUBCASE("single protein") {
    const auto db = build_database(write_temp("one.fasta", ">x\nAKRG\n"), table, {});
    CHECK(sequences(db) == std::vector<std::string>{"AK", "G", "R"});
    CHECK(db.provenance() == Provenance::target);
  }
  SUBCASE("empty file") {
    CHECK(build_database(write_temp("empty.fasta", ""), table, {}).empty());
  }
  SUBCASE("duplicates across proteins collapse") {
    const auto db = build_database(write_temp("dup.fasta", ">a\nAKRG\n>b\nGGAK\n"), table, {});
    CHECK(sequences(db) == std::vector<std::string>{"AK", "G", "GGAK", "R"});
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(build_database("/nonexistent/x.fasta", table, {}), ParseError);
  }
}

TEST_CASE("mass index window queries match a linear scan") {
  const auto table = ResidueMassTable::standard();
  Rng rng(3);
  std::vector<Protein> proteins;
  for (int i = 0; i < 30; ++i) proteins.push_back({"p", testing::random_sequence(rng, 200)});
  const auto db = build_database(proteins, table, {});
  REQUIRE(db.size() > 100);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = rng.uniform(0.0, 3000.0);
    const double b = a + rng.uniform(0.0, 200.0);
    std::vector<std::string> closed, open;
    for (const auto& p : db.peptides()) {
      if (p.neutral_mass() >= a && p.neutral_mass() <= b) closed.push_back(p.sequence);
      if (p.neutral_mass() > a && p.neutral_mass() < b) open.push_back(p.sequence);
    }
    std::vector<std::string> got_closed, got_open;
    for (const auto& p : db.mass_range_closed(a, b)) got_closed.push_back(p.sequence);
    for (const auto& p : db.mass_range_open(a, b)) got_open.push_back(p.sequence);
    REQUIRE(got_closed == closed);
    REQUIRE(got_open == open);
  }
  // integer endpoints exercise the boundary
  const int m = db.peptides()[db.size() / 2].neutral_mass();
  for (const auto& p : db.mass_range_closed(m, m)) CHECK(p.neutral_mass() == m);
  CHECK(db.mass_range_open(m, m).empty());
}

TEST_CASE("decoy generation") {
  const auto table = ResidueMassTable::standard();
  Rng rng(5);
  std::vector<Protein> proteins;
  for (int i = 0; i < 20; ++i) proteins.push_back({"p" + std::to_string(i), testing::random_sequence(rng, 150)});
  // Low-complexity protein guarantees some shuffled peptides collide with targets.
  proteins.push_back({"lowc", "GGKGGKGGKGGKAAKAAKAAK"});
  const auto target = build_database(proteins, table, {});

  SUBCASE("deterministic per seed") {
    std::ostringstream a, b, c;
    write_peptide_table(a, generate_decoys(proteins, 42, table, {}, target));
    write_peptide_table(b, generate_decoys(proteins, 42, table, {}, target));
    write_peptide_table(c, generate_decoys(proteins, 43, table, {}, target));
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
  }
  SUBCASE("disjoint from targets") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto decoy = generate_decoys(proteins, seed, table, {}, target);
      CHECK(decoy.provenance() == Provenance::decoy);
      CHECK(decoy.decoy_seed() == seed);
      for (const auto& p : decoy.peptides()) REQUIRE_FALSE(target.contains(p.sequence));
    }
  }
  SUBCASE("shuffle preserves composition") {
    const auto shuffled = shuffle_proteome(proteins, 9);
    REQUIRE(shuffled.size() == proteins.size());
    long before = 0, after = 0;
    for (std::size_t i = 0; i < proteins.size(); ++i) {
      CHECK(shuffled[i].sequence.size() == proteins[i].sequence.size());
      auto x = proteins[i].sequence, y = shuffled[i].sequence;
      std::sort(x.begin(), x.end());
      std::sort(y.begin(), y.end());
      CHECK(x == y);
      for (char ch : proteins[i].sequence) before += table.mass(ch);
      for (char ch : shuffled[i].sequence) after += table.mass(ch);
    }
    CHECK(before == after);
  }
}
