// SPDX-License-Identifier: Apache-2.0
//
// xlwave: near-field / far-field demarcation toolkit for extremely large arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "xlwave/demarcation.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace xlwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Rayleigh distance and its variants", "[reference]")
{
    CHECK_THAT(rayleigh_distance(0.63, 0.01), WithinAbs(79.38, 5e-3));
    CHECK_THAT(rayleigh_distance(1.26, 0.01), WithinRel(4.0 * rayleigh_distance(0.63, 0.01), 1e-15));
    CHECK_THAT(rayleigh_distance(0.63, 0.02), WithinRel(0.5 * rayleigh_distance(0.63, 0.01), 1e-15));
    CHECK_THAT(effective_rayleigh(0.63, 0.01), WithinAbs(29.13, 5e-3));
    CHECK_THAT(effective_rayleigh(0.63, 0.01, 1.0), WithinRel(rayleigh_distance(0.63, 0.01), 1e-15));
    CHECK_THAT(effective_rayleigh(0.63, 0.01, 0.1), WithinAbs(7.94, 5e-3));
    CHECK_THROWS_AS(rayleigh_distance(0.63, 0.0), std::invalid_argument);
}

TEST_CASE("two-array Rayleigh distance", "[reference]")
{
    CHECK_THAT(rayleigh_distance_mimo(0.5, 0.5, 0.01), WithinAbs(200.0, 5e-3));
    CHECK_THAT(rayleigh_distance_mimo(0.5, 0.05, 0.01), WithinAbs(60.50, 5e-3));
    CHECK(rayleigh_distance_mimo(0.63, 0.0, 0.01) == rayleigh_distance(0.63, 0.01));
}

TEST_CASE("largest-eigenvalue distance", "[reference]")
{
    CHECK_THAT(largest_eigenvalue_distance(100, 10, 0.005, 0.005, 0.01), WithinAbs(9.13, 5e-3));
    CHECK_THAT(largest_eigenvalue_distance(100, 100, 0.005, 0.005, 0.01), WithinAbs(31.74, 5e-3));
    CHECK(largest_eigenvalue_distance(100, 100, 0.005, 0.005, 0.01, 1.0 - 1e-9) > 1e3);
    CHECK_THROWS_AS(largest_eigenvalue_distance(100, 100, 0.005, 0.005, 0.01, 1.0), std::invalid_argument);
}

TEST_CASE("point-to-ULA comparison table", "[reference][report]")
{
    const auto rep = comparison_table(SisoComparison{});
    REQUIRE(rep.rows.size() == 5);
    const std::vector<double> expected{79.38, 0.70, 29.13, 7.94, 1.80};
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(format_fixed(rep.rows[i].values[0], 2) == format_fixed(expected[i], 2));
    CHECK(rep.rows[1].provenance == Provenance::external_literal);
    CHECK_FALSE(rep.rows[1].citation.empty());
    for (std::size_t i : {0, 2, 3, 4})
        CHECK(rep.rows[i].provenance == Provenance::computed);

    const auto md = to_markdown(rep);
    CHECK(md.find("| Classical Rayleigh distance | 79.38 |") != std::string::npos);
    CHECK(md.find("Critical distance [lu2021does] | 0.70 |") != std::string::npos);
    CHECK(to_markdown(comparison_table(SisoComparison{})) == md);

    const auto csv = to_csv(rep);
    CHECK(csv.rfind("name,formula_id,column,value,provenance,citation\n", 0) == 0);
    CHECK(csv.find("external_literal,lu2021does") != std::string::npos);
}

TEST_CASE("ULA-to-ULA comparison rows that need no search", "[reference][report]")
{
    MimoComparison p;
    p.m_values = {10};
    p.solver.points_per_decade = 100;
    const auto rep = comparison_table(p, 1);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.columns == std::vector<std::string>{"M=10"});
    CHECK(format_fixed(rep.rows[0].values[0], 2) == "60.50");
    CHECK(format_fixed(rep.rows[1].values[0], 2) == "9.13");
    CHECK_THAT(rep.rows[2].values[0], WithinRel(14.19, 0.02));

    p.m_values.clear();
    CHECK_THROWS_AS(comparison_table(p), std::invalid_argument);
    p.m_values = {1};
    CHECK_THROWS_AS(comparison_table(p), std::invalid_argument);
}

TEST_CASE("Monte Carlo rows append to single-column reports", "[reference][report]")
{
    auto rep = comparison_table(SisoComparison{});
    MonteCarloResult mc;
    mc.mean_threshold = 81.234;
    add_monte_carlo_row(rep, "Equi-power line (LoS, 7 scatterers)", mc);
    CHECK(rep.rows.back().values[0] == 81.234);
    CHECK(to_markdown(rep).find("| Equi-power line (LoS, 7 scatterers) | 81.23 |") != std::string::npos);
}

TEST_CASE("manifests survive a JSON round trip", "[report]")
{
    RunManifest m;
    m.command = "sweep";
    m.argv = {"sweep", "--n", "4"};
    m.params = {{"n", 4}};
    m.seed = 9;
    m.add_output("out.csv", "a,b\n1,2\n");
    const auto back = RunManifest::from_json(nlohmann::json::parse(m.to_json().dump()));
    CHECK(back.command == "sweep");
    CHECK(back.argv == m.argv);
    CHECK(back.seed == 9);
    REQUIRE(back.outputs.size() == 1);
    CHECK(back.outputs[0].fnv1a64 == hex64(fnv1a64("a,b\n1,2\n")));
    CHECK(back.outputs[0].bytes == 8);
    CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
}

TEST_CASE("numbers format to round-trip decimals", "[report]")
{
    for (double v : {0.1, 1.0 / 3.0, 141.91, 6.02e23, -2.5e-300})
        CHECK(parse_double(format_double(v)) == v);
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_fixed(1.805, 2).size() == 4);
    CHECK_THROWS_AS(parse_double("1.0x"), std::invalid_argument);

    CsvTable t({"a", "b"});
    t.add_row({"x,y", "q\"z"});
    CHECK(t.str() == "a,b\n\"x,y\",\"q\"\"z\"\n");
    CHECK_THROWS_AS(t.add_row({"only one"}), std::invalid_argument);
}
