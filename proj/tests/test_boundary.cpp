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

#include "xlwave/boundary.hpp"

#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <cstring>

using namespace xlwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("monotone metric: single crossing to tolerance", "[boundary]")
{
    auto f = [](double r) { return 1.0 - 1.0 / r; }; // crosses 0.99 at r = 100
    const auto b = solve_threshold(f, 0.99, 1e4);
    CHECK_THAT(b.threshold_r, WithinRel(100.0, 1e-6));
    CHECK(b.crossing == CrossingKind::single_monotone);
    CHECK(b.crossings == 1);
    CHECK(b.verified);
    CHECK(b.r_lo <= b.threshold_r);
    CHECK(b.r_hi >= b.threshold_r);
}

TEST_CASE("outermost crossing wins", "[boundary]")
{
    // bump above 1.01 between r = 1 and r = 10, then decays back to one
    auto f = [](double r) { return 1.0 + 0.05 * std::exp(-std::pow(std::log10(r) - 0.5, 2) * 8.0); };
    const auto full = solve_threshold(f, 1.01, 1e3);
    CHECK(full.crossing == CrossingKind::outermost_of_two);
    CHECK(full.crossings == 2);
    CHECK(full.threshold_r > 3.16);
    CHECK_THAT(f(full.threshold_r), WithinAbs(1.01, 1e-7));

    SolverOptions top_down;
    top_down.scan = ScanMode::outermost;
    const auto fast = solve_threshold(f, 1.01, 1e3, top_down);
    CHECK(fast.crossing == CrossingKind::outermost_unscanned);
    CHECK_THAT(fast.threshold_r, WithinRel(full.threshold_r, 1e-6));
    CHECK(fast.evaluations < full.evaluations);

    auto wiggle = [](double r) { return 1.0 + std::sin(std::log(r) * 3.0) / r; };
    CHECK(solve_threshold(wiggle, 1.0, 1e2).crossing == CrossingKind::outermost_of_many);
}

TEST_CASE("no crossing raises with the metric extremes", "[boundary]")
{
    auto f = [](double) { return 0.5; };
    try
    {
        solve_threshold(f, 0.99, 10.0);
        FAIL("expected NoCrossingError");
    }
    catch (const NoCrossingError &e)
    {
        CHECK(e.grid_max() == 0.5);
        CHECK(e.grid_min() == 0.5);
    }
    CHECK_THROWS_AS(solve_threshold(f, 0.99, -1.0), std::invalid_argument);
}

TEST_CASE("solver is bitwise deterministic", "[boundary][property]")
{
    auto f = [](double r) { return mu_ula_closed(0.635, r, 0.3).value; };
    const auto a = solve_threshold(f, 0.99, 800.0);
    const auto b = solve_threshold(f, 0.99, 800.0);
    CHECK(std::memcmp(&a.threshold_r, &b.threshold_r, sizeof(double)) == 0);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("equi-power line handles regimes and endfire", "[boundary]")
{
    const auto g = UlaGeometry::base_station(127, 0.005);
    const auto line = equi_power_line(g, 0.01, {0.0, deg2rad(60.0), -pi / 2.0});
    REQUIRE(line.size() == 3);
    CHECK(line[0].status == "ok");
    CHECK_THAT(line[0].result.threshold_r / g.length(), WithinAbs(2.86, 0.03));
    CHECK(line[1].regime == PowerRegime::overshoots);
    CHECK(line[1].result.delta == 1.01);
    CHECK(line[2].status == "endfire");

    const auto sum = equi_power_line(g, 0.01, {0.0}, {}, PowerEvaluator::finite_sum);
    CHECK_THAT(sum[0].result.threshold_r, WithinRel(line[0].result.threshold_r, 2e-2));
}

TEST_CASE("equi-power surface of a circular aperture", "[boundary]")
{
    const auto g = UpaGeometry::make(100, 100, 0.005, 0.005, PlanarShape::circular);
    const auto s = equi_power_surface(g, 0.01, {{0.0, 0.0}, {deg2rad(60.0), 0.0}, {pi / 2.0, 0.0}});
    CHECK_THAT(s[0].result.threshold_r / g.width(), WithinRel(3.96, 1e-2));
    CHECK(s[1].regime == PowerRegime::overshoots);
    CHECK(s[2].status == "grazing");
    const auto bad = UpaGeometry::make(100, 90, 0.005, 0.005, PlanarShape::circular);
    CHECK_THROWS_AS(equi_power_surface(bad, 0.01, {{0.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("relative rank target solves against the far-field value", "[boundary]")
{
    auto f = [](double r) { return 1.2 + 10.0 / r; };
    RankTarget t;
    t.relative_to_far_field = true;
    const auto b = equi_rank_threshold(f, 1e4, t);
    REQUIRE(b.baseline.has_value());
    CHECK_THAT(*b.baseline, WithinRel(1.201, 1e-12));
    CHECK_THAT(b.threshold_r, WithinRel(10.0 / (1.201 + 0.05 - 1.2), 1e-6));
}

TEST_CASE("parallel map keeps order and forwards errors", "[parallel]")
{
    const auto v = parallel_map(100, [](std::size_t i) { return i * i; }, 4);
    for (std::size_t i = 0; i < 100; ++i)
        CHECK(v[i] == i * i);
    CHECK_THROWS_AS(parallel_map(10, [](std::size_t i) { if (i == 7) throw std::runtime_error("x"); return i; }, 3), std::runtime_error);
}
