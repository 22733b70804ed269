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

#include "xlwave/geometry.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace xlwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    // Law-of-cosines distance from a planar user to ULA element n (midpoint anchored on Y).
    double cosine_law(double r, double theta, double y)
    {
        return std::sqrt(r * r + y * y - 2.0 * r * y * std::sin(theta));
    }
}

TEST_CASE("polar points map to cartesian coordinates", "[geometry]")
{
    const auto p = PolarPoint::planar(2.0, deg2rad(30.0));
    CHECK_THAT(p.cartesian().x(), WithinAbs(std::sqrt(3.0), 1e-15));
    CHECK_THAT(p.cartesian().y(), WithinAbs(1.0, 1e-15));
    CHECK(p.cartesian().z() == 0.0);

    const auto q = PolarPoint::spatial(1.0, deg2rad(90.0 - 1e-9), 0.0);
    CHECK_THAT(q.direction().norm(), WithinAbs(1.0, 1e-15));

    CHECK_THROWS_AS(PolarPoint::planar(1.0, pi / 2.0), std::invalid_argument);
    CHECK_THROWS_AS(PolarPoint::planar(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PolarPoint::spatial(1.0, -pi / 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("ULA distances agree with the law of cosines", "[geometry][property]")
{
    const auto g = UlaGeometry::base_station(127, 0.005);
    CHECK_THAT(g.aperture(), WithinRel(0.63, 1e-14));
    CHECK_THAT(g.length(), WithinRel(0.635, 1e-14));
    for (double r : {0.05, 0.7, 3.0, 250.0})
        for (double deg : {-80.0, -33.0, 0.0, 12.5, 61.0})
            for (std::size_t n : {std::size_t{0}, std::size_t{40}, std::size_t{63}, std::size_t{126}})
            {
                const double y = (double(n) - 63.0) * 0.005;
                const double ref = cosine_law(r, deg2rad(deg), y);
                const double got = distance_point_to_element(g, PolarPoint::planar(r, deg2rad(deg)), n);
                CHECK_THAT(got, WithinRel(ref, 1e-12));
            }
}

TEST_CASE("ULA elements are centred and evenly spaced", "[geometry]")
{
    const auto g = UlaGeometry::base_station(4, 0.5);
    const auto pos = element_positions(g);
    REQUIRE(pos.size() == 4);
    CHECK_THAT(pos[0].y(), WithinAbs(-0.75, 1e-15));
    CHECK_THAT(pos[3].y(), WithinAbs(0.75, 1e-15));
    CHECK_THAT((pos[0] + pos[3]).norm(), WithinAbs(0.0, 1e-15));
    CHECK_THROWS_AS(UlaGeometry::base_station(0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(UlaGeometry::base_station(3, -1.0), std::invalid_argument);
}

TEST_CASE("user ULA starts at its anchor and follows the tilt", "[geometry]")
{
    const auto first = PolarPoint::planar(10.0, deg2rad(10.0));
    const auto u = UlaGeometry::user(8, 0.25, first, deg2rad(30.0));
    CHECK((u.position(0) - first.cartesian()).norm() < 1e-14);
    const Point3 step = u.position(1) - u.position(0);
    CHECK_THAT(step.norm(), WithinRel(0.25, 1e-14));
    CHECK_THAT(step.x(), WithinAbs(0.25 * std::sin(deg2rad(30.0)), 1e-15));
    CHECK_THAT(step.y(), WithinAbs(0.25 * std::cos(deg2rad(30.0)), 1e-15));
}

TEST_CASE("MIMO distances match explicit element positions", "[geometry][property]")
{
    const auto bs = UlaGeometry::base_station(16, 0.005);
    const auto user = UlaGeometry::user(6, 0.004, PolarPoint::planar(1.3, deg2rad(-20.0)), deg2rad(15.0));
    for (std::size_t n = 0; n < 16; n += 5)
        for (std::size_t m = 0; m < 6; ++m)
            CHECK_THAT(distance_mimo(bs, user, n, m), WithinRel((bs.position(n) - user.position(m)).norm(), 1e-12));

    const auto upa = UpaGeometry::make(5, 3, 0.01, 0.02);
    CHECK(upa.size() == 15);
    CHECK_THAT(upa.width(), WithinRel(0.05, 1e-14));
    CHECK_THAT(upa.height(), WithinRel(0.06, 1e-14));
    const auto u3 = UlaGeometry::user(4, 0.01, PolarPoint::spatial(0.8, deg2rad(20.0), deg2rad(40.0)), pi / 2.0);
    for (std::size_t idx = 0; idx < upa.size(); idx += 4)
        for (std::size_t m = 0; m < 4; ++m)
            CHECK_THAT(distance_mimo(upa, u3, idx, m), WithinRel((upa.position(idx) - u3.position(m)).norm(), 1e-12));
}

TEST_CASE("UPA grid is centred with n_y running fastest", "[geometry]")
{
    const auto g = UpaGeometry::make(3, 2, 1.0, 2.0);
    CHECK(g.index(2, 1) == 5);
    CHECK_THAT(g.position(0).y(), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(g.position(0).z(), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(g.position(5).y(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(g.position(5).z(), WithinAbs(1.0, 1e-15));
    CHECK(g.position(4).x() == 0.0);

    const auto user = PolarPoint::spatial(2.0, deg2rad(25.0), deg2rad(-35.0));
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK_THAT(distance_point_to_element(g, user, i), WithinRel((user.cartesian() - g.position(i)).norm(), 1e-12));
}
