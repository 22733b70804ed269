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

#include "xlwave/channel.hpp"
#include "xlwave/channel_io.hpp"
#include "xlwave/reference.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <sstream>

using namespace xlwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    cdouble ref_term(double dist, double lambda)
    {
        return lambda / (4.0 * pi * dist) * std::exp(cdouble(0.0, -2.0 * pi * dist / lambda));
    }
}

TEST_CASE("spherical-wave entries follow the free-space term", "[channel]")
{
    const double lambda = 0.01;
    const auto g = UlaGeometry::base_station(9, 0.005);
    const auto u = PolarPoint::planar(0.4, deg2rad(25.0));
    const auto h = swm_channel_point(g, u, lambda);
    REQUIRE(h.rows() == 9);
    REQUIRE(h.cols() == 1);
    CHECK(h.model == WaveModel::spherical);
    for (std::size_t n = 0; n < 9; ++n)
    {
        const cdouble ref = ref_term((u.cartesian() - g.position(n)).norm(), lambda);
        CHECK(std::abs(h(Eigen::Index(n), 0) - ref) < 1e-12 * std::abs(ref));
    }
}

TEST_CASE("plane-wave entries share one amplitude and a linear phase", "[channel]")
{
    const double lambda = 0.01;
    const auto g = UlaGeometry::base_station(11, 0.005);
    const auto u = PolarPoint::planar(3.0, deg2rad(-40.0));
    const auto h = pwm_channel_point(g, u, lambda);
    CHECK(h.model == WaveModel::planar);
    for (Eigen::Index n = 0; n < 11; ++n)
    {
        CHECK_THAT(std::abs(h(n, 0)), WithinRel(lambda / (4.0 * pi * 3.0), 1e-12));
        const double path = 3.0 - g.position(std::size_t(n)).dot(u.direction());
        CHECK(std::abs(h(n, 0) - ref_term(3.0, lambda) * std::exp(cdouble(0.0, -2.0 * pi * (path - 3.0) / lambda))) < 1e-15);
    }
}

TEST_CASE("spherical and plane-wave gains converge far away", "[channel][property]")
{
    const double lambda = 0.01;
    const auto g = UlaGeometry::base_station(64, 0.005);
    double previous = 1.0;
    for (double r : {1.0, 10.0, 100.0, 1000.0})
    {
        const auto u = PolarPoint::planar(r, deg2rad(20.0));
        const double ratio = mrc_gain(swm_channel_point(g, u, lambda)) / mrc_gain(pwm_channel_point(g, u, lambda));
        const double gap = std::abs(ratio - 1.0);
        CHECK(gap < previous);
        previous = gap;
    }
    CHECK(previous < 1e-6);
}

TEST_CASE("coincident points are domain errors", "[channel]")
{
    const std::vector<Point3> a{Point3(0.0, 0.0, 0.0), Point3(0.0, 0.01, 0.0)};
    const std::vector<Point3> b{Point3(0.0, 0.01, 0.0)};
    CHECK_THROWS_AS(swm_channel_arrays(a, b, 0.01), std::domain_error);

    const auto g = UlaGeometry::base_station(3, 0.005);
    const auto u = PolarPoint::planar(1.0, 0.1);
    ScattererSet sc;
    sc.scatterers.push_back({u, cdouble(0.5, 0.0)});
    CHECK_THROWS_AS(swm_channel_scattered_point(g, u, sc, 0.01), std::domain_error);
    CHECK_THROWS_AS(swm_channel_point(g, u, -1.0), std::invalid_argument);
}

TEST_CASE("an empty scatterer set reproduces the line-of-sight channel", "[channel]")
{
    const double lambda = 0.01;
    const auto g = UlaGeometry::base_station(16, 0.005);
    const auto u = PolarPoint::planar(2.0, deg2rad(10.0));
    const ScattererSet none;
    CHECK((swm_channel_scattered_point(g, u, none, lambda).entries - swm_channel_point(g, u, lambda).entries).norm() == 0.0);
    CHECK((pwm_channel_scattered_point(g, u, none, lambda).entries - pwm_channel_point(g, u, lambda).entries).norm() == 0.0);
}

TEST_CASE("scattered channel adds bounce terms", "[channel]")
{
    const double lambda = 0.01;
    const auto g = UlaGeometry::base_station(8, 0.005);
    const auto u = PolarPoint::planar(2.0, 0.0);
    ScattererSet sc;
    sc.scatterers.push_back({PolarPoint::planar(1.0, deg2rad(30.0)), cdouble(0.3, -0.2)});
    const auto los = swm_channel_scattered_point(g, u, sc, lambda, LosMode::with_los);
    const auto nlos = swm_channel_scattered_point(g, u, sc, lambda, LosMode::without_los);
    const auto direct = swm_channel_point(g, u, lambda);
    CHECK((los.entries - nlos.entries - direct.entries).norm() < 1e-15);

    const double dl = (sc.scatterers[0].position.cartesian() - u.cartesian()).norm();
    for (Eigen::Index n = 0; n < 8; ++n)
    {
        const double rn = (sc.scatterers[0].position.cartesian() - g.position(std::size_t(n))).norm();
        const cdouble ref = sc.scatterers[0].gain * lambda / (4.0 * pi * rn * dl) * std::exp(cdouble(0.0, -2.0 * pi * (rn + dl) / lambda));
        CHECK(std::abs(nlos(n, 0) - ref) < 1e-12 * std::abs(ref));
    }
    REQUIRE(los.multipath.has_value());
    CHECK(los.multipath->size() == 1);
}

TEST_CASE("MIMO channel is the element-list channel", "[channel]")
{
    const double lambda = 0.01;
    const auto bs = UlaGeometry::base_station(12, 0.005);
    const auto user = UlaGeometry::user(4, 0.005, PolarPoint::planar(1.5, deg2rad(5.0)), deg2rad(20.0));
    const auto h = swm_channel_mimo(bs, user, lambda);
    const auto a = element_positions(bs);
    const auto b = element_positions(user);
    const auto ref = swm_channel_arrays(a, b, lambda);
    CHECK((h.entries - ref.entries).norm() < 1e-14 * ref.entries.norm());
    const auto swapped = swm_channel_arrays(b, a, lambda);
    CHECK((swapped.entries - ref.entries.transpose()).norm() < 1e-14 * ref.entries.norm());
}

TEST_CASE("MRC weights are the normalised channel", "[channel]")
{
    const auto g = UlaGeometry::base_station(5, 0.005);
    const auto h = swm_channel_point(g, PolarPoint::planar(0.3, 0.2), 0.01);
    const auto w = mrc_weights(h);
    CHECK_THAT(w.norm(), WithinAbs(1.0, 1e-14));
    CHECK_THAT(std::norm(w.dot(h.entries.col(0))), WithinRel(mrc_gain(h), 1e-12));
}

TEST_CASE("far-field weights focus at the Rayleigh distance and defocus close in", "[channel][beampattern]")
{
    const double lambda = 0.01;
    const auto g = UlaGeometry::base_station(127, 0.005);
    const auto w = mrc_weights(pwm_channel_point(g, PolarPoint::planar(100.0, 0.0), lambda));
    std::vector<double> grid;
    for (int k = -300; k <= 300; ++k)
        grid.push_back(deg2rad(0.05 * k));

    auto pattern_at = [&](double r) { return beampattern(g, w, [r](double a) { return PolarPoint{r, 0.0, a}; }, grid, lambda); };
    const auto far = pattern_at(rayleigh_distance(g.aperture(), lambda));
    const auto near = pattern_at(1.80);

    auto peak = [](const std::vector<PatternSample> &p) { return std::max_element(p.begin(), p.end(), [](auto &a, auto &b) { return a.gain_db < b.gain_db; }); };
    CHECK(peak(far)->gain_db == 0.0);
    CHECK_THAT(peak(far)->angle, WithinAbs(0.0, 1e-12));
    CHECK(peak(near)->gain_db == 0.0);

    // half-power width at the Rayleigh distance stays below one degree
    double far_width = 0.0;
    for (const auto &s : far)
        if (s.gain_db >= -3.0)
            far_width = std::max(far_width, std::abs(rad2deg(s.angle)));
    CHECK(2.0 * far_width < 1.0);

    // close in, the main lobe spreads well beyond that
    double near_width = 0.0;
    for (const auto &s : near)
        if (s.gain_db >= -3.0)
            near_width = std::max(near_width, std::abs(rad2deg(s.angle)));
    CHECK(near_width > 5.0 * far_width);
}

TEST_CASE("channel files round-trip bit for bit", "[channel][io]")
{
    const auto g = UlaGeometry::base_station(7, 0.005);
    ScattererSet sc;
    sc.scatterers.push_back({PolarPoint::planar(0.4, deg2rad(-12.0)), std::polar(0.7, 1.1)});
    const auto h = swm_channel_scattered_point(g, PolarPoint::planar(0.9, deg2rad(8.0)), sc, 0.01);
    const auto text = channel_to_csv(h, geometry_hash(g));
    const auto back = channel_from_csv(text);
    CHECK(back.channel.entries == h.entries);
    CHECK(back.channel.wavelength == h.wavelength);
    CHECK(back.channel.model == WaveModel::spherical);
    CHECK(back.geometry_hash == geometry_hash(g));
    CHECK(channel_to_csv(back.channel, back.geometry_hash) == text);

    CHECK(geometry_hash(g) != geometry_hash(UlaGeometry::base_station(8, 0.005)));
    CHECK_THROWS_AS(channel_from_csv("garbage\n"), std::invalid_argument);
    std::string truncated = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
    CHECK_THROWS_AS(channel_from_csv(truncated), std::invalid_argument);
}
