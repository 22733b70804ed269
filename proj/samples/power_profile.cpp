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

// Prints the normalised received power of a 127-element ULA against distance, and the
// distance where it first stays within 1 % of the plane-wave value.

#include "xlwave/xlwave.hpp"

#include <cstdio>

int main()
{
    using namespace xlwave;
    const double lambda = 0.01;
    const auto bs = UlaGeometry::base_station(127, lambda / 2.0);

    std::printf("%10s %12s %12s\n", "r [m]", "mu (sum)", "mu (closed)");
    for (double r : {0.2, 0.5, 1.0, 2.0, 5.0, 20.0, 80.0})
    {
        const auto sum = mu_ula_sum(bs, PolarPoint::planar(r, 0.0));
        const auto closed = mu_ula_closed(bs.length(), r, 0.0);
        std::printf("%10.2f %12.6f %12.6f\n", r, sum.value, closed.value);
    }

    const auto line = equi_power_line(bs, lambda, {0.0, deg2rad(30.0), deg2rad(60.0)});
    for (const auto &s : line)
        std::printf("theta=%5.1f deg  threshold=%.4f m  (%s)\n", rad2deg(s.theta), s.result.threshold_r,
                    std::string(to_string(s.regime)).c_str());
    std::printf("Rayleigh distance: %.2f m\n", rayleigh_distance(bs.aperture(), lambda));
}
