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

// Builds a spherical-wave channel with two scatterers, writes it to a text file and reads it back.

#include "xlwave/xlwave.hpp"

#include <cstdio>
#include <fstream>

int main(int argc, char **argv)
{
    using namespace xlwave;
    const char *path = argc > 1 ? argv[1] : "channel.csv";
    const double lambda = 0.01;
    const auto bs = UlaGeometry::base_station(32, lambda / 2.0);
    const auto user = PolarPoint::planar(3.0, deg2rad(20.0));

    ScattererSet sc;
    sc.scatterers.push_back({PolarPoint::planar(1.5, deg2rad(15.0)), std::polar(0.5, 0.3)});
    sc.scatterers.push_back({PolarPoint::planar(1.5, deg2rad(25.0)), std::polar(0.5, 0.3)});
    const auto h = swm_channel_scattered_point(bs, user, sc, lambda);

    {
        std::ofstream out(path);
        write_channel_csv(out, h, geometry_hash(bs));
    }
    std::ifstream in(path);
    const auto back = read_channel_csv(in);
    const bool same = back.channel.entries == h.entries && back.geometry_hash == geometry_hash(bs);
    std::printf("wrote %s: %ldx%ld, MRC gain %.6e, round trip %s\n", path, long(h.rows()), long(h.cols()), mrc_gain(h),
                same ? "exact" : "MISMATCH");
    return same ? 0 : 1;
}
