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

#ifndef XLWAVE_REFERENCE_HPP
#define XLWAVE_REFERENCE_HPP

#include "xlwave/error.hpp"
#include "xlwave/geometry.hpp"

#include <cmath>
#include <cstddef>

namespace xlwave
{
    // Classical far-field boundary 2 D^2 / lambda.
    inline double rayleigh_distance(double aperture, double wavelength)
    {
        detail::require(aperture >= 0.0, "aperture must be non-negative");
        detail::require_positive(wavelength, "wavelength");
        return 2.0 * aperture * aperture / wavelength;
    }

    // Two-array version 2 (D1 + D2)^2 / lambda.
    inline double rayleigh_distance_mimo(double d1, double d2, double wavelength)
    {
        detail::require(d1 >= 0.0 && d2 >= 0.0, "apertures must be non-negative");
        return rayleigh_distance(d1 + d2, wavelength);
    }

    // eps * 2 D^2 / lambda; eps = 0.367 for the effective Rayleigh distance, 0.1 for the 1/10 rule.
    inline double effective_rayleigh(double aperture, double wavelength, double eps = 0.367)
    {
        detail::require_positive(eps, "epsilon");
        return eps * rayleigh_distance(aperture, wavelength);
    }

    // sqrt((N^2 - 1)(M - 1)^2 pi^2 / (6 M (1 - g))) * du * db / lambda
    inline double largest_eigenvalue_distance(std::size_t n, std::size_t m, double du, double db, double wavelength, double g = 0.99)
    {
        detail::require(n >= 1 && m >= 1, "array sizes must be positive");
        detail::require_positive(du, "d_u");
        detail::require_positive(db, "d_b");
        detail::require_positive(wavelength, "wavelength");
        detail::require(g < 1.0, "g must be below one");
        const double nn = double(n);
        const double mm = double(m);
        return std::sqrt((nn * nn - 1.0) * (mm - 1.0) * (mm - 1.0) * pi * pi / (6.0 * mm * (1.0 - g))) * du * db / wavelength;
    }

    // Search ceiling used by the threshold solvers: ten Rayleigh distances of the composite aperture.
    inline double default_search_limit(double composite_aperture, double wavelength)
    {
        return 10.0 * rayleigh_distance(composite_aperture, wavelength);
    }
}

#endif
