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

// Continuum integrals of the normalised received power, evaluated by adaptive
// Gauss-Kronrod quadrature. They share no code with the finite sums or the
// closed forms and serve as an independent reference for both.

#ifndef XLWAVE_INTEGRAL_ORACLE_HPP
#define XLWAVE_INTEGRAL_ORACLE_HPP

#include "xlwave/error.hpp"
#include "xlwave/geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace xlwave::oracle
{
    inline constexpr double default_tolerance = 1e-12; // relative, per quadrature level
    inline constexpr unsigned max_depth = 20;

    namespace detail
    {
        template <class F>
        double integrate(F f, double a, double b, double tol)
        {
            return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol);
        }
    }

    // mu = r^2 / L * int_{-L/2}^{L/2} dy / (r^2 - 2 r y sin(theta) + y^2)
    inline double mu_ula(double length, double r, double theta, double tol = default_tolerance)
    {
        xlwave::detail::require_positive(length, "aperture");
        xlwave::detail::require_positive(r, "distance r");
        const double s = std::sin(theta);
        auto f = [&](double y) { return 1.0 / (r * r - 2.0 * r * y * s + y * y); };
        return r * r / length * detail::integrate(f, -0.5 * length, 0.5 * length, tol);
    }

    // Elliptical aperture with axes scaled so the area is Ly * Lz (unit disk of radius 1/sqrt(pi)
    // stretched by Ly and Lz). Polar coordinates on the unit-area disk, any incidence (phi, varphi).
    inline double mu_elliptical(double ly, double lz, double r, double phi, double varphi, double tol = default_tolerance)
    {
        xlwave::detail::require_positive(ly, "Ly");
        xlwave::detail::require_positive(lz, "Lz");
        xlwave::detail::require_positive(r, "distance r");
        const double cy = std::cos(phi) * std::sin(varphi);
        const double cz = std::sin(phi);
        const double radius = 1.0 / std::sqrt(pi);
        auto radial = [&](double rho)
        {
            auto angular = [&](double psi)
            {
                const double y = ly * rho * std::cos(psi);
                const double z = lz * rho * std::sin(psi);
                return rho / (r * r - 2.0 * r * (cy * y + cz * z) + y * y + z * z);
            };
            return detail::integrate(angular, -pi, pi, tol);
        };
        return r * r * detail::integrate(radial, 0.0, radius, tol);
    }

    inline double mu_circular(double diameter_equiv, double r, double phi, double varphi, double tol = default_tolerance)
    {
        return mu_elliptical(diameter_equiv, diameter_equiv, r, phi, varphi, tol);
    }

    // mu = r^2 / (Ly Lz) * int int dy dz / |p - (0, y, z)|^2 over the rectangle.
    inline double mu_rectangular(double ly, double lz, double r, double phi, double varphi, double tol = default_tolerance)
    {
        xlwave::detail::require_positive(ly, "Ly");
        xlwave::detail::require_positive(lz, "Lz");
        xlwave::detail::require_positive(r, "distance r");
        const double cy = std::cos(phi) * std::sin(varphi);
        const double cz = std::sin(phi);
        auto outer = [&](double z)
        {
            auto inner = [&](double y) { return 1.0 / (r * r - 2.0 * r * (cy * y + cz * z) + y * y + z * z); };
            return detail::integrate(inner, -0.5 * ly, 0.5 * ly, tol);
        };
        return r * r / (ly * lz) * detail::integrate(outer, -0.5 * lz, 0.5 * lz, tol);
    }
}

#endif
