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

#ifndef XLWAVE_POWER_HPP
#define XLWAVE_POWER_HPP

#include "xlwave/error.hpp"
#include "xlwave/geometry.hpp"
#include "xlwave/integral_oracle.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string_view>

namespace xlwave
{
    enum class PowerMethod
    {
        closed_form,
        finite_sum,
        integral_oracle,
        monte_carlo,
    };

    enum class Scenario
    {
        ula,
        uepa,
        ucpa,
        uspa,
        urpa,
    };

    inline std::string_view to_string(PowerMethod m)
    {
        switch (m)
        {
        case PowerMethod::closed_form: return "closed_form";
        case PowerMethod::finite_sum: return "finite_sum";
        case PowerMethod::integral_oracle: return "integral_oracle";
        case PowerMethod::monte_carlo: return "monte_carlo";
        }
        return "unknown";
    }

    inline std::string_view to_string(Scenario s)
    {
        switch (s)
        {
        case Scenario::ula: return "ula";
        case Scenario::uepa: return "uepa";
        case Scenario::ucpa: return "ucpa";
        case Scenario::uspa: return "uspa";
        case Scenario::urpa: return "urpa";
        }
        return "unknown";
    }

    inline Scenario parse_scenario(std::string_view s)
    {
        for (auto v : {Scenario::ula, Scenario::uepa, Scenario::ucpa, Scenario::uspa, Scenario::urpa})
            if (to_string(v) == s)
                return v;
        throw std::invalid_argument("unknown scenario '" + std::string(s) + "'");
    }

    // Normalised received power G_swm / G_pwm at one position.
    struct PowerRatio
    {
        double value = 1.0;
        PowerMethod method = PowerMethod::finite_sum;
        Scenario scenario = Scenario::ula;
        std::size_t trials = 0; // Monte Carlo only
        std::uint64_t seed = 0; // Monte Carlo only
    };

    // beta = cos^2(phi) cos^2(varphi)
    inline double incidence_beta(double phi, double varphi)
    {
        const double c = std::cos(phi) * std::cos(varphi);
        return c * c;
    }

    // mu = r^2 / N * sum_n 1 / r_n^2, with r measured from the array origin.
    inline PowerRatio mu_ula_sum(const UlaGeometry &geom, const PolarPoint &user)
    {
        PolarPoint::checked(user);
        const double r = (user.cartesian() - geom.origin).norm();
        double acc = 0.0;
        for (std::size_t n = 0; n < geom.num_elements; ++n)
        {
            const double rn = distance_point_to_element(geom, user, n);
            acc += 1.0 / (rn * rn);
        }
        return {r * r / double(geom.num_elements) * acc, PowerMethod::finite_sum, Scenario::ula};
    }

    // Continuum closed form for an aperture of length Nd.
    inline PowerRatio mu_ula_closed(double aperture, double r, double theta)
    {
        detail::require_positive(aperture, "aperture");
        detail::require_positive(r, "distance r");
        const double c = std::cos(theta);
        if (!(std::abs(theta) < pi / 2.0) || !(c > 1e-15))
            throw std::domain_error("endfire singular");
        const double a = aperture / (2.0 * r * c);
        const double t = std::tan(theta);
        const double mu = r / (aperture * c) * (std::atan(a + t) + std::atan(a - t));
        return {mu, PowerMethod::closed_form, Scenario::ula};
    }

    // Distance at which the second radial derivative of the ULA closed form vanishes.
    inline double r2_inflection_ula(double aperture, double theta)
    {
        detail::require_positive(aperture, "aperture");
        if (!(std::abs(theta) < pi / 2.0))
            throw std::domain_error("endfire singular");
        const double t = std::tan(theta);
        const double t2 = t * t;
        if (!(3.0 * t2 > 1.0))
            throw std::domain_error("no inflection: mu < 1 regime");
        const double c = std::cos(theta);
        const double num = t2 + 1.0 + 2.0 * std::abs(t) * std::sqrt(t2 + 1.0);
        const double den = 4.0 * c * c * (t2 + 1.0) * (3.0 * t2 - 1.0);
        return aperture * std::sqrt(num / den);
    }

    struct PeakResult
    {
        double r = 0.0;
        double value = 0.0;
        std::uintmax_t iterations = 0;
    };

    // Maximiser of f on [a, b] by Brent's method, relative precision about 1.5e-8.
    inline PeakResult find_peak(const std::function<double(double)> &f, double a, double b)
    {
        detail::require(a > 0.0 && b > a, "peak search needs 0 < a < b");
        std::uintmax_t iters = 200;
        const int bits = std::numeric_limits<double>::digits / 2;
        const auto [x, fx] = boost::math::tools::brent_find_minima([&](double r) { return -f(r); }, a, b, bits, iters);
        return {x, -fx, iters};
    }

    // Location and height of the ULA overshoot peak (closed form). It lies below r2.
    inline PeakResult mu_ula_peak(double aperture, double theta)
    {
        const double r2 = r2_inflection_ula(aperture, theta);
        return find_peak([&](double r) { return mu_ula_closed(aperture, r, theta).value; }, 1e-3 * r2, r2);
    }

    // mu = r^2 / N * sum 1 / r_{ny nz}^2 over the rectangular element grid.
    inline PowerRatio mu_upa_sum(const UpaGeometry &geom, const PolarPoint &user)
    {
        PolarPoint::checked(user);
        double acc = 0.0;
        for (std::size_t i = 0; i < geom.size(); ++i)
        {
            const double rn = distance_point_to_element(geom, user, i);
            acc += 1.0 / (rn * rn);
        }
        const Scenario sc = geom.num_y == geom.num_z && geom.spacing_y == geom.spacing_z ? Scenario::uspa : Scenario::urpa;
        return {user.r * user.r / double(geom.size()) * acc, PowerMethod::finite_sum, sc};
    }

    // Broadside closed form for an elliptical aperture of extents Ly = Ny dy and Lz = Nz dz.
    inline PowerRatio mu_uepa_broadside_closed(double ly, double lz, double r)
    {
        detail::require_positive(ly, "Ny*dy");
        detail::require_positive(lz, "Nz*dz");
        detail::require_positive(r, "distance r");
        const double pr2 = pi * r * r;
        const double arg = (lz * std::sqrt(ly * ly / pr2 + 1.0) + ly * std::sqrt(lz * lz / pr2 + 1.0)) / (ly + lz);
        return {2.0 * pr2 / (ly * lz) * std::log(arg), PowerMethod::closed_form, Scenario::uepa};
    }

    // Circular aperture of area D^2. Off broadside this evaluates
    //   (pi r^2 / D^2) ln((S + B) / (2 beta r^2)),
    //   S = sqrt(D^4/pi^2 + (4 beta - 2) r^2 D^2 / pi + r^4),  B = D^2/pi + (2 beta - 1) r^2,
    // which is the two-logarithm expression combined into one; S^2 - B^2 = 4 beta (1 - beta) r^4.
    inline PowerRatio mu_ucpa_closed(double diameter, double r, double phi, double varphi)
    {
        detail::require_positive(diameter, "D");
        detail::require_positive(r, "distance r");
        const double beta = incidence_beta(phi, varphi);
        if (!(beta > 0.0) || !(std::abs(phi) < pi / 2.0) || !(std::abs(varphi) < pi / 2.0))
            throw std::domain_error("grazing incidence");
        const double d2 = diameter * diameter;
        const double r2 = r * r;
        if (beta > 1.0 - 1e-9)
            return {pi * r2 / d2 * std::log1p(d2 / (pi * r2)), PowerMethod::closed_form, Scenario::ucpa};

        const double b = d2 / pi + (2.0 * beta - 1.0) * r2;
        const double s = std::sqrt(d2 * d2 / (pi * pi) + (4.0 * beta - 2.0) * r2 * d2 / pi + r2 * r2);
        const double s_plus_b = b >= 0.0 ? s + b : 4.0 * beta * (1.0 - beta) * r2 * r2 / (s - b);
        return {pi * r2 / d2 * std::log(s_plus_b / (2.0 * beta * r2)), PowerMethod::closed_form, Scenario::ucpa};
    }

    inline double r2_inflection_ucpa_beta(double diameter, double beta)
    {
        detail::require_positive(diameter, "D");
        if (!(beta > 0.0))
            throw std::domain_error("grazing incidence");
        if (!(beta < 0.5))
            throw std::domain_error("mu < 1 regime");
        const double q = 4.0 * beta - 2.0;
        return diameter * std::sqrt((10.0 + std::sqrt(100.0 - 9.0 * q * q)) / (9.0 * pi * (2.0 - 4.0 * beta)));
    }

    inline double r2_inflection_ucpa(double diameter, double phi, double varphi)
    {
        return r2_inflection_ucpa_beta(diameter, incidence_beta(phi, varphi));
    }

    inline PeakResult mu_ucpa_peak(double diameter, double phi, double varphi)
    {
        const double r2 = r2_inflection_ucpa(diameter, phi, varphi);
        return find_peak([&](double r) { return mu_ucpa_closed(diameter, r, phi, varphi).value; }, 1e-3 * r2, r2);
    }

    // Quadrature of the continuum integral. For Scenario::ula only `ly` and `theta` (passed as
    // varphi) are used; ucpa/uspa use ly as D; uepa/urpa use both extents.
    inline PowerRatio mu_integral_oracle(Scenario sc, double ly, double lz, double r, double phi, double varphi)
    {
        double v = 0.0;
        switch (sc)
        {
        case Scenario::ula: v = oracle::mu_ula(ly, r, varphi); break;
        case Scenario::ucpa: v = oracle::mu_circular(ly, r, phi, varphi); break;
        case Scenario::uepa: v = oracle::mu_elliptical(ly, lz, r, phi, varphi); break;
        case Scenario::uspa: v = oracle::mu_rectangular(ly, ly, r, phi, varphi); break;
        case Scenario::urpa: v = oracle::mu_rectangular(ly, lz, r, phi, varphi); break;
        }
        return {v, PowerMethod::integral_oracle, sc};
    }

    enum class PowerRegime
    {
        always_below_one,
        overshoots,
    };

    inline std::string_view to_string(PowerRegime r)
    {
        return r == PowerRegime::overshoots ? "overshoots" : "always_below_one";
    }

    // ULA: mu overshoots one iff |theta| > pi/6.
    inline PowerRegime ula_regime(double theta)
    {
        if (!(std::abs(theta) < pi / 2.0))
            throw std::domain_error("endfire singular");
        const double t = std::tan(theta);
        return 3.0 * t * t > 1.0 ? PowerRegime::overshoots : PowerRegime::always_below_one;
    }

    // Planar apertures. UCPA/USPA (and URPA with equal sides) overshoot iff beta < 1/2. For a
    // rectangle the angles are folded into the first quadrant and split at
    // phi0 = 30 deg, varphi0 = arccos(sqrt(1 / (2 cos^2(30 deg)))):
    //   Ly < Lz: beta rule for phi < phi0, otherwise overshoot iff phi > phi0 or beta < 1/2;
    //   Ly > Lz: beta rule for varphi < varphi0, otherwise overshoot iff varphi > varphi0 or beta < 1/2.
    inline PowerRegime dividing_curve_classify(Scenario sc, double phi, double varphi, double ly = 1.0, double lz = 1.0)
    {
        if (!(std::abs(phi) < pi / 2.0) || !(std::abs(varphi) < pi / 2.0))
            throw std::domain_error("grazing incidence");
        const double beta = incidence_beta(phi, varphi);
        const bool beta_rule = beta < 0.5;
        auto as_regime = [](bool over) { return over ? PowerRegime::overshoots : PowerRegime::always_below_one; };

        switch (sc)
        {
        case Scenario::ula:
            return ula_regime(varphi);
        case Scenario::ucpa:
        case Scenario::uspa:
        case Scenario::uepa:
            return as_regime(beta_rule);
        case Scenario::urpa:
            break;
        }

        detail::require_positive(ly, "Ny*dy");
        detail::require_positive(lz, "Nz*dz");
        const double a_phi = std::abs(phi);
        const double a_varphi = std::abs(varphi);
        const double phi0 = pi / 6.0;
        const double varphi0 = std::acos(std::sqrt(1.0 / (2.0 * std::cos(phi0) * std::cos(phi0))));
        if (ly < lz)
            return as_regime(a_phi < phi0 ? beta_rule : (a_phi > phi0 || beta_rule));
        if (ly > lz)
            return as_regime(a_varphi < varphi0 ? beta_rule : (a_varphi > varphi0 || beta_rule));
        return as_regime(beta_rule);
    }
}

#endif
