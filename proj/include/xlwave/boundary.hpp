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

#ifndef XLWAVE_BOUNDARY_HPP
#define XLWAVE_BOUNDARY_HPP

#include "xlwave/channel.hpp"
#include "xlwave/error.hpp"
#include "xlwave/geometry.hpp"
#include "xlwave/parallel.hpp"
#include "xlwave/power.hpp"
#include "xlwave/rank.hpp"
#include "xlwave/reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xlwave
{
    enum class CrossingKind
    {
        single_monotone,
        outermost_of_two,
        outermost_of_many,
        outermost_unscanned, // top-down scan stopped at the first crossing, inner ones not counted
    };

    inline std::string_view to_string(CrossingKind k)
    {
        switch (k)
        {
        case CrossingKind::single_monotone: return "single_monotone";
        case CrossingKind::outermost_of_two: return "outermost_of_two";
        case CrossingKind::outermost_of_many: return "outermost_of_many";
        case CrossingKind::outermost_unscanned: return "outermost_unscanned";
        }
        return "unknown";
    }

    struct BoundaryResult
    {
        double threshold_r = 0.0;
        CrossingKind crossing = CrossingKind::single_monotone;
        double delta = 0.0;
        double r_lo = 0.0; // final bisection bracket
        double r_hi = 0.0;
        std::size_t evaluations = 0;
        std::size_t crossings = 0; // 0 when not counted
        bool verified = false;     // metric stays on the far side of delta on [t, 10 t]
        std::optional<double> baseline; // far-field metric value when the target was relative to it
    };

    enum class ScanMode
    {
        full,      // evaluate the whole grid, count every crossing
        outermost, // walk down from r_max and stop at the first sign change
    };

    struct SolverOptions
    {
        std::size_t points_per_decade = 400;
        double decades = 6.0;
        double rel_tol = 1e-6;
        ScanMode scan = ScanMode::full;
        bool verify = true;
        std::size_t verify_points = 100;
    };

    // Largest r in (0, r_max] with metric(r) = delta. The metric is sampled on a log grid
    // ending at r_max, the outermost sign change of metric - delta is bracketed and bisected.
    inline BoundaryResult solve_threshold(const std::function<double(double)> &metric, double delta, double r_max,
                                          const SolverOptions &opt = {})
    {
        detail::require_positive(r_max, "r_max");
        detail::require(opt.points_per_decade >= 1 && opt.decades > 0.0, "solver grid must be non-empty");
        detail::require(opt.rel_tol > 0.0, "rel_tol must be positive");

        BoundaryResult res;
        res.delta = delta;
        const auto count = std::size_t(std::llround(opt.decades * double(opt.points_per_decade)));
        auto grid_r = [&](std::size_t k) { return r_max * std::pow(10.0, (double(k) - double(count)) / double(opt.points_per_decade)); };
        auto g = [&](double r)
        {
            ++res.evaluations;
            return metric(r) - delta;
        };
        auto side = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };

        double gmin = std::numeric_limits<double>::infinity();
        double gmax = -std::numeric_limits<double>::infinity();
        auto track = [&](double v)
        {
            gmin = std::min(gmin, v);
            gmax = std::max(gmax, v);
        };
        // Grid indices (lo, hi) around the outermost sign change. Exact zeros carry no sign and
        // are skipped, so a bracket may span several grid steps.
        std::optional<std::pair<std::size_t, std::size_t>> bracket;
        double g_hi = 0.0;

        if (opt.scan == ScanMode::full)
        {
            std::optional<std::size_t> last;
            std::vector<double> values(count + 1);
            for (std::size_t k = 0; k <= count; ++k)
            {
                values[k] = g(grid_r(k));
                track(values[k]);
                if (side(values[k]) == 0)
                    continue;
                if (last && side(values[*last]) != side(values[k]))
                {
                    ++res.crossings;
                    bracket = {*last, k};
                    g_hi = values[k];
                }
                last = k;
            }
            res.crossing = res.crossings <= 1 ? CrossingKind::single_monotone
                                              : (res.crossings == 2 ? CrossingKind::outermost_of_two : CrossingKind::outermost_of_many);
        }
        else
        {
            std::optional<std::pair<std::size_t, double>> upper;
            for (std::size_t k = count + 1; k-- > 0;)
            {
                const double v = g(grid_r(k));
                track(v);
                if (side(v) == 0)
                    continue;
                if (upper && side(upper->second) != side(v))
                {
                    bracket = {k, upper->first};
                    g_hi = upper->second;
                    break;
                }
                upper = {k, v};
            }
            res.crossing = CrossingKind::outermost_unscanned;
        }

        if (!bracket)
            throw NoCrossingError("already within tolerance everywhere", gmin + delta, gmax + delta);

        double lo = grid_r(bracket->first);
        double hi = grid_r(bracket->second);
        const int s_hi = side(g_hi);
        while ((hi - lo) > opt.rel_tol * hi)
        {
            const double mid = 0.5 * (lo + hi);
            const double gm = g(mid);
            if (side(gm) == s_hi)
                hi = mid;
            else
                lo = mid;
        }
        res.r_lo = lo;
        res.r_hi = hi;
        res.threshold_r = 0.5 * (lo + hi);

        if (opt.verify)
        {
            res.verified = true;
            for (std::size_t k = 1; k <= opt.verify_points; ++k)
            {
                const double r = res.threshold_r * std::pow(10.0, double(k) / double(opt.verify_points));
                if (side(g(r)) == -s_hi && s_hi != 0)
                {
                    res.verified = false;
                    break;
                }
            }
        }
        return res;
    }

    // ---------------------------------------------------------------- equi-power

    enum class PowerEvaluator
    {
        closed_form,
        finite_sum,
    };

    struct PowerDeltas
    {
        double below = 0.99;
        double above = 1.01;
    };

    struct EquiPowerSample
    {
        double theta = 0.0;   // ULA: incidence angle; planar: unused
        double phi = 0.0;     // planar elevation
        double varphi = 0.0;  // planar azimuth
        PowerRegime regime = PowerRegime::always_below_one;
        std::string status = "ok"; // ok, endfire, grazing, no_crossing
        BoundaryResult result;
    };

    namespace detail
    {
        // Solves with delta_above in the overshoot regime; when the overshoot never reaches it,
        // falls back to delta_below (the rising edge).
        inline void solve_power(EquiPowerSample &s, const std::function<double(double)> &mu, const PowerDeltas &deltas,
                                double r_max, const SolverOptions &opt)
        {
            const double first = s.regime == PowerRegime::overshoots ? deltas.above : deltas.below;
            try
            {
                s.result = solve_threshold(mu, first, r_max, opt);
            }
            catch (const NoCrossingError &)
            {
                if (s.regime != PowerRegime::overshoots)
                {
                    s.status = "no_crossing";
                    return;
                }
                try
                {
                    s.result = solve_threshold(mu, deltas.below, r_max, opt);
                }
                catch (const NoCrossingError &)
                {
                    s.status = "no_crossing";
                }
            }
        }
    }

    // Equi-power line of a ULA over a grid of incidence angles (radians). Angles at +-90 deg
    // produce an "endfire" status row.
    inline std::vector<EquiPowerSample> equi_power_line(const UlaGeometry &geom, double wavelength, const std::vector<double> &thetas,
                                                        const PowerDeltas &deltas = {}, PowerEvaluator eval = PowerEvaluator::closed_form,
                                                        const SolverOptions &opt = {}, std::size_t threads = 0)
    {
        const double r_max = default_search_limit(geom.aperture() > 0.0 ? geom.aperture() : geom.spacing, wavelength);
        const double nd = geom.length();
        return parallel_map(thetas.size(), [&](std::size_t i)
        {
            EquiPowerSample s;
            s.theta = thetas[i];
            if (!(std::abs(s.theta) < pi / 2.0 - 1e-12))
            {
                s.status = "endfire";
                return s;
            }
            s.regime = ula_regime(s.theta);
            std::function<double(double)> mu;
            if (eval == PowerEvaluator::closed_form)
                mu = [&, th = s.theta](double r) { return mu_ula_closed(nd, r, th).value; };
            else
                mu = [&, th = s.theta](double r) { return mu_ula_sum(geom, PolarPoint{r, 0.0, th}).value; };
            detail::solve_power(s, mu, deltas, r_max, opt);
            return s;
        }, threads);
    }

    // Equi-power surface of a planar array over (phi, varphi) pairs. Circular apertures use the
    // closed form with D = Ny dy (which must equal Nz dz); elliptical apertures use the closed
    // form at broadside only; everything else uses the finite sum.
    inline std::vector<EquiPowerSample> equi_power_surface(const UpaGeometry &geom, double wavelength,
                                                           const std::vector<std::pair<double, double>> &angles,
                                                           const PowerDeltas &deltas = {}, PowerEvaluator eval = PowerEvaluator::closed_form,
                                                           const SolverOptions &opt = {}, std::size_t threads = 0)
    {
        const double ly = geom.width(), lz = geom.height();
        if (geom.shape == PlanarShape::circular && eval == PowerEvaluator::closed_form)
            detail::require(std::abs(ly - lz) <= 1e-12 * std::max(ly, lz), "circular aperture needs Ny*dy == Nz*dz");
        const double diag = std::hypot(double(geom.num_y - 1) * geom.spacing_y, double(geom.num_z - 1) * geom.spacing_z);
        const double r_max = default_search_limit(diag > 0.0 ? diag : std::max(geom.spacing_y, geom.spacing_z), wavelength);

        Scenario sc = Scenario::urpa;
        if (geom.shape == PlanarShape::circular)
            sc = Scenario::ucpa;
        else if (geom.shape == PlanarShape::elliptical)
            sc = Scenario::uepa;
        else if (std::abs(ly - lz) <= 1e-12 * std::max(ly, lz))
            sc = Scenario::uspa;

        return parallel_map(angles.size(), [&](std::size_t i)
        {
            EquiPowerSample s;
            s.phi = angles[i].first;
            s.varphi = angles[i].second;
            if (!(std::abs(s.phi) < pi / 2.0 - 1e-12) || !(std::abs(s.varphi) < pi / 2.0 - 1e-12))
            {
                s.status = "grazing";
                return s;
            }
            s.regime = dividing_curve_classify(sc, s.phi, s.varphi, ly, lz);
            const bool broadside = s.phi == 0.0 && s.varphi == 0.0;
            std::function<double(double)> mu;
            if (eval == PowerEvaluator::closed_form && sc == Scenario::ucpa)
                mu = [&, p = s.phi, v = s.varphi](double r) { return mu_ucpa_closed(ly, r, p, v).value; };
            else if (eval == PowerEvaluator::closed_form && sc == Scenario::uepa && broadside)
                mu = [&](double r) { return mu_uepa_broadside_closed(ly, lz, r).value; };
            else
                mu = [&, p = s.phi, v = s.varphi](double r) { return mu_upa_sum(geom, PolarPoint{r, p, v}).value; };
            detail::solve_power(s, mu, deltas, r_max, opt);
            return s;
        }, threads);
    }

    // ---------------------------------------------------------------- equi-rank

    struct RankTarget
    {
        double delta = 1.05;
        bool relative_to_far_field = false; // solve erank = Xi + offset, Xi = erank(r_max)
        double offset = 0.05;
    };

    inline BoundaryResult equi_rank_threshold(const std::function<double(double)> &erank_of_r, double r_max,
                                              const RankTarget &target = {}, const SolverOptions &opt = {})
    {
        if (!target.relative_to_far_field)
            return solve_threshold(erank_of_r, target.delta, r_max, opt);
        const double xi = erank_of_r(r_max);
        auto res = solve_threshold(erank_of_r, xi + target.offset, r_max, opt);
        res.baseline = xi;
        ++res.evaluations;
        return res;
    }

    inline BoundaryResult equi_rank_threshold(const std::function<ChannelMatrix(double)> &factory, double r_max,
                                              const RankTarget &target = {}, const SolverOptions &opt = {})
    {
        return equi_rank_threshold(std::function<double(double)>([&](double r) { return gram_effective_rank(factory(r)).value; }),
                                   r_max, target, opt);
    }

    // Base-station ULA (N, db) and a user ULA (M, du) whose first element sits at (r, theta) and
    // whose axis makes angle phi with the Y axis.
    struct UlaLinkConfig
    {
        std::size_t n = 100;
        std::size_t m = 100;
        double wavelength = 0.01;
        double db = 0.005;
        double du = 0.005;
        double theta = 0.0;
        double phi = 0.0;
    };

    inline std::function<double(double)> ula_link_erank(const UlaLinkConfig &c, const ScattererSet *scatterers = nullptr)
    {
        const auto bs = UlaGeometry::base_station(c.n, c.db);
        return [=](double r)
        {
            const auto user = UlaGeometry::user(c.m, c.du, PolarPoint::planar(r, c.theta), c.phi);
            return hermitian_effective_rank(gram_matrix_mimo(bs, user, c.wavelength, scatterers)).value;
        };
    }

    inline double ula_link_search_limit(const UlaLinkConfig &c)
    {
        return default_search_limit(double(c.n) * c.db + double(c.m) * c.du, c.wavelength);
    }

    // Planar base station (Ny x Nz) and a user ULA parallel to the Y axis by default, whose first
    // element sits at (r, phi, varphi). The user axis is given by (phi_u, varphi_u).
    struct UpaLinkConfig
    {
        std::size_t ny = 256;
        std::size_t nz = 256;
        std::size_t m = 64;
        double wavelength = 0.005;
        double dy = 0.0025;
        double dz = 0.0025;
        double du = 0.0025;
        double phi = 0.0;
        double varphi = 0.0;
        double phi_u = 0.0;
        double varphi_u = pi / 2.0;
    };

    inline std::function<double(double)> upa_link_erank(const UpaLinkConfig &c, std::size_t block_rows = 512)
    {
        const auto bs = UpaGeometry::make(c.ny, c.nz, c.dy, c.dz);
        return [=](double r)
        {
            const auto user = UlaGeometry::user(c.m, c.du, PolarPoint::spatial(r, c.phi, c.varphi), pi / 2.0 - c.varphi_u, c.phi_u);
            return hermitian_effective_rank(gram_matrix_mimo(bs, user, c.wavelength, nullptr, block_rows)).value;
        };
    }

    inline double upa_link_search_limit(const UpaLinkConfig &c)
    {
        return default_search_limit(double(c.ny) * c.dy + double(c.m) * c.du, c.wavelength);
    }
}

#endif
