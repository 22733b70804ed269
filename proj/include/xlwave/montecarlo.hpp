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

#ifndef XLWAVE_MONTECARLO_HPP
#define XLWAVE_MONTECARLO_HPP

#include "xlwave/boundary.hpp"
#include "xlwave/channel.hpp"
#include "xlwave/error.hpp"
#include "xlwave/geometry.hpp"
#include "xlwave/parallel.hpp"
#include "xlwave/rank.hpp"
#include "xlwave/reference.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace xlwave
{
    enum class ScatterMode
    {
        none,
        two_symmetric,     // (r/2, theta +- zeta), common gain and phase
        random_semicircle, // L scatterers, radius and angle uniform inside the half-disk of radius r
    };

    enum class TrialMetric
    {
        power,
        erank,
    };

    enum class Aggregation
    {
        per_trial,      // solve every realisation, average the thresholds
        pointwise_mean, // average mu(r) over realisations, solve once
    };

    inline std::string_view to_string(ScatterMode m)
    {
        switch (m)
        {
        case ScatterMode::none: return "none";
        case ScatterMode::two_symmetric: return "two_symmetric";
        case ScatterMode::random_semicircle: return "random_semicircle";
        }
        return "unknown";
    }

    inline std::string_view to_string(TrialMetric m) { return m == TrialMetric::power ? "power" : "erank"; }
    inline std::string_view to_string(Aggregation a) { return a == Aggregation::per_trial ? "per_trial" : "pointwise_mean"; }

    struct TrialConfig
    {
        // base station and wavelength
        std::size_t n = 127;
        double spacing = 0.005;
        double wavelength = 0.01;
        // user position (first element for MIMO)
        double theta = 0.0;
        // MIMO user array
        std::size_t m = 32;
        double user_spacing = 0.005;
        double phi = 0.0;
        // multipath
        ScatterMode mode = ScatterMode::random_semicircle;
        std::size_t scatterers = 7;   // random_semicircle only
        double zeta = deg2rad(5.0);   // two_symmetric only
        double magnitude = 0.5;       // |alpha| (or |beta|) in two_symmetric mode
        bool los = true;
        bool freeze = false;          // keep scatterer positions at freeze_distance instead of following r
        double freeze_distance = 0.0;
        // run control
        std::size_t trials = 100;
        std::uint64_t seed = 1;
        TrialMetric metric = TrialMetric::power;
        Aggregation aggregation = Aggregation::per_trial;
        PowerDeltas band{};           // power: threshold is the outermost exit from [below, above]
        double rank_offset = 0.05;    // erank: solve erank = Xi + offset
        double r_max = 0.0;           // 0 selects ten Rayleigh distances
        SolverOptions solver{400, 6.0, 1e-6, ScanMode::outermost, false, 100};
    };

    // ---------------------------------------------------------------- random numbers

    // splitmix64 finaliser, used to derive independent per-trial seeds.
    inline std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    // Substream of trial `trial`: independent of how many trials run or in what order.
    class TrialRng
    {
    public:
        TrialRng(std::uint64_t seed, std::uint64_t trial) : engine_(splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x632BE59BD9B4E019ull))) {}

        // Uniform on the open interval (0, 1), built from the top 53 bits.
        double open01() { return (double(engine_() >> 11) + 0.5) * 0x1.0p-53; }
        double uniform(double a, double b) { return a + (b - a) * open01(); }

    private:
        std::mt19937_64 engine_;
    };

    // Scale-free description of one realisation; positions are rescaled by the probed distance.
    struct UnitScatterer
    {
        double radius_fraction = 0.5; // of r
        double angle = 0.0;           // radians
        cdouble gain{0.0, 0.0};
    };

    inline std::vector<UnitScatterer> draw_unit_scatterers(const TrialConfig &cfg, std::uint64_t trial)
    {
        TrialRng rng(cfg.seed, trial);
        std::vector<UnitScatterer> out;
        switch (cfg.mode)
        {
        case ScatterMode::none:
            break;
        case ScatterMode::two_symmetric:
        {
            const cdouble g = std::polar(cfg.magnitude, rng.uniform(-pi, pi));
            out.push_back({0.5, cfg.theta + cfg.zeta, g});
            out.push_back({0.5, cfg.theta - cfg.zeta, g});
            break;
        }
        case ScatterMode::random_semicircle:
            for (std::size_t l = 0; l < cfg.scatterers; ++l)
            {
                UnitScatterer s;
                s.radius_fraction = rng.open01();
                s.angle = rng.uniform(-pi / 2.0, pi / 2.0);
                const double mag = rng.open01();
                s.gain = std::polar(mag, rng.uniform(-pi, pi));
                out.push_back(s);
            }
            break;
        }
        return out;
    }

    inline ScattererSet realise_scatterers(std::span<const UnitScatterer> unit, double r, std::uint64_t seed)
    {
        ScattererSet set;
        set.seed = seed;
        for (const auto &u : unit)
            set.scatterers.push_back({PolarPoint::checked({u.radius_fraction * r, 0.0, u.angle}), u.gain});
        return set;
    }

    // Scatterers of trial `trial` for a user at distance r.
    inline ScattererSet sample_scatterers(const TrialConfig &cfg, std::uint64_t trial, double r)
    {
        detail::require_positive(r, "distance r");
        const auto unit = draw_unit_scatterers(cfg, trial);
        return realise_scatterers(unit, cfg.freeze ? cfg.freeze_distance : r, cfg.seed);
    }

    // ---------------------------------------------------------------- statistics

    // Pairwise summation, independent of the order trials finished in.
    inline double pairwise_sum(std::span<const double> v)
    {
        if (v.size() <= 8)
        {
            double s = 0.0;
            for (double x : v)
                s += x;
            return s;
        }
        const std::size_t h = v.size() / 2;
        return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
    }

    struct TrialOutcome
    {
        std::uint64_t trial = 0;
        double threshold = 0.0;
        bool censored = false;
        std::size_t evaluations = 0;
        std::optional<double> baseline; // erank only
    };

    struct MonteCarloResult
    {
        double mean_threshold = 0.0;
        double stderr_threshold = 0.0;
        std::size_t censored = 0;
        double censored_fraction = 0.0;
        double r_max = 0.0;
        std::vector<TrialOutcome> per_trial; // empty for pointwise_mean aggregation
    };

    namespace detail
    {
        inline void validate(const TrialConfig &cfg)
        {
            require(cfg.trials >= 1, "trials must be at least 1");
            require(cfg.n >= 1, "N must be at least 1");
            require_positive(cfg.spacing, "spacing");
            require_positive(cfg.wavelength, "wavelength");
            require(std::abs(cfg.theta) < pi / 2.0, "theta must lie strictly inside (-90, 90) degrees");
            require(cfg.magnitude >= 0.0, "scatterer magnitude must be non-negative");
            if (cfg.freeze)
                require_positive(cfg.freeze_distance, "freeze_distance");
            if (cfg.mode == ScatterMode::none)
                require(cfg.los, "a run without scatterers needs the LoS path");
            if (cfg.mode == ScatterMode::random_semicircle && cfg.scatterers == 0)
                require(cfg.los, "a run without scatterers needs the LoS path");
        }

        inline MonteCarloResult summarise(std::vector<TrialOutcome> outcomes, double r_max)
        {
            MonteCarloResult res;
            res.r_max = r_max;
            std::vector<double> t;
            t.reserve(outcomes.size());
            for (const auto &o : outcomes)
            {
                t.push_back(o.threshold);
                res.censored += o.censored ? 1 : 0;
            }
            const double n = double(t.size());
            res.mean_threshold = pairwise_sum(t) / n;
            if (t.size() > 1)
            {
                std::vector<double> sq;
                sq.reserve(t.size());
                for (double x : t)
                    sq.push_back((x - res.mean_threshold) * (x - res.mean_threshold));
                res.stderr_threshold = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
            }
            res.censored_fraction = double(res.censored) / n;
            res.per_trial = std::move(outcomes);
            return res;
        }
    }

    // mu(r) of one realisation: MRC gain of the scattered spherical-wave channel over that of
    // the scattered plane-wave channel.
    inline double scattered_mu(const TrialConfig &cfg, std::span<const UnitScatterer> unit, double r)
    {
        const auto geom = UlaGeometry::base_station(cfg.n, cfg.spacing);
        const auto user = PolarPoint::planar(r, cfg.theta);
        const auto set = realise_scatterers(unit, cfg.freeze ? cfg.freeze_distance : r, cfg.seed);
        const auto los = cfg.los ? LosMode::with_los : LosMode::without_los;
        const double g_swm = mrc_gain(swm_channel_scattered_point(geom, user, set, cfg.wavelength, los));
        const double g_pwm = mrc_gain(pwm_channel_scattered_point(geom, user, set, cfg.wavelength, los));
        return g_swm / g_pwm;
    }

    inline double power_search_limit(const TrialConfig &cfg)
    {
        if (cfg.r_max > 0.0)
            return cfg.r_max;
        return default_search_limit(double(std::max<std::size_t>(cfg.n, 2) - 1) * cfg.spacing, cfg.wavelength);
    }

    // Band excess max(below - mu, mu - above); negative inside the band.
    inline double band_excess(double mu, const PowerDeltas &band) { return std::max(band.below - mu, mu - band.above); }

    // Threshold distance of the scattered point-to-ULA link: the outermost r at which mu leaves
    // the band. A realisation still outside the band at r_max is censored and counted as r_max.
    inline MonteCarloResult mc_threshold(const TrialConfig &cfg, std::size_t threads = 0)
    {
        detail::validate(cfg);
        detail::require(cfg.metric == TrialMetric::power, "mc_threshold solves the power metric; use mc_threshold_mimo for erank");
        const double r_max = power_search_limit(cfg);

        if (cfg.aggregation == Aggregation::pointwise_mean)
        {
            std::vector<std::vector<UnitScatterer>> draws(cfg.trials);
            for (std::size_t t = 0; t < cfg.trials; ++t)
                draws[t] = draw_unit_scatterers(cfg, t);
            auto mean_mu = [&](double r)
            {
                const auto mus = parallel_map(cfg.trials, [&](std::size_t t) { return scattered_mu(cfg, draws[t], r); }, threads);
                return pairwise_sum(mus) / double(mus.size());
            };
            auto excess = [&](double r) { return band_excess(mean_mu(r), cfg.band); };
            TrialOutcome o;
            if (excess(r_max) >= 0.0)
            {
                o.threshold = r_max;
                o.censored = true;
            }
            else
            {
                const auto b = solve_threshold(excess, 0.0, r_max, cfg.solver);
                o.threshold = b.threshold_r;
                o.evaluations = b.evaluations;
            }
            auto res = detail::summarise({o}, r_max);
            res.stderr_threshold = 0.0;
            res.per_trial.clear();
            return res;
        }

        auto outcomes = parallel_map(cfg.trials, [&](std::size_t t)
        {
            const auto unit = draw_unit_scatterers(cfg, t);
            auto excess = [&](double r) { return band_excess(scattered_mu(cfg, unit, r), cfg.band); };
            TrialOutcome o;
            o.trial = t;
            if (excess(r_max) >= 0.0)
            {
                o.threshold = r_max;
                o.censored = true;
                o.evaluations = 1;
                return o;
            }
            try
            {
                const auto b = solve_threshold(excess, 0.0, r_max, cfg.solver);
                o.threshold = b.threshold_r;
                o.evaluations = b.evaluations + 1;
            }
            catch (const NoCrossingError &)
            {
                o.threshold = 0.0; // inside the band on the whole grid
            }
            return o;
        }, threads);
        return detail::summarise(std::move(outcomes), r_max);
    }

    // ULA-to-ULA link with scatterers: per realisation, Xi is the effective rank at r_max and
    // the threshold solves erank(W) = Xi + rank_offset.
    inline MonteCarloResult mc_threshold_mimo(const TrialConfig &cfg, std::size_t threads = 0)
    {
        detail::validate(cfg);
        detail::require(cfg.m >= 2, "MIMO scenario requires M≥2");
        detail::require_positive(cfg.user_spacing, "user spacing");
        detail::require(cfg.los, "the MIMO model always carries the LoS path");
        const auto bs = UlaGeometry::base_station(cfg.n, cfg.spacing);
        const double r_max = cfg.r_max > 0.0
                                 ? cfg.r_max
                                 : default_search_limit(double(cfg.n) * cfg.spacing + double(cfg.m) * cfg.user_spacing, cfg.wavelength);

        auto outcomes = parallel_map(cfg.trials, [&](std::size_t t)
        {
            const auto unit = draw_unit_scatterers(cfg, t);
            auto erank = [&](double r)
            {
                const auto set = realise_scatterers(unit, cfg.freeze ? cfg.freeze_distance : r, cfg.seed);
                const auto user = UlaGeometry::user(cfg.m, cfg.user_spacing, PolarPoint::planar(r, cfg.theta), cfg.phi);
                return hermitian_effective_rank(gram_matrix_mimo(bs, user, cfg.wavelength, set.empty() ? nullptr : &set)).value;
            };
            TrialOutcome o;
            o.trial = t;
            const double xi = erank(r_max);
            o.baseline = xi;
            try
            {
                const auto b = solve_threshold(erank, xi + cfg.rank_offset, r_max, cfg.solver);
                o.threshold = b.threshold_r;
                o.evaluations = b.evaluations + 1;
            }
            catch (const NoCrossingError &)
            {
                o.threshold = 0.0; // below Xi + offset on the whole grid
            }
            return o;
        }, threads);
        return detail::summarise(std::move(outcomes), r_max);
    }
}

#endif
