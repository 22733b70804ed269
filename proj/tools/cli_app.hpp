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

// Command-line front end. Kept in a header so the test suite can drive it in-process.

#ifndef XLWAVE_TOOLS_CLI_APP_HPP
#define XLWAVE_TOOLS_CLI_APP_HPP

#include "xlwave/xlwave.hpp"

#ifdef XLWAVE_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace xlwave::cli
{
    enum ExitCode : int
    {
        exit_ok = 0,
        exit_io = 1,
        exit_usage = 2,
        exit_numerical = 3,
    };

    // Invalid flag value; the message names the flag.
    class UsageError : public std::invalid_argument
    {
    public:
        UsageError(const std::string &flag, const std::string &what) : std::invalid_argument(flag + ": " + what) {}
    };

    // "a:b:step" (inclusive, degrees) or a single value.
    inline std::vector<double> parse_angle_grid(const std::string &flag, const std::string &spec)
    {
        std::vector<double> out;
        const auto parts = xlwave::detail::split_commas(spec);
        if (spec.find(':') == std::string::npos)
        {
            for (const auto &p : parts)
            {
                try
                {
                    out.push_back(parse_double(p));
                }
                catch (const std::invalid_argument &)
                {
                    throw UsageError(flag, "expected a number or start:stop:step, got '" + spec + "'");
                }
            }
            return out;
        }
        std::vector<double> f;
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ':'))
        {
            try
            {
                f.push_back(parse_double(tok));
            }
            catch (const std::invalid_argument &)
            {
                throw UsageError(flag, "expected start:stop:step, got '" + spec + "'");
            }
        }
        if (f.size() != 3 || !(f[2] > 0.0) || f[1] < f[0])
            throw UsageError(flag, "expected start:stop:step with step > 0 and stop >= start");
        const auto count = std::size_t(std::floor((f[1] - f[0]) / f[2] + 1e-9));
        for (std::size_t k = 0; k <= count; ++k)
            out.push_back(std::round((f[0] + double(k) * f[2]) * 1e9) / 1e9);
        return out;
    }

    inline std::vector<double> parse_list(const std::string &flag, const std::string &spec)
    {
        std::vector<double> out;
        for (const auto &p : xlwave::detail::split_commas(spec))
        {
            try
            {
                out.push_back(parse_double(p));
            }
            catch (const std::invalid_argument &)
            {
                throw UsageError(flag, "expected a comma-separated list of numbers, got '" + spec + "'");
            }
        }
        if (out.empty())
            throw UsageError(flag, "list is empty");
        return out;
    }

    // "rmin:rmax:count", log-spaced.
    inline std::vector<double> parse_log_grid(const std::string &flag, const std::string &spec)
    {
        std::vector<double> f;
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ':'))
            f.push_back(parse_double(tok));
        if (f.size() != 3 || !(f[0] > 0.0) || !(f[1] > f[0]) || !(f[2] >= 2.0))
            throw UsageError(flag, "expected rmin:rmax:count with 0 < rmin < rmax and count >= 2");
        const auto n = std::size_t(f[2]);
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k)
            out[k] = f[0] * std::pow(f[1] / f[0], double(k) / double(n - 1));
        return out;
    }

    struct Io
    {
        std::ostream &out;
        std::ostream &err;
    };

    // Writes `content` to `path` (or stdout when empty) plus `<path>.manifest.json`.
    inline void emit(Io io, const std::string &path, const std::string &content, RunManifest manifest,
                     std::chrono::steady_clock::time_point start)
    {
        if (path.empty() || path == "-")
        {
            io.out << content;
            return;
        }
        write_file(path, content);
        manifest.add_output(std::filesystem::path(path).filename().string(), content);
        manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_file(path + ".manifest.json", manifest.to_json().dump(2) + "\n");
    }

    inline int run(std::vector<std::string> args, Io io);

    namespace detail
    {
        struct Common
        {
            std::string out;
            std::size_t threads = 0;
        };

        inline void add_common(CLI::App *sub, Common &c)
        {
            sub->add_option("-o,--out", c.out, "Output file (stdout when omitted); a manifest is written next to it");
            sub->add_option("--threads", c.threads, "Worker threads (default: XLWAVE_THREADS or all cores)");
        }

        inline SolverOptions solver_options(std::size_t ppd, double decades, const std::string &scan)
        {
            SolverOptions s;
            if (ppd == 0)
                throw UsageError("--ppd", "must be at least 1");
            if (!(decades > 0.0))
                throw UsageError("--decades", "must be positive");
            s.points_per_decade = ppd;
            s.decades = decades;
            if (scan == "full")
                s.scan = ScanMode::full;
            else if (scan == "outermost")
                s.scan = ScanMode::outermost;
            else
                throw UsageError("--scan", "expected full or outermost");
            return s;
        }

        inline std::string opt_value(const std::optional<double> &v) { return v ? format_double(*v) : std::string{}; }

        // Turns `montecarlo --config FILE` into explicit flags placed before the command-line ones,
        // so anything given on the command line wins.
        inline std::vector<std::string> expand_config(CLI::App *sub, std::vector<std::string> args)
        {
            if (args.empty() || args.front() != sub->get_name())
                return args;
            std::string path;
            for (std::size_t i = 1; i < args.size(); ++i)
            {
                if (args[i] == "--config" && i + 1 < args.size())
                    path = args[i + 1];
                else if (args[i].rfind("--config=", 0) == 0)
                    path = args[i].substr(9);
            }
            if (path.empty())
                return args;
            std::vector<CLI::ConfigItem> items;
            try
            {
                items = CLI::ConfigINI().from_file(path);
            }
            catch (const CLI::FileError &)
            {
                throw UsageError("--config", "cannot read '" + path + "'");
            }
            std::vector<std::string> injected;
            for (const auto &it : items)
            {
                if (!it.parents.empty() && !(it.parents.size() == 1 && it.parents.front() == sub->get_name()))
                    throw UsageError("--config", "unknown section '" + it.parents.front() + "'");
                if (it.name == "++" || it.name == "--")
                    continue;
                const std::string flag = "--" + it.name;
                const auto *opt = sub->get_option_no_throw(flag);
                if (opt == nullptr || it.name == "config" || it.name == "out")
                    throw UsageError("--config", "unknown key '" + it.name + "'");
                if (opt->get_expected_min() == 0)
                {
                    if (it.inputs.size() != 1 || (it.inputs[0] != "true" && it.inputs[0] != "false"))
                        throw UsageError("--config", "key '" + it.name + "' expects true or false");
                    if (it.inputs[0] == "true")
                        injected.push_back(flag);
                    continue;
                }
                std::string value;
                for (const auto &v : it.inputs)
                    value += (value.empty() ? "" : ",") + v;
                injected.push_back(flag);
                injected.push_back(value);
            }
            args.insert(args.begin() + 1, injected.begin(), injected.end());
            return args;
        }
    }

    inline int run(std::vector<std::string> args, Io io)
    {
        const auto start = std::chrono::steady_clock::now();
        const std::vector<std::string> original = args;

        CLI::App app{"Near-field / far-field demarcation toolkit for extremely large arrays", "xlwave"};
        app.set_version_flag("--version", std::string(version));
        app.require_subcommand(1);

        // ---------------------------------------------------------------- equi-power
        auto *ep = app.add_subcommand("equi-power", "Equi-power line (ULA) or surface (planar arrays)");
        detail::Common ep_common;
        std::string ep_scenario = "ula", ep_theta, ep_theta_grid, ep_phi, ep_varphi, ep_phi_grid, ep_varphi_grid;
        std::string ep_delta = "0.99,1.01", ep_method = "closed", ep_scan = "full";
        std::size_t ep_n = 127, ep_nz = 0, ep_ppd = 400;
        double ep_lambda = 0.0, ep_spacing = 0.0, ep_spacing_z = 0.0, ep_decades = 6.0;
        ep->add_option("--scenario", ep_scenario, "ula, ucpa, uspa, urpa or uepa")->capture_default_str();
        ep->add_option("--n", ep_n, "Elements (ULA) or elements along Y (planar)")->capture_default_str();
        ep->add_option("--nz", ep_nz, "Elements along Z (planar; default: same as --n)");
        ep->add_option("--lambda", ep_lambda, "Wavelength in meters")->required();
        ep->add_option("--spacing", ep_spacing, "Element spacing in meters (default: lambda/2)");
        ep->add_option("--spacing-z", ep_spacing_z, "Spacing along Z (default: --spacing)");
        ep->add_option("--theta", ep_theta, "ULA incidence angle(s) in degrees, comma-separated");
        ep->add_option("--theta-grid", ep_theta_grid, "ULA angle grid start:stop:step in degrees");
        ep->add_option("--phi", ep_phi, "Elevation angle(s) in degrees");
        ep->add_option("--varphi", ep_varphi, "Azimuth angle(s) in degrees");
        ep->add_option("--phi-grid", ep_phi_grid, "Elevation grid start:stop:step in degrees");
        ep->add_option("--varphi-grid", ep_varphi_grid, "Azimuth grid start:stop:step in degrees");
        ep->add_option("--delta", ep_delta, "Thresholds below,above one")->capture_default_str();
        ep->add_option("--method", ep_method, "closed or sum")->capture_default_str();
        ep->add_option("--ppd", ep_ppd, "Solver grid points per decade")->capture_default_str();
        ep->add_option("--decades", ep_decades, "Solver grid span in decades below r_max")->capture_default_str();
        ep->add_option("--scan", ep_scan, "full or outermost")->capture_default_str();
        detail::add_common(ep, ep_common);

        // ---------------------------------------------------------------- sweep
        auto *sw = app.add_subcommand("sweep", "Normalised received power over a range of distances");
        detail::Common sw_common;
        std::string sw_scenario = "ula", sw_method = "closed", sw_grid = "0.01:100:200";
        std::size_t sw_n = 127, sw_nz = 0;
        double sw_lambda = 0.01, sw_spacing = 0.0, sw_theta = 0.0, sw_phi = 0.0, sw_varphi = 0.0;
        sw->add_option("--scenario", sw_scenario, "ula, ucpa, uspa, urpa or uepa")->capture_default_str();
        sw->add_option("--n", sw_n, "Elements (ULA) or elements along Y (planar)")->capture_default_str();
        sw->add_option("--nz", sw_nz, "Elements along Z (planar; default: same as --n)");
        sw->add_option("--lambda", sw_lambda, "Wavelength in meters")->capture_default_str();
        sw->add_option("--spacing", sw_spacing, "Element spacing in meters (default: lambda/2)");
        sw->add_option("--theta", sw_theta, "ULA incidence angle in degrees")->capture_default_str();
        sw->add_option("--phi", sw_phi, "Elevation in degrees")->capture_default_str();
        sw->add_option("--varphi", sw_varphi, "Azimuth in degrees")->capture_default_str();
        sw->add_option("--r-grid", sw_grid, "rmin:rmax:count, log-spaced")->capture_default_str();
        sw->add_option("--method", sw_method, "closed, sum or oracle")->capture_default_str();
        detail::add_common(sw, sw_common);

        // ---------------------------------------------------------------- equi-rank
        auto *er = app.add_subcommand("equi-rank", "Equi-rank threshold distance of a MIMO link");
        detail::Common er_common;
        std::string er_bs = "ula", er_theta = "0", er_phi = "0", er_varphi = "0", er_delta = "1.05", er_scan = "full";
        std::size_t er_n = 100, er_nz = 0, er_m = 100, er_ppd = 400;
        double er_lambda = 0.01, er_db = 0.0, er_du = 0.0, er_decades = 6.0;
        er->add_option("--bs", er_bs, "Base-station array: ula or upa")->capture_default_str();
        er->add_option("--n", er_n, "Base-station elements (ULA) or elements along Y (UPA)")->capture_default_str();
        er->add_option("--nz", er_nz, "UPA elements along Z (default: same as --n)");
        er->add_option("--m", er_m, "User-array elements")->capture_default_str();
        er->add_option("--lambda", er_lambda, "Wavelength in meters")->capture_default_str();
        er->add_option("--db", er_db, "Base-station spacing (default: lambda/2)");
        er->add_option("--du", er_du, "User spacing (default: lambda/2)");
        er->add_option("--theta", er_theta, "ULA link: user angle(s) in degrees, list or start:stop:step")->capture_default_str();
        er->add_option("--phi", er_phi, "ULA link: user-array tilt; UPA link: elevation (degrees, list or grid)")->capture_default_str();
        er->add_option("--varphi", er_varphi, "UPA link: azimuth in degrees (list or grid)")->capture_default_str();
        er->add_option("--delta", er_delta, "Effective-rank threshold(s), comma-separated")->capture_default_str();
        er->add_option("--ppd", er_ppd, "Solver grid points per decade")->capture_default_str();
        er->add_option("--decades", er_decades, "Solver grid span in decades below r_max")->capture_default_str();
        er->add_option("--scan", er_scan, "full or outermost")->capture_default_str();
        detail::add_common(er, er_common);

        // ---------------------------------------------------------------- montecarlo
        auto *mc = app.add_subcommand("montecarlo", "Threshold distance averaged over random scatterer realisations");
        detail::Common mc_common;
        TrialConfig mc_cfg;
        std::string mc_mode = "semicircle", mc_metric = "power", mc_agg = "per-trial", mc_band = "0.99,1.01";
        double mc_spacing = 0.0, mc_user_spacing = 0.0, mc_theta = 0.0, mc_phi = 0.0, mc_zeta = 5.0, mc_freeze = 0.0;
        bool mc_nlos = false;
        mc->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        std::string mc_config;
        mc->add_option("--config", mc_config, "Key-value configuration file (keys are the long option names)");
        mc->add_option("--n", mc_cfg.n, "Base-station elements")->capture_default_str();
        mc->add_option("--m", mc_cfg.m, "User-array elements (erank metric)")->capture_default_str();
        mc->add_option("--lambda", mc_cfg.wavelength, "Wavelength in meters")->capture_default_str();
        mc->add_option("--spacing", mc_spacing, "Base-station spacing (default: lambda/2)");
        mc->add_option("--user-spacing", mc_user_spacing, "User spacing (default: lambda/2)");
        mc->add_option("--theta", mc_theta, "User angle in degrees")->capture_default_str();
        mc->add_option("--phi", mc_phi, "User-array tilt in degrees (erank metric)")->capture_default_str();
        mc->add_option("--mode", mc_mode, "semicircle, two-symmetric or none")->capture_default_str();
        mc->add_option("--scatterers", mc_cfg.scatterers, "Scatterers in semicircle mode")->capture_default_str();
        mc->add_option("--zeta", mc_zeta, "Angular offset of the symmetric pair in degrees")->capture_default_str();
        mc->add_option("--magnitude", mc_cfg.magnitude, "Gain magnitude of the symmetric pair")->capture_default_str();
        mc->add_flag("--nlos", mc_nlos, "Drop the line-of-sight path");
        mc->add_option("--freeze", mc_freeze, "Keep scatterers at this distance instead of following r");
        mc->add_option("--trials", mc_cfg.trials, "Realisations")->capture_default_str();
        mc->add_option("--seed", mc_cfg.seed, "Random seed")->capture_default_str();
        mc->add_option("--metric", mc_metric, "power or erank")->capture_default_str();
        mc->add_option("--aggregation", mc_agg, "per-trial or pointwise-mean")->capture_default_str();
        mc->add_option("--band", mc_band, "Power band below,above")->capture_default_str();
        mc->add_option("--rank-offset", mc_cfg.rank_offset, "erank target above the far-field value")->capture_default_str();
        mc->add_option("--r-max", mc_cfg.r_max, "Search ceiling in meters (default: ten Rayleigh distances)");
        detail::add_common(mc, mc_common);

        // ---------------------------------------------------------------- beampattern
        auto *bp = app.add_subcommand("beampattern", "MRC beam pattern of far-field weights at several distances");
        detail::Common bp_common;
        std::size_t bp_n = 127;
        double bp_lambda = 0.01, bp_spacing = 0.0, bp_theta = 0.0;
        std::string bp_distances = "79.38,1.80", bp_grid = "-90:90:0.1";
        bp->add_option("--n", bp_n, "Elements")->capture_default_str();
        bp->add_option("--lambda", bp_lambda, "Wavelength in meters")->capture_default_str();
        bp->add_option("--spacing", bp_spacing, "Element spacing (default: lambda/2)");
        bp->add_option("--theta", bp_theta, "Steering angle of the weights in degrees")->capture_default_str();
        bp->add_option("--distances", bp_distances, "Probe distances in meters, comma-separated")->capture_default_str();
        bp->add_option("--grid", bp_grid, "Angle grid start:stop:step in degrees")->capture_default_str();
        detail::add_common(bp, bp_common);

        // ---------------------------------------------------------------- compare
        auto *cmp = app.add_subcommand("compare", "Comparison table of demarcation distances");
        detail::Common cmp_common;
        std::string cmp_table = "ula", cmp_format = "markdown", cmp_m = "10,100";
        std::size_t cmp_n = 0, cmp_trials = 0;
        std::uint64_t cmp_seed = 1;
        double cmp_lambda = 0.01;
        cmp->add_option("--table", cmp_table, "ula (point-to-ULA) or ula-ula")->capture_default_str();
        cmp->add_option("--format", cmp_format, "markdown or csv")->capture_default_str();
        cmp->add_option("--n", cmp_n, "Base-station elements (default: 127 for ula, 100 for ula-ula)");
        cmp->add_option("--m-values", cmp_m, "User-array sizes for ula-ula")->capture_default_str();
        cmp->add_option("--lambda", cmp_lambda, "Wavelength in meters")->capture_default_str();
        cmp->add_option("--mc-trials", cmp_trials, "Add Monte Carlo rows with this many trials (ula table)")->capture_default_str();
        cmp->add_option("--seed", cmp_seed, "Monte Carlo seed")->capture_default_str();
        detail::add_common(cmp, cmp_common);

        // ---------------------------------------------------------------- replay
        auto *rp = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
        std::string rp_manifest, rp_dir;
        rp->add_option("manifest", rp_manifest, "Manifest JSON written next to an output")->required();
        rp->add_option("--out-dir", rp_dir, "Directory for the regenerated output (default: system temp)");

        try
        {
            args = detail::expand_config(mc, std::move(args));
            std::reverse(args.begin(), args.end());
            app.parse(args);
        }
        catch (const CLI::Success &e)
        {
            return app.exit(e, io.out, io.err);
        }
        catch (const CLI::ParseError &e)
        {
            io.err << "error: " << e.what() << "\n";
            return exit_usage;
        }
        catch (const UsageError &e)
        {
            io.err << "error: " << e.what() << "\n";
            return exit_usage;
        }

        RunManifest manifest;
        manifest.argv = original;
        try
        {
            // ------------------------------------------------------------ equi-power
            if (ep->parsed())
            {
                manifest.command = "equi-power";
                if (!(ep_lambda > 0.0))
                    throw UsageError("--lambda", "must be positive");
                const double spacing = ep_spacing > 0.0 ? ep_spacing : ep_lambda / 2.0;
                const auto deltas = parse_list("--delta", ep_delta);
                if (deltas.size() != 2 || !(deltas[0] < 1.0) || !(deltas[1] > 1.0))
                    throw UsageError("--delta", "expected below,above with below < 1 < above");
                if (ep_method != "closed" && ep_method != "sum")
                    throw UsageError("--method", "expected closed or sum");
                const auto eval = ep_method == "closed" ? PowerEvaluator::closed_form : PowerEvaluator::finite_sum;
                const auto solver = detail::solver_options(ep_ppd, ep_decades, ep_scan);
                Scenario sc;
                try
                {
                    sc = parse_scenario(ep_scenario);
                }
                catch (const std::invalid_argument &)
                {
                    throw UsageError("--scenario", "expected ula, ucpa, uspa, urpa or uepa");
                }
                if (ep_n < 1)
                    throw UsageError("--n", "must be at least 1");
                manifest.params = {{"scenario", ep_scenario}, {"n", ep_n}, {"lambda", ep_lambda}, {"spacing", spacing},
                                   {"delta", deltas}, {"method", ep_method}, {"ppd", ep_ppd}, {"decades", ep_decades}, {"scan", ep_scan}};

                CsvTable table({"scenario", "theta_deg", "phi_deg", "varphi_deg", "regime", "delta", "threshold_r", "r_over_aperture",
                                "crossing", "crossings", "evaluations", "verified", "status", "method"});
                auto row = [&](const EquiPowerSample &s, double aperture, std::string th, std::string ph, std::string vp)
                {
                    const bool ok = s.status == "ok";
                    table.add_row({ep_scenario, th, ph, vp, ok || s.status == "no_crossing" ? std::string(to_string(s.regime)) : "",
                                   ok ? format_double(s.result.delta) : "", ok ? format_double(s.result.threshold_r) : "",
                                   ok ? format_double(s.result.threshold_r / aperture) : "", ok ? std::string(to_string(s.result.crossing)) : "",
                                   ok ? std::to_string(s.result.crossings) : "", ok ? std::to_string(s.result.evaluations) : "",
                                   ok ? (s.result.verified ? "true" : "false") : "", s.status, ep_method});
                };

                if (sc == Scenario::ula)
                {
                    std::vector<double> thetas_deg;
                    if (!ep_theta_grid.empty())
                        thetas_deg = parse_angle_grid("--theta-grid", ep_theta_grid);
                    else if (!ep_theta.empty())
                        thetas_deg = parse_angle_grid("--theta", ep_theta);
                    else
                        thetas_deg = {0.0};
                    std::vector<double> thetas;
                    for (double t : thetas_deg)
                    {
                        if (std::abs(t) > 90.0)
                            throw UsageError("--theta", "angles must lie within [-90, 90] degrees");
                        thetas.push_back(deg2rad(t));
                    }
                    const auto geom = UlaGeometry::base_station(ep_n, spacing);
                    const auto res = equi_power_line(geom, ep_lambda, thetas, {deltas[0], deltas[1]}, eval, solver, ep_common.threads);
                    for (std::size_t i = 0; i < res.size(); ++i)
                        row(res[i], geom.length(), format_double(thetas_deg[i]), "", "");
                }
                else
                {
                    const std::size_t nz = ep_nz ? ep_nz : ep_n;
                    const double sz = ep_spacing_z > 0.0 ? ep_spacing_z : spacing;
                    PlanarShape shape = PlanarShape::rectangular;
                    if (sc == Scenario::ucpa)
                        shape = PlanarShape::circular;
                    else if (sc == Scenario::uepa)
                        shape = PlanarShape::elliptical;
                    if ((sc == Scenario::ucpa || sc == Scenario::uspa) && std::abs(double(nz) * sz - double(ep_n) * spacing) > 1e-12)
                        throw UsageError("--nz", "this scenario needs equal extents along Y and Z");
                    const auto geom = UpaGeometry::make(ep_n, nz, spacing, sz, shape);
                    const auto phis = !ep_phi_grid.empty() ? parse_angle_grid("--phi-grid", ep_phi_grid)
                                                           : parse_angle_grid("--phi", ep_phi.empty() ? "0" : ep_phi);
                    const auto varphis = !ep_varphi_grid.empty() ? parse_angle_grid("--varphi-grid", ep_varphi_grid)
                                                                 : parse_angle_grid("--varphi", ep_varphi.empty() ? "0" : ep_varphi);
                    std::vector<std::pair<double, double>> angles;
                    for (double p : phis)
                        for (double v : varphis)
                        {
                            if (std::abs(p) > 90.0 || std::abs(v) > 90.0)
                                throw UsageError("--phi", "angles must lie within [-90, 90] degrees");
                            angles.emplace_back(deg2rad(p), deg2rad(v));
                        }
                    const auto res = equi_power_surface(geom, ep_lambda, angles, {deltas[0], deltas[1]}, eval, solver, ep_common.threads);
                    std::size_t i = 0;
                    for (double p : phis)
                        for (double v : varphis)
                            row(res[i++], geom.width(), "", format_double(p), format_double(v));
                }
                emit(io, ep_common.out, table.str(), manifest, start);
                return exit_ok;
            }

            // ------------------------------------------------------------ sweep
            if (sw->parsed())
            {
                manifest.command = "sweep";
                if (!(sw_lambda > 0.0))
                    throw UsageError("--lambda", "must be positive");
                Scenario sc;
                try
                {
                    sc = parse_scenario(sw_scenario);
                }
                catch (const std::invalid_argument &)
                {
                    throw UsageError("--scenario", "expected ula, ucpa, uspa, urpa or uepa");
                }
                if (sw_method != "closed" && sw_method != "sum" && sw_method != "oracle")
                    throw UsageError("--method", "expected closed, sum or oracle");
                const double spacing = sw_spacing > 0.0 ? sw_spacing : sw_lambda / 2.0;
                const auto rs = parse_log_grid("--r-grid", sw_grid);
                const std::size_t nz = sw_nz ? sw_nz : sw_n;
                const double th = deg2rad(sw_theta), ph = deg2rad(sw_phi), vp = deg2rad(sw_varphi);
                manifest.params = {{"scenario", sw_scenario}, {"n", sw_n}, {"nz", nz}, {"lambda", sw_lambda}, {"spacing", spacing},
                                   {"theta_deg", sw_theta}, {"phi_deg", sw_phi}, {"varphi_deg", sw_varphi}, {"r_grid", sw_grid},
                                   {"method", sw_method}};
                const double ly = double(sw_n) * spacing, lz = double(nz) * spacing;
                const auto ula = UlaGeometry::base_station(sw_n, spacing);
                const auto upa = UpaGeometry::make(sw_n, nz, spacing, spacing);
                const auto mus = parallel_map(rs.size(), [&](std::size_t i)
                {
                    const double r = rs[i];
                    if (sc == Scenario::ula)
                    {
                        if (sw_method == "closed")
                            return mu_ula_closed(ly, r, th);
                        if (sw_method == "sum")
                            return mu_ula_sum(ula, PolarPoint::planar(r, th));
                        return mu_integral_oracle(sc, ly, ly, r, 0.0, th);
                    }
                    if (sw_method == "oracle")
                        return mu_integral_oracle(sc, ly, lz, r, ph, vp);
                    if (sw_method == "closed")
                    {
                        if (sc == Scenario::ucpa)
                            return mu_ucpa_closed(ly, r, ph, vp);
                        if (sc == Scenario::uepa && ph == 0.0 && vp == 0.0)
                            return mu_uepa_broadside_closed(ly, lz, r);
                        throw UsageError("--method", "no closed form for this scenario and angle; use sum or oracle");
                    }
                    auto p = mu_upa_sum(upa, PolarPoint::spatial(r, ph, vp));
                    p.scenario = sc;
                    return p;
                }, sw_common.threads);
                CsvTable table({"scenario", "r", "theta_deg", "phi_deg", "varphi_deg", "mu", "method"});
                for (std::size_t i = 0; i < rs.size(); ++i)
                    table.add_row({sw_scenario, format_double(rs[i]), sc == Scenario::ula ? format_double(sw_theta) : "",
                                   sc == Scenario::ula ? "" : format_double(sw_phi), sc == Scenario::ula ? "" : format_double(sw_varphi),
                                   format_double(mus[i].value), std::string(to_string(mus[i].method))});
                emit(io, sw_common.out, table.str(), manifest, start);
                return exit_ok;
            }

            // ------------------------------------------------------------ equi-rank
            if (er->parsed())
            {
                manifest.command = "equi-rank";
                if (er_m < 2)
                    throw UsageError("--m", "MIMO scenario requires M≥2");
                if (er_n < 2)
                    throw UsageError("--n", "MIMO scenario requires N≥2");
                if (!(er_lambda > 0.0))
                    throw UsageError("--lambda", "must be positive");
                if (er_bs != "ula" && er_bs != "upa")
                    throw UsageError("--bs", "expected ula or upa");
                const double db = er_db > 0.0 ? er_db : er_lambda / 2.0;
                const double du = er_du > 0.0 ? er_du : er_lambda / 2.0;
                const auto deltas = parse_list("--delta", er_delta);
                for (double d : deltas)
                    if (!(d > 1.0))
                        throw UsageError("--delta", "thresholds must exceed one");
                const auto solver = detail::solver_options(er_ppd, er_decades, er_scan);
                const std::size_t nz = er_nz ? er_nz : er_n;
                manifest.params = {{"bs", er_bs}, {"n", er_n}, {"nz", nz}, {"m", er_m}, {"lambda", er_lambda}, {"db", db}, {"du", du},
                                   {"theta", er_theta}, {"phi", er_phi}, {"varphi", er_varphi}, {"delta", deltas},
                                   {"ppd", er_ppd}, {"decades", er_decades}, {"scan", er_scan}};

                struct Job
                {
                    double a_deg, b_deg, delta;
                };
                std::vector<Job> jobs;
                const auto as = parse_angle_grid(er_bs == "ula" ? "--theta" : "--phi", er_bs == "ula" ? er_theta : er_phi);
                const auto bs_ = parse_angle_grid(er_bs == "ula" ? "--phi" : "--varphi", er_bs == "ula" ? er_phi : er_varphi);
                for (double a : as)
                    for (double b : bs_)
                        for (double d : deltas)
                        {
                            if (std::abs(a) >= 90.0 || std::abs(b) >= 90.0)
                                throw UsageError(er_bs == "ula" ? "--theta" : "--phi", "angles must lie strictly inside (-90, 90) degrees");
                            jobs.push_back({a, b, d});
                        }

                const bool inner_parallel = jobs.size() == 1;
                const auto results = parallel_map(jobs.size(), [&](std::size_t i)
                {
                    const auto &j = jobs[i];
                    std::optional<double> analytic;
                    const bool tabulated = std::any_of(rank_anchor_table.begin(), rank_anchor_table.end(),
                                                       [&](const auto &p) { return std::abs(p.first - j.delta) < 1e-9; });
                    if (er_bs == "ula")
                    {
                        UlaLinkConfig c{er_n, er_m, er_lambda, db, du, deg2rad(j.a_deg), deg2rad(j.b_deg)};
                        if (tabulated && er_n > 6 && er_m > 6)
                            analytic = equi_rank_angle_ula_ula(equi_rank_r1_scaling(er_lambda, er_n, er_m, db, du, rank_anchor(j.delta)),
                                                               c.theta, c.phi);
                        return std::pair{equi_rank_threshold(ula_link_erank(c), ula_link_search_limit(c), RankTarget{j.delta}, solver), analytic};
                    }
                    UpaLinkConfig c;
                    c.ny = er_n;
                    c.nz = nz;
                    c.m = er_m;
                    c.wavelength = er_lambda;
                    c.dy = c.dz = db;
                    c.du = du;
                    c.phi = deg2rad(j.a_deg);
                    c.varphi = deg2rad(j.b_deg);
                    if (tabulated && er_n > 6 && er_m > 6)
                        analytic = equi_rank_bound_ula_upa(equi_rank_r1_scaling_upa(er_lambda, er_n, er_m, db, du, rank_anchor(j.delta)),
                                                           c.phi, c.varphi);
                    return std::pair{equi_rank_threshold(upa_link_erank(c), upa_link_search_limit(c), RankTarget{j.delta}, solver), analytic};
                }, inner_parallel ? 1 : er_common.threads);

                CsvTable table({"bs", er_bs == "ula" ? "theta_deg" : "phi_deg", er_bs == "ula" ? "phi_deg" : "varphi_deg", "delta",
                                "threshold_r", "analytic_r", "crossing", "crossings", "evaluations", "verified"});
                for (std::size_t i = 0; i < jobs.size(); ++i)
                {
                    const auto &[b, analytic] = results[i];
                    table.add_row({er_bs, format_double(jobs[i].a_deg), format_double(jobs[i].b_deg), format_double(jobs[i].delta),
                                   format_double(b.threshold_r), detail::opt_value(analytic), std::string(to_string(b.crossing)),
                                   std::to_string(b.crossings), std::to_string(b.evaluations), b.verified ? "true" : "false"});
                }
                emit(io, er_common.out, table.str(), manifest, start);
                return exit_ok;
            }

            // ------------------------------------------------------------ montecarlo
            if (mc->parsed())
            {
                manifest.command = "montecarlo";
                if (mc_cfg.trials < 1)
                    throw UsageError("--trials", "must be at least 1");
                if (!(mc_cfg.wavelength > 0.0))
                    throw UsageError("--lambda", "must be positive");
                mc_cfg.spacing = mc_spacing > 0.0 ? mc_spacing : mc_cfg.wavelength / 2.0;
                mc_cfg.user_spacing = mc_user_spacing > 0.0 ? mc_user_spacing : mc_cfg.wavelength / 2.0;
                if (std::abs(mc_theta) >= 90.0)
                    throw UsageError("--theta", "must lie strictly inside (-90, 90) degrees");
                mc_cfg.theta = deg2rad(mc_theta);
                mc_cfg.phi = deg2rad(mc_phi);
                mc_cfg.zeta = deg2rad(mc_zeta);
                mc_cfg.los = !mc_nlos;
                if (mc_freeze > 0.0)
                {
                    mc_cfg.freeze = true;
                    mc_cfg.freeze_distance = mc_freeze;
                }
                if (mc_mode == "semicircle")
                    mc_cfg.mode = ScatterMode::random_semicircle;
                else if (mc_mode == "two-symmetric")
                    mc_cfg.mode = ScatterMode::two_symmetric;
                else if (mc_mode == "none")
                    mc_cfg.mode = ScatterMode::none;
                else
                    throw UsageError("--mode", "expected semicircle, two-symmetric or none");
                if (mc_metric == "power")
                    mc_cfg.metric = TrialMetric::power;
                else if (mc_metric == "erank")
                    mc_cfg.metric = TrialMetric::erank;
                else
                    throw UsageError("--metric", "expected power or erank");
                if (mc_agg == "per-trial")
                    mc_cfg.aggregation = Aggregation::per_trial;
                else if (mc_agg == "pointwise-mean")
                    mc_cfg.aggregation = Aggregation::pointwise_mean;
                else
                    throw UsageError("--aggregation", "expected per-trial or pointwise-mean");
                const auto band = parse_list("--band", mc_band);
                if (band.size() != 2 || !(band[0] < 1.0) || !(band[1] > 1.0))
                    throw UsageError("--band", "expected below,above with below < 1 < above");
                mc_cfg.band = {band[0], band[1]};
                if (mc_cfg.metric == TrialMetric::erank && mc_cfg.m < 2)
                    throw UsageError("--m", "MIMO scenario requires M≥2");

                const auto res = mc_cfg.metric == TrialMetric::power ? mc_threshold(mc_cfg, mc_common.threads)
                                                                     : mc_threshold_mimo(mc_cfg, mc_common.threads);
                manifest.seed = mc_cfg.seed;
                manifest.params = {{"n", mc_cfg.n}, {"m", mc_cfg.m}, {"lambda", mc_cfg.wavelength}, {"spacing", mc_cfg.spacing},
                                   {"user_spacing", mc_cfg.user_spacing}, {"theta_deg", mc_theta}, {"phi_deg", mc_phi}, {"mode", mc_mode},
                                   {"scatterers", mc_cfg.scatterers}, {"zeta_deg", mc_zeta}, {"magnitude", mc_cfg.magnitude},
                                   {"los", mc_cfg.los}, {"freeze", mc_freeze}, {"trials", mc_cfg.trials}, {"metric", mc_metric},
                                   {"aggregation", mc_agg}, {"band", band}, {"rank_offset", mc_cfg.rank_offset}, {"r_max", res.r_max},
                                   {"mean_threshold", res.mean_threshold}, {"stderr_threshold", res.stderr_threshold},
                                   {"censored_fraction", res.censored_fraction}};
                CsvTable table({"trial", "threshold_r", "censored", "evaluations", "baseline"});
                if (mc_cfg.aggregation == Aggregation::pointwise_mean)
                    table.add_row({"mean", format_double(res.mean_threshold), res.censored ? "true" : "false", "", ""});
                for (const auto &o : res.per_trial)
                    table.add_row({std::to_string(o.trial), format_double(o.threshold), o.censored ? "true" : "false",
                                   std::to_string(o.evaluations), detail::opt_value(o.baseline)});
                emit(io, mc_common.out, table.str(), manifest, start);
                io.err << "mean_threshold=" << format_fixed(res.mean_threshold, 4) << " stderr=" << format_fixed(res.stderr_threshold, 4)
                       << " censored_fraction=" << format_fixed(res.censored_fraction, 4) << " trials=" << mc_cfg.trials << "\n";
                return exit_ok;
            }

            // ------------------------------------------------------------ beampattern
            if (bp->parsed())
            {
                manifest.command = "beampattern";
                if (!(bp_lambda > 0.0))
                    throw UsageError("--lambda", "must be positive");
                if (std::abs(bp_theta) >= 90.0)
                    throw UsageError("--theta", "must lie strictly inside (-90, 90) degrees");
                const double spacing = bp_spacing > 0.0 ? bp_spacing : bp_lambda / 2.0;
                const auto dists = parse_list("--distances", bp_distances);
                for (double r : dists)
                    if (!(r > 0.0))
                        throw UsageError("--distances", "distances must be positive");
                const auto grid_deg = parse_angle_grid("--grid", bp_grid);
                std::vector<double> grid;
                const double edge = pi / 2.0 * (1.0 - 1e-12); // endfire probes are nudged inside the open half-plane
                for (double a : grid_deg)
                {
                    if (std::abs(a) > 90.0)
                        throw UsageError("--grid", "angles must lie within [-90, 90] degrees");
                    grid.push_back(std::clamp(deg2rad(a), -edge, edge));
                }
                const auto geom = UlaGeometry::base_station(bp_n, spacing);
                manifest.params = {{"n", bp_n}, {"lambda", bp_lambda}, {"spacing", spacing}, {"theta_deg", bp_theta},
                                   {"distances", dists}, {"grid", bp_grid}};
                const auto curves = parallel_map(dists.size(), [&](std::size_t i)
                {
                    const double r = dists[i];
                    const auto w = mrc_weights(pwm_channel_point(geom, PolarPoint::planar(r, deg2rad(bp_theta)), bp_lambda));
                    return beampattern(geom, w, [r](double a) { return PolarPoint{r, 0.0, a}; }, grid, bp_lambda);
                }, bp_common.threads);
                std::vector<std::string> header{"angle_deg"};
                for (double r : dists)
                    header.push_back("gain_db_r" + format_double(r));
                CsvTable table(header);
                for (std::size_t k = 0; k < grid.size(); ++k)
                {
                    std::vector<std::string> row{format_double(grid_deg[k])};
                    for (const auto &c : curves)
                        row.push_back(format_double(c[k].gain_db));
                    table.add_row(row);
                }
                emit(io, bp_common.out, table.str(), manifest, start);
                return exit_ok;
            }

            // ------------------------------------------------------------ compare
            if (cmp->parsed())
            {
                manifest.command = "compare";
                if (cmp_format != "markdown" && cmp_format != "csv")
                    throw UsageError("--format", "expected markdown or csv");
                if (!(cmp_lambda > 0.0))
                    throw UsageError("--lambda", "must be positive");
                DemarcationReport rep;
                if (cmp_table == "ula")
                {
                    SisoComparison p;
                    if (cmp_n)
                        p.n = cmp_n;
                    p.wavelength = cmp_lambda;
                    p.spacing = cmp_lambda / 2.0;
                    rep = comparison_table(p);
                    if (cmp_trials > 0)
                    {
                        TrialConfig c;
                        c.n = p.n;
                        c.spacing = p.spacing;
                        c.wavelength = p.wavelength;
                        c.trials = cmp_trials;
                        c.seed = cmp_seed;
                        c.scatterers = 7;
                        add_monte_carlo_row(rep, "Equi-power line (LoS, 7 scatterers)", mc_threshold(c, cmp_common.threads));
                        c.scatterers = 3;
                        c.los = false;
                        add_monte_carlo_row(rep, "Equi-power line (NLoS, 3 scatterers)", mc_threshold(c, cmp_common.threads));
                    }
                }
                else if (cmp_table == "ula-ula")
                {
                    MimoComparison p;
                    if (cmp_n)
                        p.n = cmp_n;
                    p.wavelength = cmp_lambda;
                    p.db = p.du = cmp_lambda / 2.0;
                    p.m_values.clear();
                    for (double v : parse_list("--m-values", cmp_m))
                    {
                        if (v < 2.0 || v != std::floor(v))
                            throw UsageError("--m-values", "MIMO scenario requires M≥2");
                        p.m_values.push_back(std::size_t(v));
                    }
                    rep = comparison_table(p, cmp_common.threads);
                }
                else
                    throw UsageError("--table", "expected ula or ula-ula");
                manifest.seed = cmp_seed;
                manifest.params = {{"table", cmp_table}, {"format", cmp_format}, {"n", cmp_n}, {"m_values", cmp_m},
                                   {"lambda", cmp_lambda}, {"mc_trials", cmp_trials}};
                emit(io, cmp_common.out, cmp_format == "markdown" ? to_markdown(rep) : to_csv(rep), manifest, start);
                return exit_ok;
            }

            // ------------------------------------------------------------ replay
            if (rp->parsed())
            {
                const auto m = RunManifest::from_json(nlohmann::json::parse(read_file(rp_manifest)));
                if (m.outputs.empty())
                    throw UsageError("manifest", "lists no outputs");
                namespace fs = std::filesystem;
                const fs::path dir = rp_dir.empty() ? fs::temp_directory_path() / ("xlwave-replay-" + hex64(fnv1a64(rp_manifest)))
                                                    : fs::path(rp_dir);
                fs::create_directories(dir);
                auto argv = m.argv;
                const fs::path target = dir / m.outputs.front().path;
                bool replaced = false;
                for (std::size_t i = 0; i + 1 < argv.size(); ++i)
                {
                    if (argv[i] == "--out" || argv[i] == "-o")
                    {
                        argv[i + 1] = target.string();
                        replaced = true;
                    }
                }
                if (!replaced)
                    throw UsageError("manifest", "argv has no --out");
                std::ostringstream sink;
                const int rc = run(argv, {sink, io.err});
                if (rc != exit_ok)
                    return rc;
                const auto content = read_file(target.string());
                const auto digest = hex64(fnv1a64(content));
                const bool same = digest == m.outputs.front().fnv1a64;
                io.out << (same ? "identical" : "MISMATCH") << " " << m.outputs.front().path << " " << digest << "\n";
                return same ? exit_ok : exit_numerical;
            }
        }
        catch (const UsageError &e)
        {
            io.err << "error: " << e.what() << "\n";
            return exit_usage;
        }
        catch (const NumericalError &e)
        {
            io.err << "numerical failure: " << e.what() << "\n";
            return exit_numerical;
        }
        catch (const std::domain_error &e)
        {
            io.err << "numerical failure: " << e.what() << "\n";
            return exit_numerical;
        }
        catch (const std::invalid_argument &e)
        {
            io.err << "error: " << e.what() << "\n";
            return exit_usage;
        }
        catch (const std::exception &e)
        {
            io.err << "error: " << e.what() << "\n";
            return exit_io;
        }
        return exit_usage;
    }
}

#endif
