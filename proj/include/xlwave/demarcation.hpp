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

#ifndef XLWAVE_DEMARCATION_HPP
#define XLWAVE_DEMARCATION_HPP

#include "xlwave/boundary.hpp"
#include "xlwave/montecarlo.hpp"
#include "xlwave/power.hpp"
#include "xlwave/reference.hpp"
#include "xlwave/report.hpp"

#include <string>
#include <vector>

namespace xlwave
{
    enum class Provenance
    {
        computed,
        external_literal, // quoted value without a formula; never recomputed
    };

    inline std::string_view to_string(Provenance p) { return p == Provenance::computed ? "computed" : "external_literal"; }

    struct DemarcationRow
    {
        std::string name;
        std::string formula_id;
        std::vector<double> values; // one per report column
        Provenance provenance = Provenance::computed;
        std::string citation;
    };

    struct DemarcationReport
    {
        std::string title;
        std::vector<std::string> columns;
        std::vector<DemarcationRow> rows;
    };

    // Point-to-ULA comparison. Apertures follow D = (N - 1) d; the equi-power row reports the
    // solved ratio r / (N d) times D.
    struct SisoComparison
    {
        std::size_t n = 127;
        double spacing = 0.005;
        double wavelength = 0.01;
        double eps = 0.367;
        double tenth = 0.1;
        double critical_distance = 0.70; // quoted value, formula not available
        std::string critical_citation = "lu2021does";
    };

    // ULA-to-ULA comparison, one column per user-array size. Apertures follow D = N d.
    struct MimoComparison
    {
        std::size_t n = 100;
        std::vector<std::size_t> m_values{10, 100};
        double wavelength = 0.01;
        double db = 0.005;
        double du = 0.005;
        double g = 0.99;
        double delta = 1.05;
        SolverOptions solver{};
    };

    inline DemarcationReport comparison_table(const SisoComparison &p)
    {
        detail::require(p.n >= 2, "empty scenario: the comparison needs N >= 2");
        detail::require_positive(p.spacing, "spacing");
        detail::require_positive(p.wavelength, "wavelength");
        const double d = double(p.n - 1) * p.spacing;
        const double nd = double(p.n) * p.spacing;

        DemarcationReport rep;
        rep.title = "Point-to-ULA demarcations (N=" + std::to_string(p.n) + ", lambda=" + format_double(p.wavelength) + " m, D=" +
                    format_fixed(d, 2) + " m)";
        rep.columns = {"Values (m)"};
        rep.rows.push_back({"Classical Rayleigh distance", "2D^2/lambda", {rayleigh_distance(d, p.wavelength)}});
        rep.rows.push_back({"Critical distance", "literal", {p.critical_distance}, Provenance::external_literal, p.critical_citation});
        rep.rows.push_back({"Effective Rayleigh distance", "eps*2D^2/lambda", {effective_rayleigh(d, p.wavelength, p.eps)}});
        rep.rows.push_back({"One-tenth Rayleigh distance", "(1/10)*2D^2/lambda", {effective_rayleigh(d, p.wavelength, p.tenth)}});

        const double r_max = default_search_limit(d, p.wavelength);
        const auto b = solve_threshold([&](double r) { return mu_ula_closed(nd, r, 0.0).value; }, 0.99, r_max);
        rep.rows.push_back({"Equi-power line (LoS, no scatterers)", "(r/Nd)*D", {b.threshold_r / nd * d}});
        return rep;
    }

    inline void add_monte_carlo_row(DemarcationReport &rep, const std::string &name, const MonteCarloResult &mc)
    {
        detail::require(rep.columns.size() == 1, "Monte Carlo rows apply to single-column reports");
        rep.rows.push_back({name, "monte_carlo_mean", {mc.mean_threshold}});
    }

    inline DemarcationReport comparison_table(const MimoComparison &p, std::size_t threads = 0)
    {
        detail::require(!p.m_values.empty(), "empty scenario: no user-array sizes given");
        detail::require(p.n >= 2, "empty scenario: the comparison needs N >= 2");
        for (auto m : p.m_values)
            detail::require(m >= 2, "MIMO scenario requires M≥2");

        DemarcationReport rep;
        rep.title = "ULA-to-ULA demarcations (N=" + std::to_string(p.n) + ", lambda=" + format_double(p.wavelength) + " m)";
        DemarcationRow rayleigh{"Classical Rayleigh distance", "2(D1+D2)^2/lambda", {}};
        DemarcationRow eig{"Largest-eigenvalue distance", "sqrt((N^2-1)(M-1)^2 pi^2/(6M(1-g)))*du*db/lambda", {}};
        DemarcationRow erank{"Equi-rank surface", "erank(W)=delta", {}};
        for (auto m : p.m_values)
        {
            rep.columns.push_back("M=" + std::to_string(m));
            rayleigh.values.push_back(rayleigh_distance_mimo(double(p.n) * p.db, double(m) * p.du, p.wavelength));
            eig.values.push_back(largest_eigenvalue_distance(p.n, m, p.du, p.db, p.wavelength, p.g));
        }
        const auto thresholds = parallel_map(p.m_values.size(), [&](std::size_t i)
        {
            UlaLinkConfig c;
            c.n = p.n;
            c.m = p.m_values[i];
            c.wavelength = p.wavelength;
            c.db = p.db;
            c.du = p.du;
            return equi_rank_threshold(ula_link_erank(c), ula_link_search_limit(c), RankTarget{p.delta}, p.solver).threshold_r;
        }, threads);
        erank.values = thresholds;
        rep.rows = {rayleigh, eig, erank};
        return rep;
    }

    inline std::string to_markdown(const DemarcationReport &rep, int digits = 2)
    {
        std::string out = "### " + rep.title + "\n\n| Demarcation |";
        for (const auto &c : rep.columns)
            out += " " + c + " |";
        out += "\n|---|";
        for (std::size_t i = 0; i < rep.columns.size(); ++i)
            out += "---:|";
        out += "\n";
        for (const auto &r : rep.rows)
        {
            std::string name = r.name;
            if (!r.citation.empty())
                name += " [" + r.citation + "]";
            out += "| " + name + " |";
            for (double v : r.values)
                out += " " + format_fixed(v, digits) + " |";
            out += "\n";
        }
        return out;
    }

    inline std::string to_csv(const DemarcationReport &rep)
    {
        CsvTable t({"name", "formula_id", "column", "value", "provenance", "citation"});
        for (const auto &r : rep.rows)
            for (std::size_t i = 0; i < r.values.size(); ++i)
                t.add_row({r.name, r.formula_id, rep.columns.at(i), format_double(r.values[i]), std::string(to_string(r.provenance)), r.citation});
        return t.str();
    }
}

#endif
