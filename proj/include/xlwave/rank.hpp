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

#ifndef XLWAVE_RANK_HPP
#define XLWAVE_RANK_HPP

#include "xlwave/channel.hpp"
#include "xlwave/error.hpp"
#include "xlwave/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace xlwave
{
    struct EffectiveRank
    {
        double value = 1.0;
        std::vector<double> singular_values; // nonincreasing
        double nuclear_norm = 0.0;
        std::size_t numerical_rank = 0;
    };

    // W = H^H H when M < N, otherwise H H^H.
    inline Eigen::MatrixXcd gram_matrix(const Eigen::MatrixXcd &h)
    {
        if (h.cols() < h.rows())
            return h.adjoint() * h;
        return h * h.adjoint();
    }

    inline Eigen::MatrixXcd gram_matrix(const ChannelMatrix &h) { return gram_matrix(h.entries); }

    namespace detail
    {
        // Entropy-based rank of a nonincreasing list of singular values. Values below
        // max_dim * sigma_1 * 1e-12 are treated as exact zeros (0 ln 0 := 0).
        inline EffectiveRank erank_from_singular_values(std::vector<double> s, std::size_t max_dim)
        {
            std::sort(s.begin(), s.end(), std::greater<>());
            for (double &v : s)
                v = std::max(v, 0.0);
            if (s.empty() || !(s.front() > 0.0))
                throw std::invalid_argument("effective rank of an all-zero matrix is undefined");

            const double cutoff = double(max_dim) * s.front() * 1e-12;
            EffectiveRank out;
            for (double &v : s)
            {
                if (v < cutoff)
                    v = 0.0;
                else
                    ++out.numerical_rank;
                out.nuclear_norm += v;
            }
            double entropy = 0.0;
            for (double v : s)
            {
                if (v > 0.0)
                {
                    const double p = v / out.nuclear_norm;
                    entropy -= p * std::log(p);
                }
            }
            out.value = std::clamp(std::exp(entropy), 1.0, double(out.numerical_rank));
            out.singular_values = std::move(s);
            return out;
        }
    }

    // erank(A) = exp(-sum p_i ln p_i), p_i = sigma_i / ||A||_*, via a dense complex SVD.
    inline EffectiveRank effective_rank(const Eigen::MatrixXcd &a)
    {
        detail::require(a.size() > 0, "effective rank of an empty matrix is undefined");
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
        const auto &sv = svd.singularValues();
        return detail::erank_from_singular_values(std::vector<double>(sv.data(), sv.data() + sv.size()),
                                                  std::size_t(std::max(a.rows(), a.cols())));
    }

    inline EffectiveRank effective_rank(const ChannelMatrix &h) { return effective_rank(h.entries); }

    // Effective rank of a Hermitian positive semidefinite matrix. Its singular values are its
    // eigenvalues, so a self-adjoint eigensolver replaces the SVD.
    inline EffectiveRank hermitian_effective_rank(const Eigen::MatrixXcd &w)
    {
        detail::require(w.rows() == w.cols() && w.rows() > 0, "Hermitian effective rank needs a square matrix");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(w, Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success)
            throw NumericalError("eigendecomposition did not converge");
        const auto &ev = eig.eigenvalues();
        return detail::erank_from_singular_values(std::vector<double>(ev.data(), ev.data() + ev.size()), std::size_t(w.rows()));
    }

    // erank(W), the quantity thresholded by the equi-rank surfaces.
    inline EffectiveRank gram_effective_rank(const ChannelMatrix &h) { return hermitian_effective_rank(gram_matrix(h)); }

    // W = H^H H for a spherical-wave MIMO channel, accumulated over blocks of BS rows so the
    // full N x M channel never has to be stored. Requires M < N; otherwise the channel is
    // formed explicitly.
    template <class BsGeometry>
    Eigen::MatrixXcd gram_matrix_mimo(const BsGeometry &bs, const UlaGeometry &user, double wavelength,
                                      const ScattererSet *scatterers = nullptr, std::size_t block_rows = 512)
    {
        detail::require_positive(wavelength, "wavelength");
        const std::size_t n = detail::element_count(bs);
        const auto m = Eigen::Index(user.num_elements);
        if (Eigen::Index(n) <= m)
            return gram_matrix(swm_channel_mimo(bs, user, wavelength, scatterers));

        const auto sc = detail::scatterer_points(scatterers);
        block_rows = std::max<std::size_t>(1, block_rows);
        Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(m, m);
        Eigen::MatrixXcd block(Eigen::Index(std::min(block_rows, n)), m);
        for (std::size_t first = 0; first < n; first += block_rows)
        {
            const auto rows = Eigen::Index(std::min(block_rows, n - first));
            auto view = block.topRows(rows);
            detail::fill_mimo_rows(view, first, bs, user, wavelength, scatterers, sc);
            w.selfadjointView<Eigen::Lower>().rankUpdate(view.adjoint());
        }
        return Eigen::MatrixXcd(w.selfadjointView<Eigen::Lower>());
    }

    // Reference configuration the scaling laws are anchored to: N0 = M0 = 100 half-wavelength
    // ULAs at lambda0 = 0.01 m, facing each other broadside.
    struct RankAnchor
    {
        double lambda0 = 0.01;
        std::size_t n0 = 100;
        std::size_t m0 = 100;
        double db0 = 0.005;
        double du0 = 0.005;
        double delta = 1.05;
        double r0 = 141.91;
    };

    inline constexpr std::array<std::pair<double, double>, 5> rank_anchor_table{{
        {1.05, 141.91},
        {1.10, 93.62},
        {1.20, 61.13},
        {1.50, 33.78},
        {2.00, 20.41},
    }};

    inline RankAnchor rank_anchor(double delta = 1.05)
    {
        for (const auto &[d, r0] : rank_anchor_table)
        {
            if (std::abs(d - delta) < 1e-9)
            {
                RankAnchor a;
                a.delta = d;
                a.r0 = r0;
                return a;
            }
        }
        throw std::invalid_argument("no tabulated anchor for this threshold (use 1.05, 1.10, 1.20, 1.50 or 2.00)");
    }

    // r1 = (N db M du) / (N0 db0 M0 du0) * (lambda0 / lambda) * r0. Both arrays need more than
    // six elements for the linear aperture law to hold.
    inline double equi_rank_r1_scaling(double wavelength, std::size_t n, std::size_t m, double db, double du,
                                       const RankAnchor &anchor = {})
    {
        detail::require_positive(wavelength, "wavelength");
        detail::require_positive(db, "d_b");
        detail::require_positive(du, "d_u");
        detail::require(n > 6 && m > 6, "scaling law needs more than 6 antennas on both sides");
        const double ratio = (double(n) * db * double(m) * du) / (double(anchor.n0) * anchor.db0 * double(anchor.m0) * anchor.du0);
        return ratio * (anchor.lambda0 / wavelength) * anchor.r0;
    }

    // Planar base station: only the side parallel to the user array (Ny dy) enters.
    inline double equi_rank_r1_scaling_upa(double wavelength, std::size_t ny, std::size_t m, double dy, double du,
                                           const RankAnchor &anchor = {})
    {
        return equi_rank_r1_scaling(wavelength, ny, m, dy, du, anchor);
    }

    // r(theta, phi) = r1 |cos^2(theta + phi/2) - sin^2(phi/2)|
    inline double equi_rank_angle_ula_ula(double r1, double theta, double phi)
    {
        const double c = std::cos(theta + 0.5 * phi);
        const double s = std::sin(0.5 * phi);
        return r1 * std::abs(c * c - s * s);
    }

    // Upper bound r1 - r1 (1 - |sin(phi)|)(1 - cos^2(varphi)) for a planar BS with Ny >= Nz.
    inline double equi_rank_bound_ula_upa(double r1, double phi, double varphi)
    {
        const double c = std::cos(varphi);
        return r1 - r1 * (1.0 - std::abs(std::sin(phi))) * (1.0 - c * c);
    }
}

#endif
