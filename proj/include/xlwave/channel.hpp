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

#ifndef XLWAVE_CHANNEL_HPP
#define XLWAVE_CHANNEL_HPP

#include "xlwave/error.hpp"
#include "xlwave/geometry.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace xlwave
{
    using cdouble = std::complex<double>;

    enum class WaveModel
    {
        spherical, // exact per-element distances in amplitude and phase
        planar,    // first-order phase, far-field amplitude
    };

    enum class LosMode
    {
        with_los,
        without_los,
    };

    // A point scatterer. `gain` carries the attenuation and phase shift of the bounce.
    struct Scatterer
    {
        PolarPoint position;
        cdouble gain{0.0, 0.0};
    };

    struct ScattererSet
    {
        std::vector<Scatterer> scatterers;
        std::uint64_t seed = 0; // 0 for hand-built sets

        std::size_t size() const noexcept { return scatterers.size(); }
        bool empty() const noexcept { return scatterers.empty(); }
    };

    // N x M channel, rows are base-station elements, columns user elements.
    struct ChannelMatrix
    {
        Eigen::MatrixXcd entries;
        double wavelength = 0.0;
        WaveModel model = WaveModel::spherical;
        std::optional<ScattererSet> multipath;

        Eigen::Index rows() const noexcept { return entries.rows(); }
        Eigen::Index cols() const noexcept { return entries.cols(); }
        cdouble operator()(Eigen::Index n, Eigen::Index m) const { return entries(n, m); }
    };

    namespace detail
    {
        inline std::size_t element_count(const UlaGeometry &g) noexcept { return g.num_elements; }
        inline std::size_t element_count(const UpaGeometry &g) noexcept { return g.size(); }

        inline void check_distance(double dist, double wavelength)
        {
            if (!(dist > 1e-12 * wavelength))
                throw std::domain_error("coincident point");
        }

        // (lambda / (4 pi amp_dist)) exp(-j 2 pi phase_dist / lambda). The phase argument is formed
        // from the unwrapped path length; std::polar reduces it once.
        inline cdouble path_term(double amp_dist, double phase_dist, double wavelength)
        {
            return std::polar(wavelength / (4.0 * pi * amp_dist), -2.0 * pi * phase_dist / wavelength);
        }

        // First-order (plane-wave) distance from element p to a source in direction u at range r.
        inline double planar_distance(const Point3 &p, const PolarPoint &src)
        {
            return src.r - p.dot(src.direction());
        }

        inline void check_scatterers(const ScattererSet &set, const PolarPoint &user)
        {
            for (const auto &s : set.scatterers)
            {
                PolarPoint::checked(s.position);
                if (!((s.position.cartesian() - user.cartesian()).norm() > 0.0))
                    throw std::domain_error("coincident point: scatterer on top of the user");
            }
        }
    }

    // Exact (spherical-wave) point-to-array channel.
    template <class Geometry>
    ChannelMatrix swm_channel_point(const Geometry &geom, const PolarPoint &user, double wavelength)
    {
        detail::require_positive(wavelength, "wavelength");
        PolarPoint::checked(user);
        const std::size_t n = detail::element_count(geom);
        ChannelMatrix h{Eigen::MatrixXcd(Eigen::Index(n), 1), wavelength, WaveModel::spherical, std::nullopt};
        for (std::size_t i = 0; i < n; ++i)
        {
            const double rn = distance_point_to_element(geom, user, i);
            detail::check_distance(rn, wavelength);
            h.entries(Eigen::Index(i), 0) = detail::path_term(rn, rn, wavelength);
        }
        return h;
    }

    // Plane-wave approximation: amplitude lambda/(4 pi r) on every element, phase from r - p_n . u.
    template <class Geometry>
    ChannelMatrix pwm_channel_point(const Geometry &geom, const PolarPoint &user, double wavelength)
    {
        detail::require_positive(wavelength, "wavelength");
        PolarPoint::checked(user);
        const std::size_t n = detail::element_count(geom);
        ChannelMatrix h{Eigen::MatrixXcd(Eigen::Index(n), 1), wavelength, WaveModel::planar, std::nullopt};
        for (std::size_t i = 0; i < n; ++i)
            h.entries(Eigen::Index(i), 0) = detail::path_term(user.r, detail::planar_distance(geom.position(i), user), wavelength);
        return h;
    }

    // LoS path plus one bounce per scatterer:
    //   h_n = lambda/(4 pi r_n) e^{-j 2 pi r_n / lambda}
    //       + sum_l alpha_l lambda / (4 pi r_nl d_l) e^{-j 2 pi (r_nl + d_l) / lambda}
    // with d_l the scatterer-to-user distance.
    template <class Geometry>
    ChannelMatrix swm_channel_scattered_point(const Geometry &geom, const PolarPoint &user, const ScattererSet &scatterers,
                                              double wavelength, LosMode los = LosMode::with_los)
    {
        detail::require_positive(wavelength, "wavelength");
        PolarPoint::checked(user);
        detail::check_scatterers(scatterers, user);
        const std::size_t n = detail::element_count(geom);
        const Point3 u = user.cartesian();

        std::vector<double> d_l;
        for (const auto &s : scatterers.scatterers)
            d_l.push_back((s.position.cartesian() - u).norm());

        ChannelMatrix h{Eigen::MatrixXcd::Zero(Eigen::Index(n), 1), wavelength, WaveModel::spherical, scatterers};
        for (std::size_t i = 0; i < n; ++i)
        {
            cdouble acc{0.0, 0.0};
            if (los == LosMode::with_los)
            {
                const double rn = distance_point_to_element(geom, user, i);
                detail::check_distance(rn, wavelength);
                acc += detail::path_term(rn, rn, wavelength);
            }
            for (std::size_t l = 0; l < scatterers.size(); ++l)
            {
                const auto &s = scatterers.scatterers[l];
                const double rnl = distance_point_to_element(geom, s.position, i);
                detail::check_distance(rnl, wavelength);
                acc += s.gain * detail::path_term(rnl * d_l[l], rnl + d_l[l], wavelength);
            }
            h.entries(Eigen::Index(i), 0) = acc;
        }
        return h;
    }

    // Plane-wave counterpart of swm_channel_scattered_point. Each bounce replaces r_nl by its
    // first-order expansion around that scatterer's own range and direction, in both amplitude
    // and phase. The LoS term keeps the plane-wave form of pwm_channel_point, so an empty
    // scatterer set reproduces it exactly.
    template <class Geometry>
    ChannelMatrix pwm_channel_scattered_point(const Geometry &geom, const PolarPoint &user, const ScattererSet &scatterers,
                                              double wavelength, LosMode los = LosMode::with_los)
    {
        detail::require_positive(wavelength, "wavelength");
        PolarPoint::checked(user);
        detail::check_scatterers(scatterers, user);
        const std::size_t n = detail::element_count(geom);
        const Point3 u = user.cartesian();

        std::vector<double> d_l;
        for (const auto &s : scatterers.scatterers)
            d_l.push_back((s.position.cartesian() - u).norm());

        ChannelMatrix h{Eigen::MatrixXcd::Zero(Eigen::Index(n), 1), wavelength, WaveModel::planar, scatterers};
        for (std::size_t i = 0; i < n; ++i)
        {
            const Point3 p = geom.position(i);
            cdouble acc{0.0, 0.0};
            if (los == LosMode::with_los)
                acc += detail::path_term(user.r, detail::planar_distance(p, user), wavelength);
            for (std::size_t l = 0; l < scatterers.size(); ++l)
            {
                const auto &s = scatterers.scatterers[l];
                // rbar goes negative for scatterers closer than the element's projection; the term keeps that sign
                const double rbar = detail::planar_distance(p, s.position);
                detail::check_distance(std::abs(rbar), wavelength);
                acc += std::copysign(1.0, rbar) * s.gain * detail::path_term(std::abs(rbar) * d_l[l], rbar + d_l[l], wavelength);
            }
            h.entries(Eigen::Index(i), 0) = acc;
        }
        return h;
    }

    // Generic spherical-wave channel between two element lists (rows: a, columns: b). Scatterer
    // bounces use beta_l lambda / (4 pi r_nl r_lm). Distances are symmetric, so swapping the
    // lists transposes the result.
    inline ChannelMatrix swm_channel_arrays(std::span<const Point3> a, std::span<const Point3> b, double wavelength,
                                            const ScattererSet *scatterers = nullptr, LosMode los = LosMode::with_los)
    {
        detail::require_positive(wavelength, "wavelength");
        const Eigen::Index n = Eigen::Index(a.size());
        const Eigen::Index m = Eigen::Index(b.size());
        ChannelMatrix h{Eigen::MatrixXcd::Zero(n, m), wavelength, WaveModel::spherical, std::nullopt};
        std::vector<Point3> sc;
        if (scatterers)
        {
            h.multipath = *scatterers;
            for (const auto &s : scatterers->scatterers)
                sc.push_back(s.position.cartesian());
        }
        for (Eigen::Index j = 0; j < m; ++j)
        {
            for (Eigen::Index i = 0; i < n; ++i)
            {
                cdouble acc{0.0, 0.0};
                if (los == LosMode::with_los)
                {
                    const double r = (a[i] - b[j]).norm();
                    detail::check_distance(r, wavelength);
                    acc += detail::path_term(r, r, wavelength);
                }
                for (std::size_t l = 0; l < sc.size(); ++l)
                {
                    const double r1 = (a[i] - sc[l]).norm();
                    const double r2 = (sc[l] - b[j]).norm();
                    detail::check_distance(r1, wavelength);
                    detail::check_distance(r2, wavelength);
                    acc += scatterers->scatterers[l].gain * detail::path_term(r1 * r2, r1 + r2, wavelength);
                }
                h.entries(i, j) = acc;
            }
        }
        return h;
    }

    namespace detail
    {
        template <class BsGeometry>
        void fill_mimo_rows(Eigen::Ref<Eigen::MatrixXcd> out, std::size_t first_row, const BsGeometry &bs, const UlaGeometry &user,
                            double wavelength, const ScattererSet *scatterers, const std::vector<Point3> &sc)
        {
            const Eigen::Index rows = out.rows();
            const Eigen::Index m = out.cols();
            for (Eigen::Index j = 0; j < m; ++j)
            {
                const Point3 q = user.position(std::size_t(j));
                for (Eigen::Index i = 0; i < rows; ++i)
                {
                    const std::size_t n = first_row + std::size_t(i);
                    const double rnm = distance_mimo(bs, user, n, std::size_t(j));
                    check_distance(rnm, wavelength);
                    cdouble acc = path_term(rnm, rnm, wavelength);
                    for (std::size_t l = 0; l < sc.size(); ++l)
                    {
                        const double rnl = distance_point_to_element(bs, scatterers->scatterers[l].position, n);
                        const double rlm = (sc[l] - q).norm();
                        check_distance(rnl, wavelength);
                        check_distance(rlm, wavelength);
                        acc += scatterers->scatterers[l].gain * path_term(rnl * rlm, rnl + rlm, wavelength);
                    }
                    out(i, j) = acc;
                }
            }
        }

        inline std::vector<Point3> scatterer_points(const ScattererSet *scatterers)
        {
            std::vector<Point3> sc;
            if (scatterers)
                for (const auto &s : scatterers->scatterers)
                    sc.push_back(PolarPoint::checked(s.position).cartesian());
            return sc;
        }
    }

    // Spherical-wave MIMO channel from a user ULA to a base-station ULA or UPA, optionally with
    // scatterer bounces (beta_l lambda / (4 pi r_nl r_lm)).
    template <class BsGeometry>
    ChannelMatrix swm_channel_mimo(const BsGeometry &bs, const UlaGeometry &user, double wavelength,
                                   const ScattererSet *scatterers = nullptr)
    {
        detail::require_positive(wavelength, "wavelength");
        const auto n = Eigen::Index(detail::element_count(bs));
        const auto m = Eigen::Index(user.num_elements);
        ChannelMatrix h{Eigen::MatrixXcd(n, m), wavelength, WaveModel::spherical, std::nullopt};
        if (scatterers)
            h.multipath = *scatterers;
        const auto sc = detail::scatterer_points(scatterers);
        detail::fill_mimo_rows(h.entries, 0, bs, user, wavelength, scatterers, sc);
        return h;
    }

    // MRC gain ||h||^2 of a single-antenna-user channel.
    inline double mrc_gain(const ChannelMatrix &h)
    {
        detail::require(h.cols() == 1, "mrc_gain needs an N x 1 channel");
        return h.entries.col(0).squaredNorm();
    }

    // Unit-norm MRC weights w = h / ||h||, so that w^H h = ||h||.
    inline Eigen::VectorXcd mrc_weights(const ChannelMatrix &h)
    {
        detail::require(h.cols() == 1, "mrc_weights needs an N x 1 channel");
        const double norm = h.entries.col(0).norm();
        detail::require(norm > 0.0, "channel is all zero");
        return h.entries.col(0) / norm;
    }

    struct PatternSample
    {
        double angle = 0.0;   // radians
        double gain_db = 0.0; // relative to the pattern peak
    };

    // |w^H h_swm(probe(angle))|^2 over an angle grid, normalised to a 0 dB peak.
    inline std::vector<PatternSample> beampattern(const UlaGeometry &geom, const Eigen::VectorXcd &weights,
                                                  const std::function<PolarPoint(double)> &probe,
                                                  std::span<const double> angles, double wavelength)
    {
        detail::require(weights.size() == Eigen::Index(geom.num_elements), "weight vector length must match the array");
        detail::require(!angles.empty(), "angle grid is empty");
        std::vector<PatternSample> out;
        out.reserve(angles.size());
        double peak = 0.0;
        for (double a : angles)
        {
            const auto h = swm_channel_point(geom, probe(a), wavelength);
            const double g = std::norm(weights.dot(h.entries.col(0))); // dot() conjugates the left operand
            out.push_back({a, g});
            peak = std::max(peak, g);
        }
        detail::require(peak > 0.0, "pattern is identically zero");
        for (auto &s : out)
            s.gain_db = 10.0 * std::log10(s.gain_db / peak);
        return out;
    }
}

#endif
