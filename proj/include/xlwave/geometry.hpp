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

#ifndef XLWAVE_GEOMETRY_HPP
#define XLWAVE_GEOMETRY_HPP

#include "xlwave/error.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace xlwave
{
    using Point3 = Eigen::Vector3d;

    inline constexpr double pi = std::numbers::pi;

    inline constexpr double deg2rad(double deg) noexcept { return deg * pi / 180.0; }
    inline constexpr double rad2deg(double rad) noexcept { return rad * 180.0 / pi; }

    // Position of a user or scatterer in front of an array.
    //   planar:  x = r cos(theta), y = r sin(theta)               (theta stored as azimuth)
    //   spatial: x = r cos(el) cos(az), y = r cos(el) sin(az), z = r sin(el)
    // Both angles must lie in the open interval (-pi/2, pi/2).
    struct PolarPoint
    {
        double r = 1.0;
        double elevation = 0.0;
        double azimuth = 0.0;

        static PolarPoint planar(double r, double theta) { return checked({r, 0.0, theta}); }
        static PolarPoint spatial(double r, double elevation, double azimuth) { return checked({r, elevation, azimuth}); }

        // The planar incidence angle (identical to azimuth).
        double theta() const noexcept { return azimuth; }

        Point3 direction() const
        {
            return {std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth), std::sin(elevation)};
        }

        Point3 cartesian() const { return r * direction(); }

        static PolarPoint checked(PolarPoint p)
        {
            detail::require_positive(p.r, "distance r");
            const double half = pi / 2.0;
            if (!(std::abs(p.elevation) < half) || !(std::abs(p.azimuth) < half))
                throw std::invalid_argument("angles must lie strictly inside (-90, 90) degrees");
            return p;
        }
    };

    enum class Anchor
    {
        midpoint,      // origin is the array midpoint, offsets n - (N-1)/2
        first_element, // origin is element 0, offsets n
    };

    // Uniform linear array. The axis direction is
    //   (cos(elevation) sin(tilt), cos(elevation) cos(tilt), sin(elevation)),
    // so tilt = elevation = 0 is the +Y axis. A user ULA with tilt phi makes angle phi with
    // the Y axis inside the XY plane. The azimuth/elevation pair (varphi_u, phi_u) used for
    // 3D user arrays maps to tilt = pi/2 - varphi_u, elevation = phi_u.
    struct UlaGeometry
    {
        std::size_t num_elements = 1;
        double spacing = 1.0;
        Anchor anchor = Anchor::midpoint;
        double tilt = 0.0;
        double elevation = 0.0;
        Point3 origin = Point3::Zero();

        // Base-station array: midpoint at the coordinate origin, laid along +Y.
        static UlaGeometry base_station(std::size_t n, double d)
        {
            UlaGeometry g;
            g.num_elements = n;
            g.spacing = d;
            return g.validated();
        }

        // User array: element 0 sits at `first`, the rest extend along the tilted axis.
        static UlaGeometry user(std::size_t m, double d, const PolarPoint &first, double tilt = 0.0, double elevation = 0.0)
        {
            UlaGeometry g;
            g.num_elements = m;
            g.spacing = d;
            g.anchor = Anchor::first_element;
            g.tilt = tilt;
            g.elevation = elevation;
            g.origin = first.cartesian();
            return g.validated();
        }

        UlaGeometry validated() const
        {
            detail::require(num_elements >= 1, "ULA needs at least one element");
            detail::require_positive(spacing, "element spacing");
            return *this;
        }

        // (N-1) d, the physical aperture.
        double aperture() const noexcept { return double(num_elements - 1) * spacing; }
        // N d, the continuum length used by the closed forms.
        double length() const noexcept { return double(num_elements) * spacing; }

        double offset(std::size_t n) const noexcept
        {
            return anchor == Anchor::midpoint ? double(n) - 0.5 * double(num_elements - 1) : double(n);
        }

        Point3 axis() const
        {
            return {std::cos(elevation) * std::sin(tilt), std::cos(elevation) * std::cos(tilt), std::sin(elevation)};
        }

        Point3 position(std::size_t n) const { return origin + offset(n) * spacing * axis(); }
    };

    enum class PlanarShape
    {
        rectangular, // URPA, or USPA when both sides match
        circular,    // UCPA, closed forms only
        elliptical,  // UEPA, closed forms only
    };

    // Uniform planar array in the YZ plane, midpoint at the origin. The discrete element
    // grid is always rectangular; `shape` only selects which continuum closed form applies.
    // Element index = n_z * num_y + n_y (n_y runs fastest).
    struct UpaGeometry
    {
        std::size_t num_y = 1;
        std::size_t num_z = 1;
        double spacing_y = 1.0;
        double spacing_z = 1.0;
        PlanarShape shape = PlanarShape::rectangular;

        static UpaGeometry make(std::size_t ny, std::size_t nz, double dy, double dz, PlanarShape shape = PlanarShape::rectangular)
        {
            UpaGeometry g{ny, nz, dy, dz, shape};
            detail::require(ny >= 1 && nz >= 1, "UPA needs at least one element per side");
            detail::require_positive(dy, "spacing_y");
            detail::require_positive(dz, "spacing_z");
            return g;
        }

        std::size_t size() const noexcept { return num_y * num_z; }
        double width() const noexcept { return double(num_y) * spacing_y; }  // N_y d_y
        double height() const noexcept { return double(num_z) * spacing_z; } // N_z d_z

        double offset_y(std::size_t ny) const noexcept { return double(ny) - 0.5 * double(num_y - 1); }
        double offset_z(std::size_t nz) const noexcept { return double(nz) - 0.5 * double(num_z - 1); }

        std::size_t index(std::size_t ny, std::size_t nz) const noexcept { return nz * num_y + ny; }

        Point3 position(std::size_t idx) const
        {
            const std::size_t ny = idx % num_y;
            const std::size_t nz = idx / num_y;
            return {0.0, offset_y(ny) * spacing_y, offset_z(nz) * spacing_z};
        }
    };

    inline std::vector<Point3> element_positions(const UlaGeometry &geom)
    {
        std::vector<Point3> out;
        out.reserve(geom.num_elements);
        for (std::size_t n = 0; n < geom.num_elements; ++n)
            out.push_back(geom.position(n));
        return out;
    }

    inline std::vector<Point3> element_positions(const UpaGeometry &geom)
    {
        std::vector<Point3> out;
        out.reserve(geom.size());
        for (std::size_t i = 0; i < geom.size(); ++i)
            out.push_back(geom.position(i));
        return out;
    }

    // r_n = sqrt(r^2 - 2 r d delta_n (u . a) + (delta_n d)^2), with u the unit vector to the
    // user seen from the array origin and a the array axis. For the base-station ULA on the
    // Y axis u . a = sin(theta), which is the familiar point-to-ULA form.
    inline double distance_point_to_element(const UlaGeometry &geom, const PolarPoint &user, std::size_t n)
    {
        const Point3 rel = user.cartesian() - geom.origin;
        const double r = rel.norm();
        const double proj = rel.dot(geom.axis()) / r;
        const double s = geom.offset(n) * geom.spacing;
        return std::sqrt(r * r - 2.0 * r * s * proj + s * s);
    }

    // r_{n_y n_z}^2 = r^2 - 2r cos(el) sin(az) dy_n - 2r sin(el) dz_n + dy_n^2 + dz_n^2
    inline double distance_point_to_element(const UpaGeometry &geom, const PolarPoint &user, std::size_t idx)
    {
        const double sy = geom.offset_y(idx % geom.num_y) * geom.spacing_y;
        const double sz = geom.offset_z(idx / geom.num_y) * geom.spacing_z;
        const double r = user.r;
        const double cy = std::cos(user.elevation) * std::sin(user.azimuth);
        const double cz = std::sin(user.elevation);
        return std::sqrt(r * r - 2.0 * r * cy * sy - 2.0 * r * cz * sz + sy * sy + sz * sz);
    }

    // Element-to-element distance written per coordinate, e.g. for a BS ULA on the Y axis
    //   r_nm^2 = (x + delta_m d_u a_x)^2 + (y + delta_m d_u a_y - delta_n d_b)^2 + (z + delta_m d_u a_z)^2
    // where (x, y, z) is the user anchor and a the user-array axis.
    inline double distance_mimo(const UlaGeometry &bs, const UlaGeometry &user, std::size_t n, std::size_t m)
    {
        const Point3 a = user.axis();
        const Point3 b = bs.axis();
        const double su = user.offset(m) * user.spacing;
        const double sb = bs.offset(n) * bs.spacing;
        const double dx = user.origin.x() - bs.origin.x() + su * a.x() - sb * b.x();
        const double dy = user.origin.y() - bs.origin.y() + su * a.y() - sb * b.y();
        const double dz = user.origin.z() - bs.origin.z() + su * a.z() - sb * b.z();
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    inline double distance_mimo(const UpaGeometry &bs, const UlaGeometry &user, std::size_t idx, std::size_t m)
    {
        const Point3 a = user.axis();
        const double su = user.offset(m) * user.spacing;
        const double sy = bs.offset_y(idx % bs.num_y) * bs.spacing_y;
        const double sz = bs.offset_z(idx / bs.num_y) * bs.spacing_z;
        const double dx = user.origin.x() + su * a.x();
        const double dy = user.origin.y() + su * a.y() - sy;
        const double dz = user.origin.z() + su * a.z() - sz;
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }
}

#endif
