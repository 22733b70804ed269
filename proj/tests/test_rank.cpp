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

#include "xlwave/rank.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace xlwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g;
        Eigen::MatrixXcd a(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                a(i, j) = {g(rng), g(rng)};
        return a;
    }

    Eigen::MatrixXcd random_unitary(Eigen::Index n, std::uint64_t seed)
    {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_matrix(n, n, seed));
        return qr.householderQ();
    }

    // Textbook entropy of the normalised spectrum, straight from JacobiSVD.
    double naive_erank(const Eigen::MatrixXcd &a)
    {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
        const auto s = svd.singularValues();
        const double total = s.sum();
        double h = 0.0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > 0.0)
                h -= s(i) / total * std::log(s(i) / total);
        return std::exp(h);
    }
}

TEST_CASE("effective rank matches the entropy definition", "[rank][oracle]")
{
    const auto a = random_matrix(9, 5, 1);
    CHECK_THAT(effective_rank(a).value, WithinRel(naive_erank(a), 1e-12));
    const auto w = gram_matrix(a);
    CHECK(w.rows() == 5);
    CHECK_THAT(hermitian_effective_rank(w).value, WithinRel(naive_erank(w), 1e-9));
}

TEST_CASE("effective rank lies between one and the rank", "[rank][property]")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto a = random_matrix(6 + Eigen::Index(seed % 5), 4, seed);
        const auto e = effective_rank(a);
        CHECK(e.value >= 1.0);
        CHECK(e.value <= double(e.numerical_rank) + 1e-12);
        CHECK(e.numerical_rank == 4);
    }
    // rank-one: erank is exactly one
    Eigen::VectorXcd u = random_matrix(7, 1, 3), v = random_matrix(5, 1, 4);
    CHECK(effective_rank(Eigen::MatrixXcd(u * v.adjoint())).value == 1.0);
    // equal singular values: erank equals the dimension
    CHECK_THAT(effective_rank(Eigen::MatrixXcd::Identity(6, 6)).value, WithinRel(6.0, 1e-12));
    CHECK_THROWS_AS(effective_rank(Eigen::MatrixXcd::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("effective rank is unitarily invariant and scale free", "[rank][property]")
{
    const auto a = random_matrix(8, 5, 11);
    const double base = effective_rank(a).value;
    const Eigen::MatrixXcd b = random_unitary(8, 12) * a * random_unitary(5, 13);
    CHECK_THAT(effective_rank(b).value, WithinAbs(base, 1e-9));
    CHECK_THAT(effective_rank(Eigen::MatrixXcd(a * cdouble(3.5, -1.0))).value, WithinAbs(base, 1e-9));
}

TEST_CASE("streamed Gram matrix equals the dense one", "[rank]")
{
    const auto bs = UpaGeometry::make(20, 9, 0.005, 0.005);
    const auto user = UlaGeometry::user(6, 0.005, PolarPoint::spatial(0.7, 0.3, -0.2), pi / 2.0);
    const auto dense = gram_matrix(swm_channel_mimo(bs, user, 0.01));
    for (std::size_t block : {std::size_t{1}, std::size_t{7}, std::size_t{64}, std::size_t{1000}})
    {
        const auto streamed = gram_matrix_mimo(bs, user, 0.01, nullptr, block);
        CHECK((streamed - dense).norm() < 1e-13 * dense.norm());
    }
    const auto ula = UlaGeometry::base_station(30, 0.005);
    const auto u2 = UlaGeometry::user(5, 0.005, PolarPoint::planar(0.5, 0.1), 0.2);
    ScattererSet sc;
    sc.scatterers.push_back({PolarPoint::planar(0.2, 0.4), cdouble(0.3, 0.1)});
    const auto dense2 = gram_matrix(swm_channel_mimo(ula, u2, 0.01, &sc));
    CHECK((gram_matrix_mimo(ula, u2, 0.01, &sc, 8) - dense2).norm() < 1e-13 * dense2.norm());
}

TEST_CASE("effective rank falls towards one with distance", "[rank]")
{
    const auto bs = UlaGeometry::base_station(32, 0.005);
    double previous = 1e9;
    for (double r : {0.2, 1.0, 5.0, 50.0})
    {
        const auto user = UlaGeometry::user(16, 0.005, PolarPoint::planar(r, 0.0));
        const double e = hermitian_effective_rank(gram_matrix_mimo(bs, user, 0.01)).value;
        CHECK(e < previous);
        previous = e;
    }
    CHECK(previous < 1.01);
}

TEST_CASE("scaling laws reproduce their anchors", "[rank]")
{
    for (const auto &[delta, r0] : rank_anchor_table)
        CHECK_THAT(equi_rank_r1_scaling(0.01, 100, 100, 0.005, 0.005, rank_anchor(delta)), WithinRel(r0, 1e-14));
    // halving the wavelength at fixed element counts and half-wavelength spacing halves r1
    CHECK_THAT(equi_rank_r1_scaling(0.005, 100, 100, 0.0025, 0.0025), WithinRel(141.91 / 2.0, 1e-14));
    CHECK_THROWS_AS(equi_rank_r1_scaling(0.01, 6, 100, 0.005, 0.005), std::invalid_argument);
    CHECK_THROWS_AS(rank_anchor(1.3), std::invalid_argument);

    CHECK_THAT(equi_rank_angle_ula_ula(100.0, 0.0, 0.0), WithinRel(100.0, 1e-15));
    CHECK_THAT(equi_rank_angle_ula_ula(100.0, deg2rad(10.0), deg2rad(30.0)),
               WithinRel(100.0 * std::cos(deg2rad(40.0)) * std::cos(deg2rad(10.0)), 1e-12));
    CHECK_THAT(equi_rank_bound_ula_upa(100.0, 0.0, 0.0), WithinRel(100.0, 1e-15));
    CHECK_THAT(equi_rank_bound_ula_upa(100.0, 0.0, pi / 2.0 - 1e-9), WithinAbs(0.0, 1e-6));
}
