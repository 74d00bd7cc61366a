// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hda/beamformers.hpp"
#include "hda/errors.hpp"
#include "hda/rng.hpp"

using namespace hda;

TEST_SUITE("beamformers") {

TEST_CASE("multifinger indicator on a sorted subset") {
    const auto p = multifinger(8, {5, 1, 3});
    CHECK(p.subset == std::vector<int>{1, 3, 5});
    const double c = 1.0 / std::sqrt(3.0);
    for (int i = 0; i < 8; ++i) CHECK(p.coeffs(i) == doctest::Approx((i == 1 || i == 3 || i == 5) ? c : 0.0));
    CHECK(p.coeffs.norm() == doctest::Approx(1.0));
}

TEST_CASE("multifinger rejects bad subsets") {
    CHECK_THROWS_AS(multifinger(8, {}), DomainError);
    CHECK_THROWS_AS(multifinger(8, {2, 2}), DomainError);
    CHECK_THROWS_AS(multifinger(8, {8}), DomainError);
    CHECK_THROWS_AS(multifinger(8, {-1, 3}), DomainError);
}

TEST_CASE("FC analog beamformer is normalized") {
    ArrayConfig c;
    Rng rng = make_rng(1);
    std::vector<CVector> cols;
    for (int i = 0; i < c.M_RF; ++i) {
        CVector v(c.M);
        for (auto& x : v) x = complex_normal(rng);
        cols.push_back(v);
    }
    const auto bf = build_analog(c, cols);
    CHECK(bf.U.rows() == c.M);
    CHECK(bf.U.cols() == c.M_RF);
    CHECK(std::abs(bf.U.squaredNorm() - c.M_RF) < 1e-10);
}

TEST_CASE("OSPS analog beamformer has exact structural zeros") {
    ArrayConfig c;
    c.arch = Arch::OSPS;
    Rng rng = make_rng(2);
    std::vector<CVector> cols;
    for (int i = 0; i < c.M_RF; ++i) {
        CVector v(c.block_size());
        for (auto& x : v) x = complex_normal(rng);
        cols.push_back(v);
    }
    const auto bf = build_analog(c, cols);
    const int mh = c.block_size();
    for (int i = 0; i < c.M_RF; ++i)
        for (int r = 0; r < c.M; ++r)
            if (r / mh != i) CHECK(bf.U(r, i) == cd(0.0, 0.0));
    CHECK(std::abs(bf.U.squaredNorm() - c.M_RF) < 1e-10);

    cols[0] = CVector::Zero(c.M);  // wrong length
    CHECK_THROWS_AS(build_analog(c, cols), StructuralError);
}

TEST_CASE("masked dft keeps only the rows of its block") {
    ArrayConfig c;
    c.M = 16;
    c.M_RF = 4;
    c.arch = Arch::OSPS;
    const CMatrix F = dft_matrix(16);
    const CMatrix Fm = masked_dft(c, 2);
    for (int r = 0; r < 16; ++r) {
        if (r / 4 == 2)
            CHECK((Fm.row(r) - F.row(r)).norm() == 0.0);
        else
            CHECK(Fm.row(r).norm() == 0.0);
    }
    CHECK_THROWS_AS(masked_dft(c, 4), DomainError);
    c.arch = Arch::FC;
    CHECK((masked_dft(c, 0) - F).norm() == 0.0);
}

TEST_CASE("beamformed pattern has unit norm and the right support") {
    ArrayConfig c;
    c.arch = Arch::OSPS;
    const auto p = multifinger(c.M, {3, 40, 77, 100});
    for (int b = 0; b < c.M_RF; ++b) {
        const CVector u = beamformed_pattern(c, p, b);
        CHECK(u.norm() == doctest::Approx(1.0));
        for (int r = 0; r < c.M; ++r)
            if (r / c.block_size() != b) CHECK(u(r) == cd(0.0, 0.0));
    }
    // FC pattern of an indicator is a sum of orthonormal DFT columns.
    c.arch = Arch::FC;
    const CVector u = beamformed_pattern(c, p, 0);
    const CMatrix F = dft_matrix(c.M);
    const CVector proj = F.adjoint() * u;
    for (int m = 0; m < c.M; ++m) CHECK(std::abs(proj(m)) == doctest::Approx(p.coeffs(m)));
}

}  // TEST_SUITE
