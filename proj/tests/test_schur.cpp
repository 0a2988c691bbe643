#include <cmath>

#include <gtest/gtest.h>

#include "bilinear/schur.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace bilinear;

TEST(Symmetry, DiagonalIsSymmetricSelfAdjoint) {
    const auto t = fixtures::diagonal({3, -2, 1});
    EXPECT_TRUE(is_symmetric(t, 1e-12));
    EXPECT_TRUE(is_self_adjoint(t, 1e-12));
}

TEST(Symmetry, Cube3IsNeither) {
    const auto t = fixtures::cube3();
    EXPECT_FALSE(is_symmetric(t, 1e-9));
    EXPECT_FALSE(is_self_adjoint(t, 1e-9));
}

TEST(Symmetry, SymmetricButNotSelfAdjoint) {
    // t(i,j,k) = t(j,i,k) but t(0,0,1) != t(0,1,0).
    Tensor3 t({2, 2, 2});
    t(0, 0, 1) = 1.0;
    EXPECT_TRUE(is_symmetric(t, 1e-12));
    EXPECT_FALSE(is_self_adjoint(t, 1e-12));
}

TEST(Symmetry, UnequalDimensionsThrow) {
    EXPECT_THROW(is_symmetric(fixtures::example1(), 1e-9), std::invalid_argument);
    EXPECT_THROW(is_self_adjoint(Tensor3({2, 2, 3}), 1e-9), std::invalid_argument);
}

TEST(Schur, DiagonalRecoversSignedValues) {
    const auto t = fixtures::diagonal({3, -2, 1});
    const auto r = schmidt_decompose(t);
    ASSERT_EQ(r.representation.status, SchmidtStatus::Complete);
    const auto s = schur_from_schmidt(t, r.representation, r.report.tolerance);
    ASSERT_EQ(s.terms.size(), 3u);
    EXPECT_NEAR(s.terms[0].lambda, 3.0, 1e-12);
    EXPECT_NEAR(s.terms[1].lambda, -2.0, 1e-12);
    EXPECT_NEAR(s.terms[2].lambda, 1.0, 1e-12);
    EXPECT_EQ(s.terms[1].x, (XVec{0, 1, 0}));
    EXPECT_TRUE(verify_schur(t, s, 1e-12).passed());
}

TEST(Schur, EqualMagnitudesPositiveFirst) {
    const auto t = fixtures::diagonal({-2, 2});
    const auto r = schmidt_decompose(t);
    ASSERT_EQ(r.representation.status, SchmidtStatus::Complete);
    const auto s = schur_from_schmidt(t, r.representation, r.report.tolerance);
    ASSERT_EQ(s.terms.size(), 2u);
    EXPECT_NEAR(s.terms[0].lambda, 2.0, 1e-12);
    EXPECT_NEAR(s.terms[1].lambda, -2.0, 1e-12);
}

TEST(Schur, PlantedRoundTrip) {
    auto rng = gen::rng_for(41);
    for (int n = 0; n < 30; ++n) {
        std::uniform_int_distribution<std::size_t> dim(2, 5);
        const std::size_t d = dim(rng);
        std::uniform_int_distribution<std::size_t> rank(1, d);
        const auto planted = gen::planted_schur(d, rank(rng), 0.1, rng);
        const auto t = from_schur(planted);
        ASSERT_TRUE(is_symmetric(t, 1e-12));
        ASSERT_TRUE(is_self_adjoint(t, 1e-12));
        const auto r = schmidt_decompose(t);
        ASSERT_EQ(r.representation.status, SchmidtStatus::Complete);
        const auto s = schur_from_schmidt(t, r.representation, r.report.tolerance);
        ASSERT_EQ(s.terms.size(), planted.terms.size());
        for (std::size_t i = 0; i < s.terms.size(); ++i)
            EXPECT_NEAR(std::abs(s.terms[i].lambda), r.representation.terms[i].tau, 1e-12);
        const auto c = verify_schur(t, s, 1e-9);
        EXPECT_TRUE(c.passed()) << "residual " << c.residual;
        // (lambda, x) and (-lambda, -x) give the same term, so compare the
        // rank-one tensors rather than the raw signs.
        auto rng2 = gen::rng_for(1000 + n);
        std::normal_distribution<double> g;
        XVec x(d), y(d);
        for (auto& e : x) e = g(rng2);
        for (auto& e : y) e = g(rng2);
        EXPECT_LT(distance(reconstruct(s, x, y), reconstruct(planted, x, y)), 1e-9);
    }
}

TEST(Schur, PreconditionsEnforced) {
    const auto t = fixtures::cube3();
    const auto r = schmidt_decompose(t);
    EXPECT_THROW(schur_from_schmidt(t, r.representation, 1e-9), std::invalid_argument);
    const auto e2 = schmidt_decompose(fixtures::example2());
    EXPECT_THROW(schur_from_schmidt(fixtures::example2(), e2.representation, 1e-9), std::invalid_argument);
    // A representation of a different operator is rejected too.
    const auto d = fixtures::diagonal({3, -2, 1});
    const auto other = schmidt_decompose(fixtures::diagonal({3, 2, 1}));
    EXPECT_THROW(schur_from_schmidt(d, other.representation, 1e-9), std::invalid_argument);
}
