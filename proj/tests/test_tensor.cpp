#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "bilinear/tensor.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace bilinear;

TEST(Vec, RejectsNonFinite) {
    EXPECT_THROW((XVec{1.0, std::nan("")}), std::invalid_argument);
    EXPECT_THROW((XVec{INFINITY}), std::invalid_argument);
}

TEST(Vec, NormalizedZeroIsEmpty) {
    EXPECT_FALSE(normalized(XVec(3)).has_value());
    const auto v = normalized(XVec{3, 4});
    ASSERT_TRUE(v);
    EXPECT_DOUBLE_EQ((*v)[0], 0.6);
    EXPECT_DOUBLE_EQ((*v)[1], 0.8);
}

TEST(Vec, DotRequiresEqualSizes) {
    EXPECT_THROW(dot(XVec{1, 2}, XVec{1, 2, 3}), std::invalid_argument);
}

TEST(Tensor3, ValidatesConstruction) {
    EXPECT_THROW(Tensor3({0, 2, 2}), std::invalid_argument);
    EXPECT_THROW(Tensor3({2, 2, 2}, std::vector<double>(7, 0.0)), std::invalid_argument);
    std::vector<double> bad(8, 0.0);
    bad[3] = std::nan("");
    EXPECT_THROW(Tensor3({2, 2, 2}, bad), std::invalid_argument);
}

TEST(Tensor3, RowMajorLastIndexFastest) {
    std::vector<double> v(24);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = double(i);
    Tensor3 t({2, 3, 4}, v);
    EXPECT_EQ(t(0, 0, 1), 1.0);
    EXPECT_EQ(t(0, 1, 0), 4.0);
    EXPECT_EQ(t(1, 0, 0), 12.0);
    EXPECT_EQ(t(1, 2, 3), 23.0);
}

TEST(Apply, Example1MatchesFormula) {
    // T(x,y) = (2 a1 b1, 3 a2 b2, 0, 0)
    const auto t = fixtures::example1();
    const auto z = apply(t, XVec{1, 2, 3}, YVec{4, 5});
    EXPECT_EQ(z.values(), (std::vector<double>{8, 30, 0, 0}));
}

TEST(Apply, Example2MatchesFormula) {
    // T(x,y) = (a1 b1, b1 (a1 + a2), b1 a1, b2 (a1 + a3))
    const auto t = fixtures::example2();
    const double a1 = 0.3, a2 = -1.1, a3 = 2.0, b1 = 0.7, b2 = -0.4;
    const auto z = apply(t, XVec{a1, a2, a3}, YVec{b1, b2});
    EXPECT_NEAR(z[0], a1 * b1, 1e-15);
    EXPECT_NEAR(z[1], b1 * (a1 + a2), 1e-15);
    EXPECT_NEAR(z[2], b1 * a1, 1e-15);
    EXPECT_NEAR(z[3], b2 * (a1 + a3), 1e-15);
}

TEST(Apply, DimensionMismatchThrows) {
    const auto t = fixtures::example1();
    EXPECT_THROW(apply(t, XVec{1, 0}, YVec{1, 0}), std::invalid_argument);
    EXPECT_THROW(adjoint_contract_1(t, YVec{1, 0}, ZVec{1, 0, 0}), std::invalid_argument);
}

TEST(Adjoint, IdentityHoldsOnRandomDraws) {
    auto rng = gen::rng_for(1);
    for (int n = 0; n < 100; ++n) {
        const auto d = gen::random_dims(rng, 1, 6);
        const auto t = gen::random_tensor(d, rng);
        std::normal_distribution<double> g;
        XVec x(d.n1);
        YVec y(d.n2);
        ZVec z(d.n3);
        for (auto& e : x) e = g(rng);
        for (auto& e : y) e = g(rng);
        for (auto& e : z) e = g(rng);
        const double lhs = dot(apply(t, x, y), z);
        const double scale = 1.0 + std::abs(lhs);
        EXPECT_NEAR(lhs, dot(x, adjoint_contract_1(t, y, z)), 1e-12 * scale);
        EXPECT_NEAR(lhs, dot(y, adjoint_contract_2(t, x, z)), 1e-12 * scale);
        EXPECT_NEAR(lhs, trilinear(t, x, y, z), 1e-12 * scale);
    }
}

TEST(Apply, IsBilinear) {
    auto rng = gen::rng_for(2);
    std::normal_distribution<double> g;
    for (int n = 0; n < 50; ++n) {
        const auto d = gen::random_dims(rng, 1, 5);
        const auto t = gen::random_tensor(d, rng);
        XVec x1(d.n1), x2(d.n1);
        YVec y1(d.n2), y2(d.n2);
        for (auto& e : x1) e = g(rng);
        for (auto& e : x2) e = g(rng);
        for (auto& e : y1) e = g(rng);
        for (auto& e : y2) e = g(rng);
        const double a = g(rng), b = g(rng);
        const auto left = apply(t, a * x1 + b * x2, y1);
        const auto right = a * apply(t, x1, y1) + b * apply(t, x2, y1);
        EXPECT_LT(distance(left, right), 1e-12 * (1 + norm(left)));
        const auto left2 = apply(t, x1, a * y1 + b * y2);
        const auto right2 = a * apply(t, x1, y1) + b * apply(t, x1, y2);
        EXPECT_LT(distance(left2, right2), 1e-12 * (1 + norm(left2)));
    }
}

TEST(HsNorm, Examples) {
    EXPECT_NEAR(hs_norm(fixtures::example1()), std::sqrt(13.0), 1e-12);
    EXPECT_NEAR(hs_norm(fixtures::example2()), std::sqrt(6.0), 1e-12);
    EXPECT_EQ(hs_norm(Tensor3({2, 3, 1})), 0.0);
}

TEST(HsNorm, InvariantUnderOrthogonalChange) {
    auto rng = gen::rng_for(3);
    for (int n = 0; n < 100; ++n) {
        const auto d = gen::random_dims(rng, 1, 6);
        const auto t = gen::random_tensor(d, rng);
        const auto u = gen::random_orthogonal(d.n1, rng);
        const auto v = gen::random_orthogonal(d.n2, rng);
        const auto w = gen::random_orthogonal(d.n3, rng);
        EXPECT_NEAR(hs_norm(change_basis(t, u, v, w)), hs_norm(t), 1e-10);
    }
}

TEST(ChangeBasis, RejectsNonOrthogonal) {
    const auto t = fixtures::example1();
    Eigen::MatrixXd u = Eigen::MatrixXd::Identity(3, 3);
    u(0, 1) = 0.1;
    EXPECT_THROW(change_basis(t, u, Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(4, 4)),
                 std::invalid_argument);
    EXPECT_THROW(change_basis(t, Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2),
                              Eigen::MatrixXd::Identity(4, 4)),
                 std::invalid_argument);
}

TEST(ChangeBasis, IdentityIsNoOp) {
    const auto t = fixtures::example2();
    const auto s = change_basis(t, Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(2, 2),
                                Eigen::MatrixXd::Identity(4, 4));
    EXPECT_EQ(hs_distance(s, t), 0.0);
}

TEST(FromSchmidt, MatchesReconstructionFormula) {
    const auto terms = fixtures::cube3_terms();
    const auto t = fixtures::cube3();
    auto rng = gen::rng_for(4);
    std::normal_distribution<double> g;
    for (int n = 0; n < 20; ++n) {
        XVec x{g(rng), g(rng), g(rng)};
        YVec y{g(rng), g(rng), g(rng)};
        ZVec want(3);
        for (const auto& s : terms)
            want = want + (s.tau * dot(x, s.x) * dot(y, s.y)) * s.z;
        EXPECT_LT(distance(apply(t, x, y), want), 1e-12);
    }
}

TEST(DeflateTerm, RemovesOrthogonalTerm) {
    const auto t = fixtures::example1();
    const auto r = deflate_term(t, 3.0, XVec{0, 1, 0}, YVec{0, 1}, ZVec{0, 1, 0, 0});
    EXPECT_NEAR(hs_norm(r), 2.0, 1e-15);
}
