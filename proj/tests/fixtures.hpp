#pragma once

// Operators from the worked examples, shared by the test suites.

#include <array>
#include <cmath>
#include <vector>

#include "bilinear/spectra.hpp"
#include "bilinear/tensor.hpp"

namespace bilinear::fixtures {

/// T(x,y) = (2 a1 b1, 3 a2 b2, 0, 0) on R^3 x R^2 -> R^4.
inline Tensor3 example1() {
    Tensor3 t({3, 2, 4}, std::string("example1"));
    t(0, 0, 0) = 2.0;
    t(1, 1, 1) = 3.0;
    return t;
}

/// T(x,y) = (a1 b1, b1 (a1 + a2), b1 a1, b2 (a1 + a3)).
inline Tensor3 example2() {
    Tensor3 t({3, 2, 4}, std::string("example2"));
    t(0, 0, 0) = 1.0;
    t(0, 0, 1) = 1.0;
    t(1, 0, 1) = 1.0;
    t(0, 0, 2) = 1.0;
    t(0, 1, 3) = 1.0;
    t(2, 1, 3) = 1.0;
    return t;
}

/// The three ordered terms of the 3x3x3 example, in decreasing tau.
inline std::vector<RankOneTerm> cube3_terms() {
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r6 = std::sqrt(6.0), r8 = std::sqrt(8.0);
    return {
        {3.0, XVec{0, 0, 1}, YVec{2 / r8, 0, -2 / r8}, ZVec{1 / r6, 1 / r6, -2 / r6}},
        {2.0, XVec{0, 1, 0}, YVec{0, 1, 0}, ZVec{-1 / r2, 1 / r2, 0}},
        {1.0, XVec{1, 0, 0}, YVec{1 / r2, 0, 1 / r2}, ZVec{1 / r3, 1 / r3, 1 / r3}},
    };
}

/// The 3x3x3 example operator, assembled from its listed terms.
inline Tensor3 cube3() {
    auto terms = cube3_terms();
    auto t = from_schmidt({3, 3, 3}, terms);
    t.set_name("cube3");
    return t;
}

/// Diagonal t(i,i,i) = lambda_i.
inline Tensor3 diagonal(const std::vector<double>& lambda) {
    const std::size_t n = lambda.size();
    Tensor3 t({n, n, n});
    for (std::size_t i = 0; i < n; ++i)
        t(i, i, i) = lambda[i];
    return t;
}

/// Every triple listed for the first example (tau = 2, 3 and 6/sqrt(13)).
inline std::vector<SingularTriple> example1_listed_triples() {
    const auto t = example1();
    const double a = 3 / std::sqrt(13.0), b = 2 / std::sqrt(13.0), tau = 6 / std::sqrt(13.0);
    std::vector<SingularTriple> out;
    for (const auto& s : std::vector<std::array<double, 3>>{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}) {
        out.push_back(make_triple(t, 2.0, XVec{s[0], 0, 0}, YVec{s[1], 0}, ZVec{s[2], 0, 0, 0}));
        out.push_back(make_triple(t, 3.0, XVec{0, s[0], 0}, YVec{0, s[1]}, ZVec{0, s[2], 0, 0}));
    }
    // (x1, x2), (y1, y2), (z1, z2) for the eight listed 6/sqrt(13) triples.
    const std::vector<std::array<double, 6>> third = {
        {a, b, a, b, a, b},     {a, -b, a, -b, a, b},  {-a, b, -a, b, a, b},  {-a, -b, -a, -b, a, b},
        {-a, b, a, b, -a, b},   {-a, -b, a, -b, -a, b}, {a, b, -a, b, -a, b}, {a, -b, -a, -b, -a, b}};
    for (const auto& e : third)
        out.push_back(make_triple(t, tau, XVec{e[0], e[1], 0}, YVec{e[2], e[3]}, ZVec{e[4], e[5], 0, 0}));
    return out;
}

/// The four singular values listed for the second example.
inline std::vector<double> example2_listed_values() {
    const double r2 = std::sqrt(2.0);
    return {std::sqrt(2 + r2), r2, std::sqrt(2 - r2), r2 / 2};
}

}  // namespace bilinear::fixtures
