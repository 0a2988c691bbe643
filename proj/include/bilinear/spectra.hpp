#pragma once

// Singular triples of a bilinear operator: unit x, y, z and tau > 0 with
//
//   T(x, y)             = tau z
//   adjoint_contract_1  = tau x      (sum_jk t(i,j,k) y_j z_k)
//   adjoint_contract_2  = tau y      (sum_ik t(i,j,k) x_i z_k)
//
// Equivalently, constrained critical points of f(x,y,z) = <T(x,y), z> on the
// product of unit spheres with positive value. The alternating power
// iteration only reaches local maxima of f, so the search also runs a Newton
// solve of the stationarity system, which converges to saddle triples too.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "bilinear/config.hpp"
#include "bilinear/detail/parallel.hpp"
#include "bilinear/tensor.hpp"

namespace bilinear {

struct SingularTriple {
    double tau = 0.0;
    XVec x;
    YVec y;
    ZVec z;
    /// ||T(x,y) - tau z||, ||adj1(y,z) - tau x||, ||adj2(x,z) - tau y||.
    std::array<double, 3> residuals{};

    double max_residual() const { return std::max({residuals[0], residuals[1], residuals[2]}); }
};

inline std::array<double, 3> triple_residuals(const Tensor3& t, double tau, const XVec& x,
                                              const YVec& y, const ZVec& z) {
    return {norm(apply(t, x, y) - tau * z), norm(adjoint_contract_1(t, y, z) - tau * x),
            norm(adjoint_contract_2(t, x, z) - tau * y)};
}

inline SingularTriple make_triple(const Tensor3& t, double tau, XVec x, YVec y, ZVec z) {
    SingularTriple s{tau, std::move(x), std::move(y), std::move(z), {}};
    s.residuals = triple_residuals(t, s.tau, s.x, s.y, s.z);
    return s;
}

namespace detail {

// First index whose magnitude is within a relative 1e-9 of the largest, so
// that numerically tied entries resolve the same way on every run.
template <Space S>
std::size_t sign_pivot(const Vec<S>& v) {
    double biggest = 0.0;
    for (double d : v)
        biggest = std::max(biggest, std::abs(d));
    if (!(biggest > 0.0))
        throw std::invalid_argument("canonicalize: zero vector");
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) >= biggest * (1.0 - 1e-9))
            return i;
    return 0;
}

template <Space S>
bool lex_less(const Vec<S>& a, const Vec<S>& b, double tol) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i] < b[i] - tol)
            return true;
        if (a[i] > b[i] + tol)
            return false;
    }
    return false;
}

inline void check_unit(double n, const char* what, double tol) {
    if (std::abs(n - 1.0) > tol)
        throw std::invalid_argument(what);
}

}  // namespace detail

/// Representative of the sign orbit {(x,y,z), (-x,-y,z), (-x,y,-z), (x,-y,-z)}
/// whose x and y have a positive largest-magnitude entry. Residuals are kept:
/// they are invariant on the orbit.
inline SingularTriple canonicalize(SingularTriple s) {
    if (s.x[detail::sign_pivot(s.x)] < 0.0) {
        s.x = -s.x;
        s.z = -s.z;
    }
    if (s.y[detail::sign_pivot(s.y)] < 0.0) {
        s.y = -s.y;
        s.z = -s.z;
    }
    return s;
}

/// min over sign variants of max(||x-x'||, ||y-y'||, ||z-z'||).
inline double orbit_distance(const SingularTriple& a, const SingularTriple& b) {
    double best = std::numeric_limits<double>::infinity();
    for (int sx : {1, -1})
        for (int sy : {1, -1}) {
            const int sz = sx * sy;
            const double d = std::max({distance(a.x, double(sx) * b.x), distance(a.y, double(sy) * b.y),
                                       distance(a.z, double(sz) * b.z)});
            best = std::min(best, d);
        }
    return best;
}

struct TripleCheck {
    std::array<double, 3> residuals{};
    bool verified = false;
};

/// Checks the three defining equations. Vectors must be unit to 1e-8.
inline TripleCheck verify_triple(const Tensor3& t, const SingularTriple& s, double tol) {
    const auto& d = t.dims();
    detail::require(s.x.size() == d.n1 && s.y.size() == d.n2 && s.z.size() == d.n3,
                    "verify_triple: dimension mismatch");
    detail::check_unit(norm(s.x), "verify_triple: x is not a unit vector", 1e-8);
    detail::check_unit(norm(s.y), "verify_triple: y is not a unit vector", 1e-8);
    detail::check_unit(norm(s.z), "verify_triple: z is not a unit vector", 1e-8);
    TripleCheck out;
    out.residuals = triple_residuals(t, s.tau, s.x, s.y, s.z);
    out.verified = s.tau > 0.0 &&
                   std::max({out.residuals[0], out.residuals[1], out.residuals[2]}) <= tol;
    return out;
}

enum class RefineFailure { DegenerateStart, ZeroContraction, MaxIterations };

struct NonConvergence {
    RefineFailure reason;
    std::size_t iterations = 0;
};

struct HopmResult {
    SingularTriple triple;
    std::size_t iterations = 0;
    /// <T(x,y),z> after each sweep; nondecreasing.
    std::vector<double> objective;
};

using RefineOutcome = std::variant<HopmResult, NonConvergence>;

/// Alternating power iteration: z <- T(x,y), x <- adj1(y,z), y <- adj2(x,z),
/// each normalized. Every update maximizes f in one block, so the objective
/// never decreases. Stops once the objective's relative change is below
/// cfg.iter_tol.
inline RefineOutcome hopm_refine(const Tensor3& t, const XVec& x0, const YVec& y0, const ZVec& z0,
                                 const SearchConfig& cfg) {
    const auto& d = t.dims();
    detail::require(x0.size() == d.n1 && y0.size() == d.n2 && z0.size() == d.n3,
                    "hopm_refine: dimension mismatch");
    auto xs = normalized(x0);
    auto ys = normalized(y0);
    if (!xs || !ys || !normalized(z0))
        return NonConvergence{RefineFailure::DegenerateStart, 0};
    XVec x = std::move(*xs);
    YVec y = std::move(*ys);
    ZVec z;

    HopmResult out;
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        auto zn = normalized(apply(t, x, y));
        if (!zn)
            return NonConvergence{RefineFailure::ZeroContraction, it};
        z = std::move(*zn);
        auto xn = normalized(adjoint_contract_1(t, y, z));
        if (!xn)
            return NonConvergence{RefineFailure::ZeroContraction, it};
        x = std::move(*xn);
        YVec yraw = adjoint_contract_2(t, x, z);
        const double value = norm(yraw);
        auto yn = normalized(std::move(yraw));
        if (!yn)
            return NonConvergence{RefineFailure::ZeroContraction, it};
        y = std::move(*yn);
        out.objective.push_back(value);
        if (std::abs(value - prev) <= cfg.iter_tol * std::abs(value)) {
            const double tau = trilinear(t, x, y, z);
            out.triple = canonicalize(make_triple(t, tau, std::move(x), std::move(y), std::move(z)));
            out.iterations = it;
            return out;
        }
        prev = value;
    }
    return NonConvergence{RefineFailure::MaxIterations, cfg.max_iter};
}

namespace detail {

/// Newton's method on the stationarity system
///   adj1(y,z) = l x,  adj2(x,z) = l y,  T(x,y) = l z,  |x|^2+|y|^2+|z|^2 = 3.
/// At any solution with l != 0 the three norms coincide, so they are all one.
/// Converges to saddle triples as well as maxima.
inline std::optional<SingularTriple> newton_critical_point(const Tensor3& t, const XVec& x0,
                                                           const YVec& y0, const ZVec& z0,
                                                           std::size_t max_steps = 80) {
    const auto& d = t.dims();
    const Eigen::Index n1 = d.n1, n2 = d.n2, n3 = d.n3, n = n1 + n2 + n3 + 1;
    auto xs = normalized(x0);
    auto ys = normalized(y0);
    auto zs = normalized(z0);
    if (!xs || !ys || !zs)
        return std::nullopt;

    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n1; ++i) v(i) = (*xs)[i];
    for (Eigen::Index j = 0; j < n2; ++j) v(n1 + j) = (*ys)[j];
    for (Eigen::Index k = 0; k < n3; ++k) v(n1 + n2 + k) = (*zs)[k];
    v(n - 1) = trilinear(t, *xs, *ys, *zs);

    const double scale = 1.0 + hs_norm(t);
    Eigen::MatrixXd jac(n, n);
    Eigen::VectorXd f(n);
    Eigen::MatrixXd a(n1, n2), b(n1, n3), c(n2, n3);

    auto evaluate = [&](bool with_jacobian) {
        const auto x = v.segment(0, n1);
        const auto y = v.segment(n1, n2);
        const auto z = v.segment(n1 + n2, n3);
        const double l = v(n - 1);
        a.setZero();
        b.setZero();
        c.setZero();
        for (Eigen::Index i = 0; i < n1; ++i)
            for (Eigen::Index j = 0; j < n2; ++j)
                for (Eigen::Index k = 0; k < n3; ++k) {
                    const double e = t(i, j, k);
                    if (e == 0.0)
                        continue;
                    a(i, j) += e * z(k);
                    b(i, k) += e * y(j);
                    c(j, k) += e * x(i);
                }
        f.segment(0, n1) = a * y - l * x;
        f.segment(n1, n2) = c * z - l * y;
        f.segment(n1 + n2, n3) = b.transpose() * x - l * z;
        f(n - 1) = 0.5 * (x.squaredNorm() + y.squaredNorm() + z.squaredNorm() - 3.0);
        if (!with_jacobian)
            return;
        jac.setZero();
        jac.block(0, 0, n1, n1).diagonal().setConstant(-l);
        jac.block(0, n1, n1, n2) = a;
        jac.block(0, n1 + n2, n1, n3) = b;
        jac.block(0, n - 1, n1, 1) = -x;
        jac.block(n1, 0, n2, n1) = a.transpose();
        jac.block(n1, n1, n2, n2).diagonal().setConstant(-l);
        jac.block(n1, n1 + n2, n2, n3) = c;
        jac.block(n1, n - 1, n2, 1) = -y;
        jac.block(n1 + n2, 0, n3, n1) = b.transpose();
        jac.block(n1 + n2, n1, n3, n2) = c.transpose();
        jac.block(n1 + n2, n1 + n2, n3, n3).diagonal().setConstant(-l);
        jac.block(n1 + n2, n - 1, n3, 1) = -z;
        jac.block(n - 1, 0, 1, n1) = x.transpose();
        jac.block(n - 1, n1, 1, n2) = y.transpose();
        jac.block(n - 1, n1 + n2, 1, n3) = z.transpose();
    };

    const double done = 8.0 * std::numeric_limits<double>::epsilon() * scale;
    double fnorm = std::numeric_limits<double>::infinity();
    std::size_t stalled = 0;
    for (std::size_t step = 0; step < max_steps; ++step) {
        evaluate(true);
        const double fn = f.norm();
        if (!std::isfinite(fn))
            return std::nullopt;
        if (fn <= done)
            break;
        // Past the quadratic phase the residual just jitters at rounding level.
        if (fn >= fnorm && fn < 1e-10 * scale && ++stalled >= 2)
            break;
        fnorm = std::min(fnorm, fn);
        Eigen::VectorXd delta = jac.completeOrthogonalDecomposition().solve(-f);
        if (!delta.allFinite())
            return std::nullopt;
        v += delta;
        if (v.cwiseAbs().maxCoeff() > 1e8)
            return std::nullopt;
    }
    evaluate(false);
    if (!(f.norm() <= 1e-10 * scale))
        return std::nullopt;

    XVec x(static_cast<std::size_t>(n1));
    YVec y(static_cast<std::size_t>(n2));
    ZVec z(static_cast<std::size_t>(n3));
    for (Eigen::Index i = 0; i < n1; ++i) x[i] = v(i);
    for (Eigen::Index j = 0; j < n2; ++j) y[j] = v(n1 + j);
    for (Eigen::Index k = 0; k < n3; ++k) z[k] = v(n1 + n2 + k);
    auto xn = normalized(std::move(x));
    auto yn = normalized(std::move(y));
    auto zn = normalized(std::move(z));
    if (!xn || !yn || !zn)
        return std::nullopt;
    double tau = trilinear(t, *xn, *yn, *zn);
    if (tau < 0.0) {
        tau = -tau;
        *zn = -*zn;
    }
    return canonicalize(make_triple(t, tau, std::move(*xn), std::move(*yn), std::move(*zn)));
}

inline std::uint64_t splitmix64(std::uint64_t s) {
    s += 0x9E3779B97F4A7C15ull;
    s = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9ull;
    s = (s ^ (s >> 27)) * 0x94D049BB133111EBull;
    return s ^ (s >> 31);
}

template <Space S>
Vec<S> random_unit(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        Vec<S> v(n);
        for (double& e : v)
            e = gauss(rng);
        if (auto u = normalized(std::move(v)))
            return *u;
    }
}

struct StartTriple {
    XVec x;
    YVec y;
    ZVec z;
};

/// Random unit start number `index`; depends only on (seed, index).
inline StartTriple random_start(const Dims& d, std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index + 1)));
    StartTriple s;
    s.x = random_unit<Space::H1>(rng, d.n1);
    s.y = random_unit<Space::H2>(rng, d.n2);
    s.z = random_unit<Space::K>(rng, d.n3);
    return s;
}

/// Canonical basis pairs (e_i, f_j) with z aligned to T(e_i, f_j), followed
/// by cfg.starts seeded random triples.
inline std::vector<StartTriple> search_starts(const Tensor3& t, const SearchConfig& cfg) {
    const auto& d = t.dims();
    std::vector<StartTriple> starts;
    for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = 0; j < d.n2; ++j) {
            auto x = XVec::basis(d.n1, i);
            auto y = YVec::basis(d.n2, j);
            if (auto z = normalized(apply(t, x, y)))
                starts.push_back({std::move(x), std::move(y), std::move(*z)});
        }
    const std::size_t randoms = cfg.resolved_starts(d);
    for (std::size_t s = 0; s < randoms; ++s)
        starts.push_back(random_start(d, cfg.seed, s));
    return starts;
}

}  // namespace detail

/// Singular triples sorted by tau descending, one canonical representative
/// per sign orbit.
struct Spectrum {
    std::vector<SingularTriple> triples;
    /// Set only when an exhaustive small-instance search vouches for the list.
    bool complete = false;

    /// Distinct singular values, merging those within tol * (1 + tau).
    std::vector<double> distinct_values(double tol) const {
        std::vector<double> out;
        for (const auto& s : triples)
            if (out.empty() || std::abs(out.back() - s.tau) > tol * (1.0 + s.tau))
                out.push_back(s.tau);
        return out;
    }
};

namespace detail {

inline bool same_orbit(const SingularTriple& a, const SingularTriple& b, double tol) {
    return std::abs(a.tau - b.tau) <= tol * (1.0 + std::max(a.tau, b.tau)) &&
           orbit_distance(a, b) <= tol;
}

/// Sequential merge in candidate order: keeps verified, positive, previously
/// unseen orbits; then sorts by tau descending with ties (within dedup_tol)
/// ordered lexicographically on x, then y.
inline Spectrum merge_candidates(const Tensor3& t,
                                 const std::vector<std::optional<SingularTriple>>& candidates,
                                 const SearchConfig& cfg) {
    Spectrum out;
    for (const auto& c : candidates) {
        if (!c || c->tau < cfg.residual_tol || c->max_residual() > cfg.residual_tol)
            continue;
        // Recheck against the tensor; candidates carry residuals but not unit-ness guarantees.
        if (!verify_triple(t, *c, cfg.residual_tol).verified)
            continue;
        const bool seen = std::any_of(out.triples.begin(), out.triples.end(), [&](const auto& s) {
            return same_orbit(s, *c, cfg.dedup_tol);
        });
        if (!seen)
            out.triples.push_back(canonicalize(*c));
    }
    auto& v = out.triples;
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.tau > b.tau; });
    for (std::size_t lo = 0; lo < v.size();) {
        std::size_t hi = lo + 1;
        while (hi < v.size() && std::abs(v[lo].tau - v[hi].tau) <= cfg.dedup_tol * (1.0 + v[lo].tau))
            ++hi;
        std::stable_sort(v.begin() + lo, v.begin() + hi, [&](const auto& a, const auto& b) {
            if (lex_less(a.x, b.x, cfg.dedup_tol))
                return true;
            if (lex_less(b.x, a.x, cfg.dedup_tol))
                return false;
            return lex_less(a.y, b.y, cfg.dedup_tol);
        });
        lo = hi;
    }
    return out;
}

enum class SearchMode { Maxima, AllCritical };

/// Polishes a power-iteration fixed point with Newton; falls back to the
/// unpolished triple if Newton leaves the basin.
inline std::optional<SingularTriple> refine_to_maximum(const Tensor3& t, const StartTriple& s,
                                                       const SearchConfig& cfg) {
    auto outcome = hopm_refine(t, s.x, s.y, s.z, cfg);
    auto* hit = std::get_if<HopmResult>(&outcome);
    if (!hit)
        return std::nullopt;
    auto polished = newton_critical_point(t, hit->triple.x, hit->triple.y, hit->triple.z);
    if (polished && std::abs(polished->tau - hit->triple.tau) <= 1e-6 * (1.0 + hit->triple.tau) &&
        polished->max_residual() <= hit->triple.max_residual())
        return polished;
    return hit->triple;
}

inline Spectrum search(const Tensor3& t, const SearchConfig& cfg, SearchMode mode) {
    cfg.validate();
    if (hs_norm(t) < cfg.residual_tol)
        return {};
    const auto starts = search_starts(t, cfg);
    const std::size_t per = mode == SearchMode::AllCritical ? 2 : 1;
    std::vector<std::optional<SingularTriple>> candidates(starts.size() * per);
    parallel_for(starts.size(), [&](std::size_t i) {
        candidates[i * per] = refine_to_maximum(t, starts[i], cfg);
        if (mode == SearchMode::AllCritical)
            candidates[i * per + 1] = newton_critical_point(t, starts[i].x, starts[i].y, starts[i].z);
    });
    return merge_candidates(t, candidates, cfg);
}

}  // namespace detail

/// All singular triples found by multi-start local search. Not guaranteed
/// complete; `complete` stays false.
inline Spectrum enumerate_triples(const Tensor3& t, const SearchConfig& cfg = {}) {
    return detail::search(t, cfg, detail::SearchMode::AllCritical);
}

struct NormResult {
    double value = 0.0;
    std::optional<SingularTriple> argmax;
};

/// ||T|| = sup over unit x, y of ||T(x,y)||, attained at a singular triple.
inline NormResult operator_norm(const Tensor3& t, const SearchConfig& cfg = {}) {
    auto spectrum = detail::search(t, cfg, detail::SearchMode::Maxima);
    if (spectrum.triples.empty())
        return {};
    return {spectrum.triples.front().tau, spectrum.triples.front()};
}

/// Every distinct orbit attaining ||T|| to within dedup_tol.
inline std::vector<SingularTriple> norm_maximizers(const Tensor3& t, const SearchConfig& cfg = {}) {
    auto spectrum = detail::search(t, cfg, detail::SearchMode::Maxima);
    std::vector<SingularTriple> out;
    for (auto& s : spectrum.triples) {
        if (!out.empty() && out.front().tau - s.tau > cfg.dedup_tol * (1.0 + out.front().tau))
            break;
        out.push_back(std::move(s));
    }
    return out;
}

struct OrderedCheck {
    bool ordered = false;
    /// Frobenius residuals of the three slice identities:
    ///   x -> T(x, y1)          vs tau1 <x,x1> z1
    ///   y -> T(x1, y)          vs tau1 <y,y1> z1
    ///   y -> adj1(y)(z1)       vs tau1 <y,y1> x1
    std::array<double, 3> slice_residuals{};
    /// x -> adj2(x)(z1) vs tau1 <x,x1> y1. Reported only; never gates.
    double transposed_residual = 0.0;

    double max_residual() const {
        return std::max({slice_residuals[0], slice_residuals[1], slice_residuals[2]});
    }
};

/// Whether a verified singular triple makes the frozen slices of T exactly
/// rank one. Throws if the triple is not verified at tol.
inline OrderedCheck is_ordered(const Tensor3& t, const SingularTriple& s, double tol) {
    if (!verify_triple(t, s, tol).verified)
        throw std::invalid_argument("is_ordered: triple is not a verified singular triple");
    const auto& d = t.dims();
    const double tau = s.tau;
    double ra = 0.0, rb = 0.0, rc = 0.0, rd = 0.0;
    // (a) columns T(e_i, y1) against tau x1_i z1.
    for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t k = 0; k < d.n3; ++k) {
            double m = 0.0;
            for (std::size_t j = 0; j < d.n2; ++j)
                m += t(i, j, k) * s.y[j];
            const double e = m - tau * s.z[k] * s.x[i];
            ra += e * e;
        }
    // (b) columns T(x1, f_j) against tau y1_j z1.
    for (std::size_t j = 0; j < d.n2; ++j)
        for (std::size_t k = 0; k < d.n3; ++k) {
            double m = 0.0;
            for (std::size_t i = 0; i < d.n1; ++i)
                m += t(i, j, k) * s.x[i];
            const double e = m - tau * s.z[k] * s.y[j];
            rb += e * e;
        }
    // (c) adj1(f_j)(z1) against tau y1_j x1, and its transpose (d).
    for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = 0; j < d.n2; ++j) {
            double m = 0.0;
            for (std::size_t k = 0; k < d.n3; ++k)
                m += t(i, j, k) * s.z[k];
            const double e = m - tau * s.x[i] * s.y[j];
            rc += e * e;
            const double et = m - tau * s.y[j] * s.x[i];
            rd += et * et;
        }
    OrderedCheck out;
    out.slice_residuals = {std::sqrt(ra), std::sqrt(rb), std::sqrt(rc)};
    out.transposed_residual = std::sqrt(rd);
    out.ordered = out.max_residual() <= tol;
    return out;
}

}  // namespace bilinear
