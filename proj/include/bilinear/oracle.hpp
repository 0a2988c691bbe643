#pragma once

// Brute-force validators for small operators. None of this is used by the
// solvers; it exists to cross-check them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "bilinear/config.hpp"
#include "bilinear/detail/parallel.hpp"
#include "bilinear/spectra.hpp"
#include "bilinear/tensor.hpp"

namespace bilinear::oracle {

inline constexpr std::size_t kMaxOracleDim = 4;

struct GridSpec {
    /// Points per angular coordinate on the first pass.
    std::size_t resolution = 72;
    /// Each round regrids one coarse cell around the incumbent at 10x finer spacing.
    std::size_t refinement_rounds = 2;
};

namespace detail {

inline void guard_dims(const Dims& d, const char* who) {
    if (d.n1 > kMaxOracleDim || d.n2 > kMaxOracleDim || d.n3 > kMaxOracleDim)
        throw std::invalid_argument(std::string(who) + ": every dimension must be at most 4");
}

/// Unit vector from hyperspherical angles phi_1..phi_{n-1}.
inline Eigen::VectorXd from_angles(const std::vector<double>& phi, std::size_t n) {
    Eigen::VectorXd v(n);
    double s = 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        v(i) = s * std::cos(phi[i]);
        s *= std::sin(phi[i]);
    }
    v(n - 1) = s;
    return v;
}

/// Largest singular value of the K x (other) slice matrix at a fixed unit
/// vector in the gridded space.
inline double slice_norm(const Tensor3& t, const Eigen::VectorXd& u, bool grid_over_x) {
    const auto& d = t.dims();
    const std::size_t other = grid_over_x ? d.n2 : d.n1;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d.n3, other);
    for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = 0; j < d.n2; ++j)
            for (std::size_t k = 0; k < d.n3; ++k) {
                if (grid_over_x)
                    m(k, j) += t(i, j, k) * u(i);
                else
                    m(k, i) += t(i, j, k) * u(j);
            }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.transpose() * m, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

}  // namespace detail

/// Lower bound on ||T|| = sup ||T(x,y)|| over unit x, y. One sphere is
/// gridded in hyperspherical angles (up to sign, so every angle ranges over
/// [0, pi]); the other is maximized exactly through the largest singular
/// value of the remaining slice.
inline double grid_norm_oracle(const Tensor3& t, const GridSpec& spec = {}) {
    const auto& d = t.dims();
    detail::guard_dims(d, "grid_norm_oracle");
    if (spec.resolution < 8)
        throw std::invalid_argument("grid_norm_oracle: resolution must be at least 8");
    const bool grid_over_x = d.n1 <= d.n2;
    const std::size_t n = grid_over_x ? d.n1 : d.n2;
    const std::size_t angles = n - 1;

    auto value = [&](const std::vector<double>& phi) {
        return detail::slice_norm(t, detail::from_angles(phi, n), grid_over_x);
    };
    if (angles == 0)
        return value({});

    std::vector<double> best_phi(angles, 0.0);
    double best = value(best_phi);
    // Every point lo + step * idx with idx in [0, points) per angle.
    auto sweep = [&](const std::vector<double>& lo, double step, std::size_t points) {
        std::vector<std::size_t> idx(angles, 0);
        std::vector<double> phi(angles);
        for (;;) {
            for (std::size_t a = 0; a < angles; ++a)
                phi[a] = lo[a] + step * double(idx[a]);
            const double v = value(phi);
            if (v > best) {
                best = v;
                best_phi = phi;
            }
            std::size_t a = 0;
            while (a < angles && ++idx[a] == points)
                idx[a++] = 0;
            if (a == angles)
                break;
        }
    };

    double step = std::numbers::pi / double(spec.resolution - 1);
    sweep(std::vector<double>(angles, 0.0), step, spec.resolution);
    for (std::size_t round = 0; round < spec.refinement_rounds; ++round) {
        const double half_width = step;
        step /= 10.0;
        std::vector<double> lo(angles);
        for (std::size_t a = 0; a < angles; ++a)
            lo[a] = best_phi[a] - half_width;
        sweep(lo, step, 21);
    }
    return best;
}

/// Largest central-difference derivative of f(x,y,z) = <T(x,y),z> along an
/// orthonormal tangent basis of each sphere, retracting by normalization.
/// Near zero exactly at constrained critical points.
inline double stationarity_fd_check(const Tensor3& t, const SingularTriple& s, double h = 1e-5) {
    if (!(h >= 1e-7 && h <= 1e-3))
        throw std::invalid_argument("stationarity_fd_check: h must lie in [1e-7, 1e-3]");
    const auto& d = t.dims();
    bilinear::detail::require(s.x.size() == d.n1 && s.y.size() == d.n2 && s.z.size() == d.n3,
                              "stationarity_fd_check: dimension mismatch");
    if (!(s.tau > 0.0))
        throw std::invalid_argument("stationarity_fd_check: tau must be positive");
    bilinear::detail::check_unit(norm(s.x), "stationarity_fd_check: x is not a unit vector", 1e-8);
    bilinear::detail::check_unit(norm(s.y), "stationarity_fd_check: y is not a unit vector", 1e-8);
    bilinear::detail::check_unit(norm(s.z), "stationarity_fd_check: z is not a unit vector", 1e-8);

    auto tangent_basis = []<Space S>(const Vec<S>& v) {
        std::vector<Vec<S>> basis{v};
        for (std::size_t i = 0; i < v.size() && basis.size() < v.size(); ++i) {
            Vec<S> e = Vec<S>::basis(v.size(), i);
            for (const auto& b : basis)
                e = e - dot(e, b) * b;
            if (norm(e) > 1e-6)
                basis.push_back(*normalized(std::move(e)));
        }
        basis.erase(basis.begin());
        return basis;
    };
    auto retract = []<Space S>(const Vec<S>& v) { return *normalized(v); };

    double worst = 0.0;
    auto record = [&](double plus, double minus) {
        worst = std::max(worst, std::abs(plus - minus) / (2.0 * h));
    };
    for (const auto& dir : tangent_basis(s.x))
        record(trilinear(t, retract(s.x + h * dir), s.y, s.z),
               trilinear(t, retract(s.x - h * dir), s.y, s.z));
    for (const auto& dir : tangent_basis(s.y))
        record(trilinear(t, s.x, retract(s.y + h * dir), s.z),
               trilinear(t, s.x, retract(s.y - h * dir), s.z));
    for (const auto& dir : tangent_basis(s.z))
        record(trilinear(t, s.x, s.y, retract(s.z + h * dir)),
               trilinear(t, s.x, s.y, retract(s.z - h * dir)));
    return worst;
}

namespace detail {

/// Every nonzero {-1,0,1}^n pattern with a positive first nonzero entry, normalized.
template <Space S>
std::vector<Vec<S>> sign_lattice(std::size_t n) {
    std::vector<Vec<S>> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i)
        total *= 3;
    for (std::size_t code = 1; code < total; ++code) {
        Vec<S> v(n);
        std::size_t c = code;
        for (std::size_t i = 0; i < n; ++i, c /= 3)
            v[i] = double(c % 3) - 1.0;
        const auto first = std::find_if(v.begin(), v.end(), [](double e) { return e != 0.0; });
        if (first == v.end() || *first < 0.0)
            continue;
        out.push_back(*normalized(std::move(v)));
    }
    return out;
}

}  // namespace detail

/// Independent enumeration for small operators: every sign-pattern start
/// triple plus cfg.starts random ones, each refined both by the power
/// iteration and by the Newton stationarity solve.
inline Spectrum exhaustive_small_spectrum(const Tensor3& t, const SearchConfig& cfg = {}) {
    const auto& d = t.dims();
    detail::guard_dims(d, "exhaustive_small_spectrum");
    cfg.validate();
    if (hs_norm(t) < cfg.residual_tol)
        return {{}, d.max() <= 2};

    std::vector<bilinear::detail::StartTriple> starts;
    const auto xs = detail::sign_lattice<Space::H1>(d.n1);
    const auto ys = detail::sign_lattice<Space::H2>(d.n2);
    const auto zs = detail::sign_lattice<Space::K>(d.n3);
    for (const auto& x : xs)
        for (const auto& y : ys)
            for (const auto& z : zs)
                starts.push_back({x, y, z});
    const std::size_t randoms = cfg.resolved_starts(d);
    for (std::size_t s = 0; s < randoms; ++s)
        starts.push_back(bilinear::detail::random_start(d, cfg.seed, s));

    std::vector<std::optional<SingularTriple>> candidates(2 * starts.size());
    bilinear::detail::parallel_for(starts.size(), [&](std::size_t i) {
        const auto& s = starts[i];
        candidates[2 * i] = bilinear::detail::refine_to_maximum(t, s, cfg);
        candidates[2 * i + 1] = bilinear::detail::newton_critical_point(t, s.x, s.y, s.z);
    });
    auto out = bilinear::detail::merge_candidates(t, candidates, cfg);
    out.complete = d.max() <= 2;
    return out;
}

}  // namespace bilinear::oracle
