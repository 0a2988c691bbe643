#pragma once

// Dense third-order tensors representing bilinear operators T: H1 x H2 -> K
// between finite-dimensional real Hilbert spaces, in fixed orthonormal bases.
//
// Entry t(i, j, k) = <T(e_i, f_j), g_k>. Storage is row-major with k fastest.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bilinear {

/// The three spaces a bilinear operator touches.
enum class Space { H1, H2, K };

constexpr const char* space_name(Space s) {
    switch (s) {
        case Space::H1: return "H1";
        case Space::H2: return "H2";
        case Space::K: return "K";
    }
    return "?";
}

/// A vector living in one of the operator's spaces. The tag keeps x, y and z
/// from being swapped at call sites.
template <Space S>
class Vec {
public:
    static constexpr Space space = S;

    Vec() = default;
    explicit Vec(std::size_t n) : v_(n, 0.0) {}
    explicit Vec(std::vector<double> values) : v_(std::move(values)) { check_finite(); }
    Vec(std::initializer_list<double> values) : v_(values) { check_finite(); }

    std::size_t size() const noexcept { return v_.size(); }
    bool empty() const noexcept { return v_.empty(); }

    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }

    std::span<const double> span() const noexcept { return v_; }
    const std::vector<double>& values() const noexcept { return v_; }

    auto begin() const noexcept { return v_.begin(); }
    auto end() const noexcept { return v_.end(); }
    auto begin() noexcept { return v_.begin(); }
    auto end() noexcept { return v_.end(); }

    static Vec basis(std::size_t n, std::size_t i) {
        Vec e(n);
        e.v_.at(i) = 1.0;
        return e;
    }

    friend bool operator==(const Vec&, const Vec&) = default;

private:
    void check_finite() const {
        for (double d : v_)
            if (!std::isfinite(d))
                throw std::invalid_argument(std::string("non-finite entry in ") + space_name(S) +
                                            " vector");
    }

    std::vector<double> v_;
};

using XVec = Vec<Space::H1>;
using YVec = Vec<Space::H2>;
using ZVec = Vec<Space::K>;

/// Reinterpret a vector as living in another space (used when H1 = H2 = K).
template <Space To, Space From>
Vec<To> rebind(const Vec<From>& v) {
    return Vec<To>(v.values());
}

template <Space S>
double dot(const Vec<S>& a, const Vec<S>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

template <Space S>
double norm(const Vec<S>& a) {
    return std::sqrt(dot(a, a));
}

template <Space S>
Vec<S> operator-(Vec<S> v) {
    for (double& d : v)
        d = -d;
    return v;
}

template <Space S>
Vec<S> operator*(double alpha, Vec<S> v) {
    for (double& d : v)
        d *= alpha;
    return v;
}

template <Space S>
Vec<S> operator+(Vec<S> a, const Vec<S>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("vector add: dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += b[i];
    return a;
}

template <Space S>
Vec<S> operator-(Vec<S> a, const Vec<S>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("vector subtract: dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] -= b[i];
    return a;
}

template <Space S>
double distance(const Vec<S>& a, const Vec<S>& b) {
    return norm(a - b);
}

/// Unit vector in the direction of v, or nullopt when v is (numerically) zero.
template <Space S>
std::optional<Vec<S>> normalized(Vec<S> v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n))
        return std::nullopt;
    for (double& d : v)
        d /= n;
    return v;
}

struct Dims {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t n3 = 0;

    std::size_t volume() const noexcept { return n1 * n2 * n3; }
    std::size_t max() const noexcept { return std::max({n1, n2, n3}); }
    std::size_t min() const noexcept { return std::min({n1, n2, n3}); }
    friend bool operator==(const Dims&, const Dims&) = default;
};

class Tensor3 {
public:
    explicit Tensor3(Dims dims, std::optional<std::string> name = std::nullopt)
        : dims_(checked(dims)), values_(dims.volume(), 0.0), name_(std::move(name)) {}

    Tensor3(Dims dims, std::vector<double> values, std::optional<std::string> name = std::nullopt)
        : dims_(checked(dims)), values_(std::move(values)), name_(std::move(name)) {
        if (values_.size() != dims_.volume())
            throw std::invalid_argument("tensor: values length " + std::to_string(values_.size()) +
                                        " does not match dims product " +
                                        std::to_string(dims_.volume()));
        for (double d : values_)
            if (!std::isfinite(d))
                throw std::invalid_argument("tensor: non-finite entry");
    }

    const Dims& dims() const noexcept { return dims_; }
    const std::optional<std::string>& name() const noexcept { return name_; }
    void set_name(std::optional<std::string> name) { name_ = std::move(name); }

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return (i * dims_.n2 + j) * dims_.n3 + k;
    }

    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return values_[index(i, j, k)];
    }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return values_[index(i, j, k)];
    }

    std::span<const double> values() const noexcept { return values_; }

    friend bool operator==(const Tensor3& a, const Tensor3& b) {
        return a.dims_ == b.dims_ && a.values_ == b.values_;
    }

private:
    static Dims checked(Dims d) {
        if (d.n1 == 0 || d.n2 == 0 || d.n3 == 0)
            throw std::invalid_argument("tensor: all dimensions must be positive");
        return d;
    }

    Dims dims_;
    std::vector<double> values_;
    std::optional<std::string> name_;
};

namespace detail {

inline void require(bool ok, const char* what) {
    if (!ok)
        throw std::invalid_argument(what);
}

}  // namespace detail

/// T(x, y): z_k = sum_ij t(i,j,k) x_i y_j.
inline ZVec apply(const Tensor3& t, const XVec& x, const YVec& y) {
    const auto& d = t.dims();
    detail::require(x.size() == d.n1 && y.size() == d.n2, "apply: dimension mismatch");
    ZVec z(d.n3);
    for (std::size_t i = 0; i < d.n1; ++i) {
        if (x[i] == 0.0)
            continue;
        for (std::size_t j = 0; j < d.n2; ++j) {
            const double w = x[i] * y[j];
            if (w == 0.0)
                continue;
            const double* row = &t.values()[t.index(i, j, 0)];
            for (std::size_t k = 0; k < d.n3; ++k)
                z[k] += w * row[k];
        }
    }
    return z;
}

/// Adjoint of the partial map x -> T(x, y), applied to z: sum_jk t(i,j,k) y_j z_k.
inline XVec adjoint_contract_1(const Tensor3& t, const YVec& y, const ZVec& z) {
    const auto& d = t.dims();
    detail::require(y.size() == d.n2 && z.size() == d.n3, "adjoint_contract_1: dimension mismatch");
    XVec x(d.n1);
    for (std::size_t i = 0; i < d.n1; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d.n2; ++j) {
            const double* row = &t.values()[t.index(i, j, 0)];
            double r = 0.0;
            for (std::size_t k = 0; k < d.n3; ++k)
                r += row[k] * z[k];
            s += y[j] * r;
        }
        x[i] = s;
    }
    return x;
}

/// Adjoint of the partial map y -> T(x, y), applied to z: sum_ik t(i,j,k) x_i z_k.
inline YVec adjoint_contract_2(const Tensor3& t, const XVec& x, const ZVec& z) {
    const auto& d = t.dims();
    detail::require(x.size() == d.n1 && z.size() == d.n3, "adjoint_contract_2: dimension mismatch");
    YVec y(d.n2);
    for (std::size_t i = 0; i < d.n1; ++i) {
        if (x[i] == 0.0)
            continue;
        for (std::size_t j = 0; j < d.n2; ++j) {
            const double* row = &t.values()[t.index(i, j, 0)];
            double r = 0.0;
            for (std::size_t k = 0; k < d.n3; ++k)
                r += row[k] * z[k];
            y[j] += x[i] * r;
        }
    }
    return y;
}

/// <T(x, y), z>.
inline double trilinear(const Tensor3& t, const XVec& x, const YVec& y, const ZVec& z) {
    return dot(apply(t, x, y), z);
}

/// Hilbert-Schmidt norm: Frobenius norm of the entries in any orthonormal basis.
inline double hs_norm(const Tensor3& t) {
    double s = 0.0;
    for (double v : t.values())
        s += v * v;
    return std::sqrt(s);
}

inline double hs_distance(const Tensor3& a, const Tensor3& b) {
    detail::require(a.dims() == b.dims(), "hs_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t n = 0; n < a.values().size(); ++n) {
        const double e = a.values()[n] - b.values()[n];
        s += e * e;
    }
    return std::sqrt(s);
}

inline constexpr double kOrthogonalityTol = 1e-10;

inline bool is_orthogonal(const Eigen::MatrixXd& q, double tol = kOrthogonalityTol) {
    if (q.rows() != q.cols())
        return false;
    const Eigen::MatrixXd gram = q.transpose() * q;
    return (gram - Eigen::MatrixXd::Identity(q.rows(), q.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// Re-express T in new orthonormal bases given by the columns of u, v, w:
/// t'(m,n,p) = <T(u_m, v_n), w_p>.
inline Tensor3 change_basis(const Tensor3& t, const Eigen::MatrixXd& u, const Eigen::MatrixXd& v,
                            const Eigen::MatrixXd& w) {
    const auto& d = t.dims();
    detail::require(u.rows() == static_cast<Eigen::Index>(d.n1) &&
                        v.rows() == static_cast<Eigen::Index>(d.n2) &&
                        w.rows() == static_cast<Eigen::Index>(d.n3),
                    "change_basis: dimension mismatch");
    detail::require(is_orthogonal(u) && is_orthogonal(v) && is_orthogonal(w),
                    "change_basis: basis matrix is not orthogonal");

    // Contract one mode at a time.
    std::vector<double> a(d.volume(), 0.0), b(d.volume(), 0.0);
    auto at = [&](std::size_t i, std::size_t j, std::size_t k) { return (i * d.n2 + j) * d.n3 + k; };
    for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = 0; j < d.n2; ++j)
            for (std::size_t k = 0; k < d.n3; ++k)
                for (std::size_t p = 0; p < d.n3; ++p)
                    a[at(i, j, p)] += t(i, j, k) * w(k, p);
    for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = 0; j < d.n2; ++j)
            for (std::size_t n = 0; n < d.n2; ++n)
                for (std::size_t p = 0; p < d.n3; ++p)
                    b[at(i, n, p)] += a[at(i, j, p)] * v(j, n);
    std::fill(a.begin(), a.end(), 0.0);
    for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t m = 0; m < d.n1; ++m)
            for (std::size_t n = 0; n < d.n2; ++n)
                for (std::size_t p = 0; p < d.n3; ++p)
                    a[at(m, n, p)] += b[at(i, n, p)] * u(i, m);
    return Tensor3(d, std::move(a), t.name());
}

/// One summand tau * x (x) y (x) z of a rank-one expansion.
struct RankOneTerm {
    double tau = 0.0;
    XVec x;
    YVec y;
    ZVec z;
};

/// t - tau * x (x) y (x) z.
inline Tensor3 deflate_term(const Tensor3& t, double tau, const XVec& x, const YVec& y,
                            const ZVec& z) {
    const auto& d = t.dims();
    detail::require(x.size() == d.n1 && y.size() == d.n2 && z.size() == d.n3,
                    "deflate_term: dimension mismatch");
    Tensor3 out = t;
    if (tau == 0.0)
        return out;
    for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = 0; j < d.n2; ++j) {
            const double w = tau * x[i] * y[j];
            for (std::size_t k = 0; k < d.n3; ++k)
                out(i, j, k) -= w * z[k];
        }
    return out;
}

/// sum_i tau_i x_i (x) y_i (x) z_i. Dims are required so the empty sum is defined.
inline Tensor3 from_schmidt(Dims dims, std::span<const RankOneTerm> terms) {
    Tensor3 out(dims);
    for (const auto& term : terms)
        out = deflate_term(out, -term.tau, term.x, term.y, term.z);
    return out;
}

inline Tensor3 from_schmidt(Dims dims, std::initializer_list<RankOneTerm> terms) {
    return from_schmidt(dims, std::span<const RankOneTerm>(terms.begin(), terms.size()));
}

}  // namespace bilinear
