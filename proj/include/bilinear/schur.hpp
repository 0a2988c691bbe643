#pragma once

// Schur representations T(x,y) = sum_i lambda_i <x,x_i> <y,x_i> x_i of
// symmetric self-adjoint operators on a single space, obtained from a
// Schmidt representation by resolving signs: for such operators each Schmidt
// term has <y_i,x_i> = +-1 and <z_i,x_i> = +-1, and lambda_i is tau_i times
// the product of the two signs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "bilinear/schmidt.hpp"
#include "bilinear/tensor.hpp"

namespace bilinear {

/// A result that contradicts the sign analysis for self-adjoint operators.
class InconsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SchurTerm {
    double lambda = 0.0;
    XVec x;
};

struct SchurRepresentation {
    std::size_t dim = 0;
    std::vector<SchurTerm> terms;
};

/// t(i,j,k) = t(j,i,k), i.e. T(x,y) = T(y,x).
inline bool is_symmetric(const Tensor3& t, double tol) {
    const auto& d = t.dims();
    detail::require(d.n1 == d.n2, "is_symmetric: n1 != n2");
    for (std::size_t i = 0; i < d.n1; ++i)
        for (std::size_t j = i + 1; j < d.n2; ++j)
            for (std::size_t k = 0; k < d.n3; ++k)
                if (std::abs(t(i, j, k) - t(j, i, k)) > tol)
                    return false;
    return true;
}

/// <T(x,y),z> = <y,T(x,z)> and <T(y,x),z> = <y,T(z,x)> on basis vectors:
/// t(i,j,k) = t(i,k,j) and t(j,i,k) = t(k,i,j).
inline bool is_self_adjoint(const Tensor3& t, double tol) {
    const auto& d = t.dims();
    detail::require(d.n1 == d.n2 && d.n2 == d.n3, "is_self_adjoint: dimensions differ");
    const std::size_t n = d.n1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (std::abs(t(i, j, k) - t(i, k, j)) > tol || std::abs(t(j, i, k) - t(k, i, j)) > tol)
                    return false;
    return true;
}

inline Tensor3 from_schur(const SchurRepresentation& s) {
    Tensor3 out({s.dim, s.dim, s.dim});
    for (const auto& term : s.terms)
        out = deflate_term(out, -term.lambda, term.x, rebind<Space::H2>(term.x),
                           rebind<Space::K>(term.x));
    return out;
}

/// sum_i lambda_i <x,x_i> <y,x_i> x_i.
inline XVec reconstruct(const SchurRepresentation& s, const XVec& x, const XVec& y) {
    detail::require(x.size() == s.dim && y.size() == s.dim, "reconstruct: dimension mismatch");
    XVec out(s.dim);
    for (const auto& term : s.terms)
        out = out + (term.lambda * dot(x, term.x) * dot(y, term.x)) * term.x;
    return out;
}

inline SchurRepresentation schur_from_schmidt(const Tensor3& t, const SchmidtRepresentation& rep,
                                              double tol) {
    const auto& d = t.dims();
    detail::require(d.n1 == d.n2 && d.n2 == d.n3, "schur_from_schmidt: dimensions differ");
    detail::require(is_symmetric(t, tol), "schur_from_schmidt: operator is not symmetric");
    detail::require(is_self_adjoint(t, tol), "schur_from_schmidt: operator is not self-adjoint");
    detail::require(rep.status == SchmidtStatus::Complete,
                    "schur_from_schmidt: Schmidt representation is not complete");
    detail::require(verify_representation(t, rep, tol).passed(),
                    "schur_from_schmidt: Schmidt representation does not verify against the operator");

    SchurRepresentation out;
    out.dim = d.n1;
    for (std::size_t i = 0; i < rep.terms.size(); ++i) {
        const auto& term = rep.terms[i];
        const double s1 = dot(rebind<Space::H1>(term.y), term.x);
        const double s2 = dot(rebind<Space::H1>(term.z), term.x);
        if (std::abs(std::abs(s1) - 1.0) > tol || std::abs(std::abs(s2) - 1.0) > tol)
            throw InconsistencyError("schur_from_schmidt: term " + std::to_string(i + 1) +
                                     " has <y,x> = " + std::to_string(s1) +
                                     ", <z,x> = " + std::to_string(s2) + "; expected +-1");
        const double sign = (s1 < 0.0) == (s2 < 0.0) ? 1.0 : -1.0;
        out.terms.push_back({sign * term.tau, term.x});
    }
    std::stable_sort(out.terms.begin(), out.terms.end(), [tol](const auto& a, const auto& b) {
        const double ma = std::abs(a.lambda), mb = std::abs(b.lambda);
        if (std::abs(ma - mb) > tol)
            return ma > mb;
        if ((a.lambda > 0.0) != (b.lambda > 0.0))
            return a.lambda > 0.0;
        return detail::lex_less(a.x, b.x, tol);
    });
    return out;
}

struct SchurCheck {
    double residual = 0.0;  // hs-norm of T - sum_i lambda_i x_i (x) x_i (x) x_i
    bool residual_ok = false;
    double orthonormality_error = 0.0;
    bool orthonormal = false;
    bool monotone = false;

    bool passed() const { return residual_ok && orthonormal && monotone; }
};

inline SchurCheck verify_schur(const Tensor3& t, const SchurRepresentation& s, double tol) {
    const auto& d = t.dims();
    detail::require(d.n1 == d.n2 && d.n2 == d.n3 && d.n1 == s.dim, "verify_schur: dimensions differ");
    SchurCheck c;
    c.residual = hs_distance(t, from_schur(s));
    c.residual_ok = c.residual <= tol;
    c.orthonormality_error =
        detail::gram_error<Space::H1>(s.terms, [](const SchurTerm& e) -> const XVec& { return e.x; });
    c.orthonormal = c.orthonormality_error <= tol;
    c.monotone = std::is_sorted(s.terms.begin(), s.terms.end(), [](const auto& a, const auto& b) {
        return std::abs(a.lambda) > std::abs(b.lambda);
    });
    return c;
}

}  // namespace bilinear
