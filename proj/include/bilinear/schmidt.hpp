#pragma once

// Schmidt representations T(x,y) = sum_i tau_i <x,x_i> <y,y_i> z_i with
// orthonormal families and tau_1 >= tau_2 >= ... > 0, built by deflation:
// take tau_k = ||T_k|| with an attaining triple, require that triple to be
// ordered, subtract the rank-one term and repeat on the remainder.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bilinear/config.hpp"
#include "bilinear/spectra.hpp"
#include "bilinear/tensor.hpp"

namespace bilinear {

using SchmidtTerm = RankOneTerm;

enum class SchmidtStatus { Complete, Failed };
enum class FailureReason { NotOrdered, NoTripleFound };

inline const char* to_string(SchmidtStatus s) {
    return s == SchmidtStatus::Complete ? "Complete" : "Failed";
}
inline const char* to_string(FailureReason r) {
    return r == FailureReason::NotOrdered ? "NotOrdered" : "NoTripleFound";
}

struct SchmidtRepresentation {
    Dims dims;
    /// Empty unless status is Complete.
    std::vector<SchmidtTerm> terms;
    /// hs-norm of T minus the sum of the terms (of the remainder when Failed).
    double reconstruction_residual = 0.0;
    SchmidtStatus status = SchmidtStatus::Complete;
};

struct DeflationStep {
    std::size_t index = 0;  // 1-based
    SingularTriple triple;
    /// Slice identities against the deflated operator T_k.
    OrderedCheck ordered;
    /// Slice identities against the original T (diagnostic).
    OrderedCheck ordered_original;
    /// Defining-equation residuals of the triple against the original T.
    std::array<double, 3> transfer_residuals{};
    /// ||T_{k+1}||_2 after subtracting this term.
    double remaining_hs = 0.0;
};

struct DeflationFailure {
    std::size_t step = 0;  // 1-based
    FailureReason reason = FailureReason::NoTripleFound;
    std::string diagnostics;
    std::optional<SingularTriple> triple;
    std::optional<OrderedCheck> ordered;
};

struct DeflationReport {
    double initial_hs = 0.0;
    /// Scaled tolerance residual_tol * (1 + ||T||_2) used by every check.
    double tolerance = 0.0;
    std::vector<DeflationStep> steps;
    std::optional<DeflationFailure> failure;
};

struct SchmidtResult {
    SchmidtRepresentation representation;
    DeflationReport report;
};

inline SchmidtResult schmidt_decompose(const Tensor3& t, const SearchConfig& cfg = {}) {
    cfg.validate();
    const auto& d = t.dims();
    SchmidtResult out;
    auto& rep = out.representation;
    auto& report = out.report;
    rep.dims = d;
    report.initial_hs = hs_norm(t);
    report.tolerance = cfg.residual_tol * (1.0 + report.initial_hs);
    const double tol = report.tolerance;

    std::vector<SchmidtTerm> terms;
    Tensor3 current = t;
    auto fail = [&](DeflationFailure f) {
        report.failure = std::move(f);
        rep.status = SchmidtStatus::Failed;
        rep.terms.clear();
        rep.reconstruction_residual = hs_norm(current);
        return out;
    };

    for (std::size_t k = 1;; ++k) {
        if (hs_norm(current) <= tol)
            break;
        if (k > d.min())
            return fail({k, FailureReason::NoTripleFound,
                         "remainder is nonzero after min(n1, n2, n3) orthonormal terms", {}, {}});

        const auto maximizers = norm_maximizers(current, cfg);
        if (maximizers.empty())
            return fail({k, FailureReason::NoTripleFound,
                         "no verified singular triple attains the norm of the remainder", {}, {}});

        // Among tied maximizers prefer the most nearly ordered one; the list
        // is already in deterministic order, so the first minimum wins.
        std::size_t best = 0;
        std::vector<OrderedCheck> checks;
        for (const auto& m : maximizers)
            checks.push_back(is_ordered(current, m, tol));
        for (std::size_t i = 1; i < checks.size(); ++i)
            if (checks[i].max_residual() < checks[best].max_residual())
                best = i;
        const SingularTriple& triple = maximizers[best];
        if (!checks[best].ordered)
            return fail({k, FailureReason::NotOrdered,
                         "largest singular value of the remainder is not ordered", triple,
                         checks[best]});

        const auto transfer = verify_triple(t, triple, tol);
        if (!transfer.verified)
            return fail({k, FailureReason::NotOrdered,
                         "triple of the remainder is not a singular triple of the operator", triple,
                         checks[best]});

        DeflationStep step;
        step.index = k;
        step.triple = triple;
        step.ordered = checks[best];
        step.ordered_original = is_ordered(t, triple, tol);
        step.transfer_residuals = transfer.residuals;
        current = deflate_term(current, triple.tau, triple.x, triple.y, triple.z);
        step.remaining_hs = hs_norm(current);
        report.steps.push_back(std::move(step));
        terms.push_back({triple.tau, triple.x, triple.y, triple.z});
    }

    rep.status = SchmidtStatus::Complete;
    rep.terms = std::move(terms);
    rep.reconstruction_residual = hs_distance(t, from_schmidt(d, rep.terms));
    return out;
}

/// sum_i tau_i <x,x_i> <y,y_i> z_i.
inline ZVec reconstruct(const SchmidtRepresentation& rep, const XVec& x, const YVec& y) {
    detail::require(x.size() == rep.dims.n1 && y.size() == rep.dims.n2,
                    "reconstruct: dimension mismatch");
    ZVec out(rep.dims.n3);
    for (const auto& term : rep.terms)
        out = out + (term.tau * dot(x, term.x) * dot(y, term.y)) * term.z;
    return out;
}

namespace detail {

/// max_{i,j} |<v_i, v_j> - delta_ij|.
template <Space S, class Range, class Get>
double gram_error(const Range& items, Get get) {
    double worst = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i)
        for (std::size_t j = i; j < items.size(); ++j) {
            const Vec<S>& a = get(items[i]);
            const Vec<S>& b = get(items[j]);
            worst = std::max(worst, std::abs(dot(a, b) - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

}  // namespace detail

struct RepresentationCheck {
    bool monotone = false;
    std::array<double, 3> orthonormality_error{};  // x, y, z families
    bool orthonormal = false;
    double residual = 0.0;  // hs-norm of T - sum of terms
    bool residual_ok = false;
    double value_error = 0.0;  // max_i |<T(x_i,y_i), z_i> - tau_i|
    bool values_ok = false;

    bool passed() const { return monotone && orthonormal && residual_ok && values_ok; }
};

inline RepresentationCheck verify_representation(const Tensor3& t, const SchmidtRepresentation& rep,
                                                 double tol) {
    detail::require(t.dims() == rep.dims, "verify_representation: dimension mismatch");
    const auto& terms = rep.terms;
    RepresentationCheck c;
    c.monotone = std::is_sorted(terms.begin(), terms.end(),
                                [](const auto& a, const auto& b) { return a.tau > b.tau; }) &&
                 std::all_of(terms.begin(), terms.end(), [](const auto& s) { return s.tau > 0.0; });
    c.orthonormality_error = {
        detail::gram_error<Space::H1>(terms, [](const SchmidtTerm& s) -> const XVec& { return s.x; }),
        detail::gram_error<Space::H2>(terms, [](const SchmidtTerm& s) -> const YVec& { return s.y; }),
        detail::gram_error<Space::K>(terms, [](const SchmidtTerm& s) -> const ZVec& { return s.z; })};
    c.orthonormal = std::max({c.orthonormality_error[0], c.orthonormality_error[1],
                              c.orthonormality_error[2]}) <= tol;
    c.residual = hs_distance(t, from_schmidt(rep.dims, terms));
    c.residual_ok = c.residual <= tol;
    for (const auto& s : terms)
        c.value_error = std::max(c.value_error, std::abs(trilinear(t, s.x, s.y, s.z) - s.tau));
    c.values_ok = c.value_error <= tol;
    return c;
}

/// sum_i tau_i^2; equals ||T||_2^2 for a complete representation of T.
inline double schmidt_sum_sq(const SchmidtRepresentation& rep) {
    if (rep.status != SchmidtStatus::Complete)
        throw std::invalid_argument("schmidt_sum_sq: representation is not complete");
    double s = 0.0;
    for (const auto& term : rep.terms)
        s += term.tau * term.tau;
    return s;
}

}  // namespace bilinear
