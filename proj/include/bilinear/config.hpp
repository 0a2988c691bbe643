#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "bilinear/tensor.hpp"

namespace bilinear {

/// Parameters shared by every iterative search.
struct SearchConfig {
    /// Random starts; 0 selects 64 * max(n1, n2, n3).
    std::size_t starts = 0;
    std::size_t max_iter = 10000;
    /// Relative change of <T(x,y),z> that stops the power iteration.
    double iter_tol = 1e-14;
    double residual_tol = 1e-9;
    double dedup_tol = 1e-6;
    std::uint64_t seed = 0;

    std::size_t resolved_starts(const Dims& d) const { return starts ? starts : 64 * d.max(); }

    void validate() const {
        if (max_iter == 0)
            throw std::invalid_argument("config: max_iter must be positive");
        if (!(iter_tol > 0.0) || !(residual_tol > 0.0) || !(dedup_tol > 0.0))
            throw std::invalid_argument("config: tolerances must be positive");
    }
};

}  // namespace bilinear
